#include "mshit/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mshit {

Estimate proportion_estimate(std::size_t successes, std::size_t n, std::uint64_t seed)
{
    if (n == 0)
        throw std::invalid_argument("proportion estimate needs n >= 1");
    if (successes > n)
        throw std::invalid_argument("more successes than trials");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;

    Estimate e;
    e.value = p;
    e.se = std::sqrt(p * (1.0 - p) / nn);
    e.n = n;
    e.seed = seed;

    const double z2 = z95 * z95;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / denom;
    const double half = z95 * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    e.ci_lo = std::max(0.0, centre - half);
    e.ci_hi = std::min(1.0, centre + half);

    const double rule_of_three = 1.0 - std::pow(0.05, 1.0 / nn);
    if (successes == 0) {
        e.ci_lo = 0.0;
        e.ci_hi = rule_of_three;
    } else if (successes == n) {
        e.ci_lo = 1.0 - rule_of_three;
        e.ci_hi = 1.0;
    }
    return e;
}

double RunningMean::variance() const noexcept
{
    if (n_ < 2)
        return std::numeric_limits<double>::infinity();
    return m2_ / static_cast<double>(n_ - 1);
}

double RunningMean::standard_error() const noexcept
{
    if (n_ < 2)
        return std::numeric_limits<double>::infinity();
    return std::sqrt(std::max(0.0, variance()) / static_cast<double>(n_));
}

Estimate mean_estimate(std::span<const double> values, std::uint64_t seed)
{
    if (values.empty())
        throw std::invalid_argument("mean estimate of an empty sample");
    RunningMean acc;
    for (double v : values)
        acc.add(v);
    Estimate e;
    e.value = acc.mean();
    e.se = acc.standard_error();
    e.ci_lo = e.value - z95 * e.se;
    e.ci_hi = e.value + z95 * e.se;
    e.n = values.size();
    e.seed = seed;
    return e;
}

double ks_distance_neg_exponential(std::span<const double> sample)
{
    if (sample.empty())
        throw std::invalid_argument("KS distance of an empty sample");
    std::vector<double> xs(sample.begin(), sample.end());
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = xs[i] >= 0.0 ? 1.0 : std::exp(xs[i]);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
        d = std::max(d, f - static_cast<double>(i) / n);
    }
    return d;
}

}  // namespace mshit
