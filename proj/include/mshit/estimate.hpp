#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>

namespace mshit {

/// Monte Carlo result. For proportions ci_lo/ci_hi is the Wilson 95%
/// interval, except at 0 or n successes where the exact one-sided 95% bound
/// (the rule of three, 1 - 0.05^(1/n)) replaces the open side.
struct Estimate
{
    double value = 0.0;
    double se = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

inline constexpr double z95 = 1.959963984540054;

Estimate proportion_estimate(std::size_t successes, std::size_t n, std::uint64_t seed);

/// Mean with standard error sd/sqrt(n) and a normal 95% interval.
/// se is +inf when n == 1.
Estimate mean_estimate(std::span<const double> values, std::uint64_t seed);

/// Welford accumulator. Adding identical values keeps the mean bit-exact.
class RunningMean
{
public:
    void add(double x) noexcept
    {
        ++n_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }

    std::size_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    double variance() const noexcept;
    double standard_error() const noexcept;

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Kolmogorov-Smirnov distance between a sample and x -> exp(x) on (-inf, 0].
/// Sorts a copy; throws std::invalid_argument on an empty sample.
double ks_distance_neg_exponential(std::span<const double> sample);

/// Asymptotic 95% KS band 1.63 / sqrt(n).
inline double ks_band95(std::size_t n) noexcept
{
    return 1.63 / std::sqrt(static_cast<double>(n));
}

}  // namespace mshit
