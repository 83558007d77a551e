#include "mshit/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mshit/msp.hpp"

namespace mshit {

namespace {

void require_negative_level(double x)
{
    if (!(x < 0.0))
        throw std::invalid_argument("level must be negative");
}

std::span<const double> window_of(std::span<const double> eta, IndexRange r)
{
    return eta.subspan(r.first, r.size());
}

std::size_t grid_index(const TimeGrid& grid, double t, const char* name)
{
    const std::size_t i = grid.find(t);
    if (i == TimeGrid::npos)
        throw std::invalid_argument(std::string(name) + " is not a grid point");
    return i;
}

}  // namespace

Estimate hitting_prob(const GeneratorSpec& spec, double x, const Interval& interval, const TimeGrid& grid,
                      std::size_t n, std::uint64_t seed)
{
    require_negative_level(x);
    const IndexRange r = grid_range(grid, interval);
    const MspSampler sampler{spec, grid};
    const auto out = replicate_msp(sampler, n, seed, 1, [&](std::span<const double> eta, std::span<double> row) {
        row[0] = hits_level(window_of(eta, r), x);
    });
    return column_proportion(out, 1, 0, seed);
}

Estimate function_hitting_prob(const GeneratorSpec& spec, const LevelFunction& f, const Interval& interval,
                               std::size_t n, std::uint64_t seed)
{
    const TimeGrid& grid = f.grid();
    const IndexRange r = grid_range(grid, interval);
    const auto level = f.values();
    const MspSampler sampler{spec, grid};
    const auto out = replicate_msp(sampler, n, seed, 1, [&](std::span<const double> eta, std::span<double> row) {
        bool below = false;
        bool above = false;
        for (std::size_t j = r.first; j <= r.last; ++j) {
            below |= eta[j] <= level[j];
            above |= eta[j] >= level[j];
        }
        row[0] = below && above;
    });
    return column_proportion(out, 1, 0, seed);
}

HittingCurve hitting_curve(const GeneratorSpec& spec, std::span<const double> levels, const Interval& interval,
                           const TimeGrid& grid, std::size_t n, std::uint64_t seed,
                           std::optional<GeneratorConstants> constants)
{
    if (levels.empty())
        throw std::invalid_argument("hitting curve needs at least one level");
    for (std::size_t j = 0; j < levels.size(); ++j) {
        require_negative_level(levels[j]);
        if (j > 0 && !(levels[j] < levels[j - 1]))
            throw std::invalid_argument("hitting curve levels must be strictly decreasing");
    }
    const IndexRange r = grid_range(grid, interval);
    const MspSampler sampler{spec, grid};
    const std::size_t k = levels.size();
    const auto out = replicate_msp(sampler, n, seed, k, [&](std::span<const double> eta, std::span<double> row) {
        const auto w = window_of(eta, r);
        const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
        for (std::size_t j = 0; j < k; ++j)
            row[j] = *lo <= levels[j] && levels[j] <= *hi;
    });

    if (!constants) {
        const auto mom = generator_moments(spec, grid, n, seed);
        constants = GeneratorConstants{mom.m_hat.value, std::min(mom.m_tilde_hat.value, mom.m_hat.value)};
    }

    HittingCurve curve;
    curve.levels.assign(levels.begin(), levels.end());
    for (std::size_t j = 0; j < k; ++j) {
        curve.estimates.push_back(column_proportion(out, k, j, seed));
        curve.upper_bounds.push_back(hitting_bound(std::max(1.0, constants->m), constants->m_tilde, levels[j]));
    }
    return curve;
}

std::vector<double> default_integral_levels(std::size_t count, double x_min)
{
    if (count < 1 || !(x_min < 0.0))
        throw std::invalid_argument("integral levels need count >= 1 and x_min < 0");
    std::vector<double> out;
    out.reserve(count);
    const double c = static_cast<double>(count);
    for (std::size_t j = 1; j <= count; ++j) {
        const double u = static_cast<double>(j) / c;
        out.push_back(x_min * u * u);
    }
    return out;
}

HittingIntegral hitting_integral(const HittingCurve& curve, double m_tilde)
{
    const auto& x = curve.levels;
    if (x.size() < 3)
        throw std::invalid_argument("hitting integral needs at least 3 levels");
    if (curve.estimates.size() != x.size())
        throw std::invalid_argument("hitting curve has mismatched estimates");
    for (std::size_t j = 1; j < x.size(); ++j) {
        if (!(x[j] < x[j - 1]))
            throw std::invalid_argument("hitting curve levels are not sorted decreasing");
    }
    if (!(x.front() < 0.0))
        throw std::invalid_argument("hitting curve levels must be negative");
    if (!(m_tilde >= 0.0))
        throw std::invalid_argument("m_tilde must be nonnegative");

    // h(0) = 0 closes the curve at the origin.
    double integral = 0.5 * (0.0 - x.front()) * curve.estimates.front().value;
    for (std::size_t j = 1; j < x.size(); ++j)
        integral += 0.5 * (x[j - 1] - x[j]) * (curve.estimates[j - 1].value + curve.estimates[j].value);

    const double tail = m_tilde > 0.0 ? std::exp(x.back() * m_tilde) / m_tilde
                                      : std::numeric_limits<double>::infinity();
    return {integral, tail};
}

Estimate down_up_down_prob(const GeneratorSpec& spec, const TripleQuery& q, const TimeGrid& grid, std::size_t n,
                           std::uint64_t seed)
{
    require_negative_level(q.x0);
    if (!(q.t_prime < q.t0 && q.t0 < q.t_double))
        throw std::invalid_argument("query times must satisfy t' < t0 < t''");
    const std::size_t i1 = grid_index(grid, q.t_prime, "t'");
    const std::size_t i0 = grid_index(grid, q.t0, "t0");
    const std::size_t i2 = grid_index(grid, q.t_double, "t''");
    const MspSampler sampler{spec, grid};
    const auto out = replicate_msp(sampler, n, seed, 1, [&](std::span<const double> eta, std::span<double> row) {
        row[0] = eta[i1] <= q.x0 && eta[i0] > q.x0 && eta[i2] <= q.x0;
    });
    return column_proportion(out, 1, 0, seed);
}

Estimate two_hit_prob(const GeneratorSpec& spec, const SplitQuery& q, const TimeGrid& grid, std::size_t n,
                      std::uint64_t seed)
{
    require_negative_level(q.x0);
    if (!(q.t_prime < q.t0 && q.t0 < q.t_double))
        throw std::invalid_argument("split time must be interior: t' < t0 < t''");
    const Interval windows[] = {Interval{q.t_prime, q.t0}, Interval{q.t0, q.t_double}};
    return multi_hit_prob(spec, q.x0, windows, grid, n, seed);
}

Estimate multi_hit_prob(const GeneratorSpec& spec, double x0, std::span<const Interval> intervals,
                        const TimeGrid& grid, std::size_t n, std::uint64_t seed)
{
    require_negative_level(x0);
    if (intervals.empty())
        throw std::invalid_argument("multi_hit_prob needs at least one interval");
    for (std::size_t a = 0; a < intervals.size(); ++a) {
        for (std::size_t b = a + 1; b < intervals.size(); ++b) {
            if (intervals[a].lo < intervals[b].hi && intervals[b].lo < intervals[a].hi)
                throw std::invalid_argument("intervals overlap");
        }
    }
    std::vector<IndexRange> ranges;
    for (const auto& iv : intervals)
        ranges.push_back(grid_range(grid, iv));
    const MspSampler sampler{spec, grid};
    const auto out = replicate_msp(sampler, n, seed, 1, [&](std::span<const double> eta, std::span<double> row) {
        bool all = true;
        for (const auto& r : ranges) {
            if (!hits_level(window_of(eta, r), x0)) {
                all = false;
                break;
            }
        }
        row[0] = all;
    });
    return column_proportion(out, 1, 0, seed);
}

double hitting_bound(double m, double m_tilde, double x)
{
    if (m < m_tilde)
        throw std::invalid_argument("hitting_bound needs m >= m_tilde");
    if (!(m >= 1.0) || !(m_tilde >= 0.0))
        throw std::invalid_argument("hitting_bound needs m >= 1 and m_tilde >= 0");
    return std::max(0.0, std::exp(x * m_tilde) - std::exp(x * m));
}

namespace {

// Per level: all of the window <= x0, both endpoints <= x0, both endpoints > x0.
std::vector<double> window_events(const GeneratorSpec& spec, std::span<const double> levels, const Interval& window,
                                  const TimeGrid& grid, std::size_t n, std::uint64_t seed)
{
    if (levels.empty())
        throw std::invalid_argument("need at least one level");
    for (double x : levels)
        require_negative_level(x);
    const IndexRange r = grid_range(grid, window);
    const MspSampler sampler{spec, grid};
    const std::size_t k = 3 * levels.size();
    return replicate_msp(sampler, n, seed, k, [&](std::span<const double> eta, std::span<double> row) {
        const auto w = window_of(eta, r);
        const double top = *std::max_element(w.begin(), w.end());
        for (std::size_t j = 0; j < levels.size(); ++j) {
            const double x0 = levels[j];
            row[3 * j] = top <= x0;
            row[3 * j + 1] = eta[r.first] <= x0 && eta[r.last] <= x0;
            row[3 * j + 2] = eta[r.first] > x0 && eta[r.last] > x0;
        }
    });
}

template <class Combine>
std::vector<Estimate> per_level_means(std::span<const double> ev, std::span<const double> levels, std::size_t n,
                                      std::uint64_t seed, Combine&& combine)
{
    const std::size_t k = 3 * levels.size();
    std::vector<Estimate> out;
    std::vector<double> r(n);
    for (std::size_t j = 0; j < levels.size(); ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = &ev[i * k + 3 * j];
            r[i] = combine(levels[j], row[0], row[1], row[2]);
        }
        out.push_back(mean_estimate(r, seed));
    }
    return out;
}

}  // namespace

std::vector<Estimate> survivor_identity_residual(const GeneratorSpec& spec, std::span<const double> levels,
                                                 const Interval& window, const TimeGrid& grid, std::size_t n,
                                                 std::uint64_t seed)
{
    const auto ev = window_events(spec, levels, window, grid, n, seed);
    return per_level_means(ev, levels, n, seed, [](double x0, double all_below, double, double both_above) {
        return all_below - both_above - (2.0 * std::exp(x0) - 1.0);
    });
}

std::vector<Estimate> interval_cdf_gap(const GeneratorSpec& spec, std::span<const double> levels,
                                       const Interval& window, const TimeGrid& grid, std::size_t n,
                                       std::uint64_t seed)
{
    const auto ev = window_events(spec, levels, window, grid, n, seed);
    return per_level_means(ev, levels, n, seed,
                           [](double, double all_below, double both_below, double) { return all_below - both_below; });
}

}  // namespace mshit
