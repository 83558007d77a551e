#include "mshit/dnorm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "mshit/replicate.hpp"
#include "mshit/rng.hpp"

namespace mshit {

LevelFunction::LevelFunction(TimeGrid grid, std::vector<double> values, LevelShape shape)
    : grid_(std::move(grid)), values_(std::move(values)), shape_(shape)
{
    if (values_.size() != grid_.size())
        throw std::invalid_argument("level function does not match its grid");
    bool negative = false;
    for (double v : values_) {
        if (!std::isfinite(v))
            throw std::invalid_argument("level function values must be finite");
        if (v > 0.0)
            throw std::invalid_argument("level function must be nonpositive");
        negative |= v < 0.0;
    }
    if (!negative)
        throw std::invalid_argument("level function must be strictly negative somewhere");
}

LevelFunction LevelFunction::constant(TimeGrid grid, double level)
{
    std::vector<double> v(grid.size(), level);
    return {std::move(grid), std::move(v), LevelShape::constant};
}

LevelFunction LevelFunction::indicator_step(TimeGrid grid, Interval interval, double level, double base)
{
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        v[i] = (interval.lo <= grid[i] && grid[i] <= interval.hi) ? level : base;
    return {std::move(grid), std::move(v), LevelShape::indicator_step};
}

LevelFunction LevelFunction::piecewise_linear(TimeGrid grid, std::vector<std::pair<double, double>> breakpoints)
{
    if (breakpoints.size() < 2)
        throw std::invalid_argument("piecewise-linear level function needs at least 2 breakpoints");
    if (breakpoints.front().first != 0.0 || breakpoints.back().first != 1.0)
        throw std::invalid_argument("breakpoints must start at t=0 and end at t=1");
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        if (!(breakpoints[i].first > breakpoints[i - 1].first))
            throw std::invalid_argument("breakpoint times must be strictly increasing");
    }
    std::vector<double> v(grid.size());
    std::size_t seg = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        while (seg + 2 < breakpoints.size() && t > breakpoints[seg + 1].first)
            ++seg;
        const auto [t0, v0] = breakpoints[seg];
        const auto [t1, v1] = breakpoints[seg + 1];
        const double w = (t - t0) / (t1 - t0);
        v[i] = t == t1 ? v1 : v0 + w * (v1 - v0);
    }
    return {std::move(grid), std::move(v), LevelShape::piecewise_linear};
}

double LevelFunction::sup_norm() const noexcept
{
    double s = 0.0;
    for (double v : values_)
        s = std::max(s, -v);
    return s;
}

LevelFunction LevelFunction::scaled(double c) const
{
    std::vector<double> v(values_);
    const double k = std::abs(c);
    for (auto& x : v)
        x *= k;
    return {grid_, std::move(v), shape_};
}

namespace {

std::uint64_t values_salt(std::span<const double> values)
{
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (double v : values) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        h = (h ^ bits) * 0x100000001b3ULL;
    }
    return h;
}

DNormEstimate to_dnorm(std::span<const double> draws)
{
    RunningMean acc;
    for (double v : draws)
        acc.add(v);
    return {acc.mean(), acc.standard_error(), acc.count()};
}

// Per-draw reduction of |f(t)| Z_t over the grid, streamed from the generator tag.
template <class Reduce>
std::vector<double> weighted_draws(const GeneratorSpec& spec, const TimeGrid& grid, std::span<const double> weight,
                                   std::size_t n, std::uint64_t seed, Reduce&& reduce)
{
    const GeneratorSampler sampler{spec, grid};
    std::vector<double> out(n);
    run_replicas(
        n, [&] { return std::vector<double>(grid.size()); },
        [&](std::size_t i, std::vector<double>& z) {
            Stream stream = replica_stream(seed, tags::generator, i);
            sampler.draw(stream, z);
            out[i] = reduce(z, weight);
        });
    return out;
}

double weighted_max(std::span<const double> z, std::span<const double> f)
{
    double s = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j)
        s = std::max(s, -f[j] * z[j]);
    return s;
}

double weighted_min(std::span<const double> z, std::span<const double> f)
{
    double s = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < z.size(); ++j)
        s = std::min(s, -f[j] * z[j]);
    return s;
}

}  // namespace

DNormEstimate dnorm_estimate(const GeneratorSpec& spec, const LevelFunction& f, std::size_t n, std::uint64_t seed,
                             DrawMode mode)
{
    if (n < 2)
        throw std::invalid_argument("dnorm_estimate needs n >= 2");
    const std::uint64_t s = mode == DrawMode::shared ? seed : seed ^ values_salt(f.values());
    return to_dnorm(weighted_draws(spec, f.grid(), f.values(), n, s, weighted_max));
}

DNormEstimate dnorm_indicator(const GeneratorSpec& spec, const Interval& interval, const TimeGrid& grid,
                              std::size_t n, std::uint64_t seed)
{
    if (n < 1)
        throw std::invalid_argument("dnorm_indicator needs n >= 1");
    const IndexRange r = grid_range(grid, interval);
    std::vector<double> weight(grid.size(), 0.0);
    std::fill(weight.begin() + static_cast<std::ptrdiff_t>(r.first),
              weight.begin() + static_cast<std::ptrdiff_t>(r.last + 1), -1.0);
    return to_dnorm(weighted_draws(spec, grid, weight, n, seed, weighted_max));
}

double survivor_lower_bound(const GeneratorSpec& spec, const LevelFunction& f, std::size_t n, std::uint64_t seed)
{
    if (n < 1)
        throw std::invalid_argument("survivor_lower_bound needs n >= 1");
    const auto draws = weighted_draws(spec, f.grid(), f.values(), n, seed, weighted_min);
    return 1.0 - std::exp(-to_dnorm(draws).value);
}

TakahashiReport takahashi_check(const GeneratorSpec& spec, std::span<const LevelFunction> probes, std::size_t n,
                                std::uint64_t seed)
{
    if (probes.size() < 3)
        throw std::invalid_argument("takahashi_check needs at least 3 probe functions");
    TakahashiReport report;
    report.complete_dependence = true;
    for (const auto& f : probes) {
        const auto d = dnorm_estimate(spec, f, n, seed);
        const double sup = f.sup_norm();
        const bool equal = std::abs(d.value - sup) <= 3.0 * d.se;
        report.probes.push_back({d.value, sup, d.se, equal});
        report.complete_dependence = report.complete_dependence && equal;
    }
    report.m_hat = generator_moments(spec, probes.front().grid(), n, seed).m_hat;
    return report;
}

std::vector<LevelFunction> default_probes(const TimeGrid& grid)
{
    std::vector<LevelFunction> out;
    out.push_back(LevelFunction::constant(grid, -1.0));
    out.push_back(LevelFunction::piecewise_linear(grid, {{0.0, -0.5}, {1.0, -1.5}}));
    out.push_back(LevelFunction::indicator_step(grid, Interval{0.5, 1.0}, -1.0));
    return out;
}

GeneratorCorpus::GeneratorCorpus(const GeneratorSpec& spec, const TimeGrid& grid, std::size_t n, std::uint64_t seed)
    : grid_(grid), n_(n), data_(n * grid.size())
{
    const GeneratorSampler sampler{spec, grid};
    run_replicas(
        n, [] { return 0; },
        [&](std::size_t i, int&) {
            Stream stream = replica_stream(seed, tags::generator, i);
            sampler.draw(stream, std::span<double>(data_).subspan(i * grid_.size(), grid_.size()));
        });
}

std::vector<double> GeneratorCorpus::weighted_sup(const LevelFunction& f) const
{
    if (!(f.grid() == grid_))
        throw std::invalid_argument("level function grid differs from the corpus grid");
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        out[i] = weighted_max(path(i), f.values());
    return out;
}

std::vector<double> GeneratorCorpus::weighted_inf(const LevelFunction& f) const
{
    if (!(f.grid() == grid_))
        throw std::invalid_argument("level function grid differs from the corpus grid");
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        out[i] = weighted_min(path(i), f.values());
    return out;
}

DNormEstimate GeneratorCorpus::dnorm(const LevelFunction& f) const
{
    return to_dnorm(weighted_sup(f));
}

}  // namespace mshit
