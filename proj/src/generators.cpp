#include "mshit/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mshit/replicate.hpp"

namespace mshit {

namespace {

template <class... Ts>
struct overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check(std::vector<std::string>& out, bool ok, const char* constraint)
{
    if (!ok)
        out.push_back(std::string(constraint) + " violated");
}

double nonlinear_scale(const NonlinearExample& s) noexcept
{
    return 1.0 - s.c * (s.a - 1.0) / (s.a - s.b);
}

// Interpolate the piecewise-linear path through (0, z0), (1/2, zh), (1, z1).
void three_knot_path(const TimeGrid& grid, NonlinearKnots k, std::span<double> out)
{
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        out[i] = t <= 0.5 ? 2.0 * (0.5 - t) * k.z0 + 2.0 * t * k.z_half
                          : 2.0 * (1.0 - t) * k.z_half + 2.0 * (t - 0.5) * k.z1;
    }
}

template <class Fn>
double nonlinear_expectation(const NonlinearExample& s, Fn&& fn)
{
    const double p = s.p();
    const double pt = s.p_tilde();
    double total = 0.0;
    for (int y = 0; y < 2; ++y) {
        for (int yt = 0; yt < 2; ++yt) {
            const double w = (y ? p : 1.0 - p) * (yt ? pt : 1.0 - pt);
            total += w * fn(nonlinear_knots(s, y != 0, yt != 0));
        }
    }
    return total;
}

}  // namespace

std::string variant_name(const GeneratorSpec& spec)
{
    return std::visit(overloaded{
                          [](const CompleteDependence&) { return std::string("CompleteDependence"); },
                          [](const PiecewiseExample&) { return std::string("PiecewiseExample"); },
                          [](const NonlinearExample&) { return std::string("NonlinearExample"); },
                          [](const TwoBranch&) { return std::string("TwoBranch"); },
                          [](const SineBump&) { return std::string("SineBump"); },
                      },
                      spec);
}

std::vector<GeneratorSpec> catalogue()
{
    return {CompleteDependence{}, PiecewiseExample{}, NonlinearExample{}, TwoBranch{}, SineBump{}};
}

std::vector<std::string> validate_spec(const GeneratorSpec& spec)
{
    std::vector<std::string> out;
    std::visit(overloaded{
                   [](const CompleteDependence&) {},
                   [&](const PiecewiseExample& s) {
                       check(out, s.n >= 1, "n >= 1");
                       check(out, 0.0 < s.a, "0 < a");
                       check(out, s.a < s.b, "a < b");
                       check(out, s.b < 1.0, "b < 1");
                   },
                   [&](const NonlinearExample& s) {
                       check(out, 1.0 < s.a, "1 < a");
                       check(out, 0.0 < s.b, "0 < b");
                       check(out, s.b < 1.0, "b < 1");
                       check(out, 1.0 < s.c, "1 < c");
                       const bool c_ok = s.a > 1.0 && s.c < (s.a - s.b) / (s.a - 1.0);
                       check(out, c_ok, "c < (a-b)/(a-1)");
                       // The d constraint is only defined once c leaves a positive denominator.
                       if (c_ok)
                           check(out, (s.a - s.b) / (s.a - s.b - s.c * (s.a - 1.0)) < s.d, "(a-b)/(a-b-c(a-1)) < d");
                       check(out, 0.0 < s.e, "0 < e");
                       check(out, s.e < 1.0, "e < 1");
                   },
                   [](const TwoBranch&) {},
                   [&](const SineBump& s) {
                       check(out, 0.0 < s.amp, "0 < amp");
                       check(out, s.amp < 1.0, "amp < 1");
                   },
               },
               spec);
    return out;
}

void require_valid(const GeneratorSpec& spec)
{
    const auto problems = validate_spec(spec);
    if (problems.empty())
        return;
    std::string msg = "invalid " + variant_name(spec) + ": ";
    for (std::size_t i = 0; i < problems.size(); ++i)
        msg += (i ? "; " : "") + problems[i];
    throw std::invalid_argument(msg);
}

void piecewise_example_path(const PiecewiseExample& s, const TimeGrid& grid, double z0, double z1,
                            std::span<double> out)
{
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        if (t < s.a)
            out[i] = (s.a - t) / s.a * z0 + t / s.a;
        else if (t <= s.b)
            out[i] = 1.0;
        else
            out[i] = (1.0 - t) / (1.0 - s.b) + (t - s.b) / (1.0 - s.b) * z1;
    }
}

NonlinearKnots nonlinear_knots(const NonlinearExample& s, bool y, bool y_tilde) noexcept
{
    const double z0 = y ? s.a : s.b;
    const double tail = y_tilde ? s.d : s.e;
    const double z1 = (y ? 0.0 : s.c) + nonlinear_scale(s) * tail;
    return {z0, 1.0, z1};
}

void nonlinear_example_path(const NonlinearExample& s, const TimeGrid& grid, bool y, bool y_tilde,
                            std::span<double> out)
{
    three_knot_path(grid, nonlinear_knots(s, y, y_tilde), out);
}

void two_branch_path(const TimeGrid& grid, bool decreasing, std::span<double> out)
{
    for (std::size_t i = 0; i < grid.size(); ++i)
        out[i] = decreasing ? 2.0 * (1.0 - grid[i]) : 2.0 * grid[i];
}

GeneratorSampler::GeneratorSampler(GeneratorSpec spec, TimeGrid grid)
    : spec_(std::move(spec)), grid_(std::move(grid))
{
    require_valid(spec_);
    if (std::holds_alternative<SineBump>(spec_)) {
        sine_.resize(grid_.size());
        for (std::size_t i = 0; i < grid_.size(); ++i)
            sine_[i] = std::sin(2.0 * std::numbers::pi * grid_[i]);
    }
}

void GeneratorSampler::draw(Stream& stream, std::span<double> out) const
{
    if (out.size() != grid_.size())
        throw std::invalid_argument("generator output buffer does not match the grid");
    std::visit(overloaded{
                   [&](const CompleteDependence&) { std::fill(out.begin(), out.end(), 1.0); },
                   [&](const PiecewiseExample& s) {
                       const double hi = static_cast<double>(s.n);
                       const double lo = 1.0 / hi;
                       const double p_hi = 1.0 / (hi + 1.0);
                       const double z0 = stream.uniform() < p_hi ? hi : lo;
                       const double z1 = stream.uniform() < p_hi ? hi : lo;
                       piecewise_example_path(s, grid_, z0, z1, out);
                   },
                   [&](const NonlinearExample& s) {
                       const bool y = stream.uniform() < s.p();
                       const bool yt = stream.uniform() < s.p_tilde();
                       nonlinear_example_path(s, grid_, y, yt, out);
                   },
                   [&](const TwoBranch&) { two_branch_path(grid_, stream.uniform() < 0.5, out); },
                   [&](const SineBump& s) {
                       const double w = s.amp * (stream.uniform() - 0.5);
                       for (std::size_t i = 0; i < out.size(); ++i)
                           out[i] = 1.0 + sine_[i] * w;
                   },
               },
               spec_);
}

SamplePath GeneratorSampler::draw(Stream& stream) const
{
    std::vector<double> values(grid_.size());
    draw(stream, values);
    return SamplePath{grid_, std::move(values)};
}

SamplePath sample_generator(const GeneratorSpec& spec, const TimeGrid& grid, Stream& stream)
{
    return GeneratorSampler{spec, grid}.draw(stream);
}

GeneratorMoments generator_moments(const GeneratorSpec& spec, const TimeGrid& grid, std::size_t n,
                                   std::uint64_t seed)
{
    if (n < 1)
        throw std::invalid_argument("generator_moments needs n >= 1");
    const GeneratorSampler sampler{spec, grid};
    std::vector<double> sups(n), infs(n);
    run_replicas(
        n, [&] { return std::vector<double>(grid.size()); },
        [&](std::size_t i, std::vector<double>& z) {
            Stream stream = replica_stream(seed, tags::generator, i);
            sampler.draw(stream, z);
            const auto [lo, hi] = std::minmax_element(z.begin(), z.end());
            sups[i] = *hi;
            infs[i] = *lo;
        });
    return {mean_estimate(sups, seed), mean_estimate(infs, seed)};
}

std::vector<Estimate> generator_point_means(const GeneratorSpec& spec, const TimeGrid& grid,
                                            std::span<const std::size_t> indices, std::size_t n, std::uint64_t seed)
{
    if (n < 1)
        throw std::invalid_argument("generator_point_means needs n >= 1");
    for (std::size_t idx : indices) {
        if (idx >= grid.size())
            throw std::invalid_argument("index outside the grid");
    }
    const GeneratorSampler sampler{spec, grid};
    const std::size_t k = indices.size();
    std::vector<double> values(n * k);
    run_replicas(
        n, [&] { return std::vector<double>(grid.size()); },
        [&](std::size_t i, std::vector<double>& z) {
            Stream stream = replica_stream(seed, tags::generator, i);
            sampler.draw(stream, z);
            for (std::size_t j = 0; j < k; ++j)
                values[i * k + j] = z[indices[j]];
        });
    std::vector<Estimate> out;
    std::vector<double> col(n);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < n; ++i)
            col[i] = values[i * k + j];
        out.push_back(mean_estimate(col, seed));
    }
    return out;
}

std::optional<double> closed_form_m(const GeneratorSpec& spec)
{
    require_valid(spec);
    return std::visit(overloaded{
                          [](const CompleteDependence&) -> std::optional<double> { return 1.0; },
                          [](const PiecewiseExample& s) -> std::optional<double> {
                              const double n = s.n;
                              return (3.0 * n * n + n) / ((n + 1.0) * (n + 1.0));
                          },
                          [](const NonlinearExample& s) -> std::optional<double> {
                              return nonlinear_expectation(
                                  s, [](NonlinearKnots k) { return std::max({k.z0, k.z_half, k.z1}); });
                          },
                          [](const TwoBranch&) -> std::optional<double> { return 2.0; },
                          [](const SineBump& s) -> std::optional<double> { return 1.0 + s.amp / 4.0; },
                      },
                      spec);
}

std::optional<double> closed_form_m_tilde(const GeneratorSpec& spec)
{
    require_valid(spec);
    return std::visit(overloaded{
                          [](const CompleteDependence&) -> std::optional<double> { return 1.0; },
                          [](const PiecewiseExample& s) -> std::optional<double> {
                              // inf = min(Z_0, Z_1, 1) = 1 only when both draws equal n.
                              const double n = s.n;
                              const double both_hi = 1.0 / ((n + 1.0) * (n + 1.0));
                              return both_hi + (1.0 - both_hi) / n;
                          },
                          [](const NonlinearExample& s) -> std::optional<double> {
                              return nonlinear_expectation(
                                  s, [](NonlinearKnots k) { return std::min({k.z0, k.z_half, k.z1}); });
                          },
                          [](const TwoBranch&) -> std::optional<double> { return 0.0; },
                          [](const SineBump& s) -> std::optional<double> { return 1.0 - s.amp / 4.0; },
                      },
                      spec);
}

namespace {

template <class Fn>
std::vector<double> interval_functional(const GeneratorSpec& spec, const Interval& interval, const TimeGrid& grid,
                                        std::size_t n, std::uint64_t seed, Fn&& fn)
{
    if (n < 1)
        throw std::invalid_argument("need n >= 1 replications");
    const IndexRange r = grid_range(grid, interval);
    const GeneratorSampler sampler{spec, grid};
    std::vector<double> out(n);
    run_replicas(
        n, [&] { return std::vector<double>(grid.size()); },
        [&](std::size_t i, std::vector<double>& z) {
            Stream stream = replica_stream(seed, tags::generator, i);
            sampler.draw(stream, z);
            const auto first = z.begin() + static_cast<std::ptrdiff_t>(r.first);
            const double sup = *std::max_element(first, first + static_cast<std::ptrdiff_t>(r.size()));
            out[i] = fn(sup, std::max(z[r.first], z[r.last]));
        });
    return out;
}

}  // namespace

Estimate sup_equals_max_rate(const GeneratorSpec& spec, const Interval& interval, const TimeGrid& grid,
                             std::size_t n, std::uint64_t seed)
{
    const auto eq = interval_functional(spec, interval, grid, n, seed,
                                        [](double sup, double mx) { return sup - mx <= 1e-12 ? 1.0 : 0.0; });
    return proportion_estimate(static_cast<std::size_t>(std::count(eq.begin(), eq.end(), 1.0)), n, seed);
}

Estimate sup_max_gap(const GeneratorSpec& spec, const Interval& interval, const TimeGrid& grid, std::size_t n,
                     std::uint64_t seed)
{
    const auto gap =
        interval_functional(spec, interval, grid, n, seed, [](double sup, double mx) { return sup - mx; });
    return mean_estimate(gap, seed);
}

}  // namespace mshit
