#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mshit/dnorm.hpp"
#include "mshit/estimate.hpp"
#include "mshit/generators.hpp"
#include "mshit/paths.hpp"

namespace mshit {

/// P(eta hits x somewhere in I), x < 0, by the min <= x <= max rule on the
/// grid. Grid estimates can only miss sub-grid excursions.
Estimate hitting_prob(const GeneratorSpec& spec, double x, const Interval& interval, const TimeGrid& grid,
                      std::size_t n, std::uint64_t seed);

/// P(eta_t = f(t) for some t in I): the path of eta - f crosses zero.
Estimate function_hitting_prob(const GeneratorSpec& spec, const LevelFunction& f, const Interval& interval,
                               std::size_t n, std::uint64_t seed);

struct HittingCurve
{
    std::vector<double> levels;  ///< strictly negative, decreasing
    std::vector<Estimate> estimates;
    std::vector<double> upper_bounds;  ///< exp(x m~) - exp(x m)
};

struct GeneratorConstants
{
    double m;
    double m_tilde;
};

/// hitting_prob at every level on shared draws. Bounds use the supplied
/// constants, or generator_moments(spec, grid, n, seed) when absent.
HittingCurve hitting_curve(const GeneratorSpec& spec, std::span<const double> levels, const Interval& interval,
                           const TimeGrid& grid, std::size_t n, std::uint64_t seed,
                           std::optional<GeneratorConstants> constants = std::nullopt);

/// Levels x_j = x_min (j/count)^2, j = count..1, i.e. decreasing from near 0
/// to x_min and denser towards 0 where h varies fastest.
std::vector<double> default_integral_levels(std::size_t count = 25, double x_min = -12.0);

struct HittingIntegral
{
    double integral;    ///< trapezoid over [x_min, 0] with h(0) = 0 appended
    double tail_bound;  ///< exp(x_min m~) / m~, or +inf when m~ == 0
};

HittingIntegral hitting_integral(const HittingCurve& curve, double m_tilde);

/// Three fixed times t' < t0 < t'' on the grid and a level x0 < 0.
struct TripleQuery
{
    double x0;
    double t_prime;
    double t0;
    double t_double;
};

/// Two closed windows [t', t0] and [t0, t''] sharing the split time t0.
struct SplitQuery
{
    double x0;
    double t0;
    double t_prime = 0.0;
    double t_double = 1.0;
};

/// P(eta_t' <= x0, eta_t0 > x0, eta_t'' <= x0); exact fidis event, no grid bias.
Estimate down_up_down_prob(const GeneratorSpec& spec, const TripleQuery& q, const TimeGrid& grid, std::size_t n,
                           std::uint64_t seed);

/// P(hit x0 in [t', t0] and hit x0 in [t0, t'']).
Estimate two_hit_prob(const GeneratorSpec& spec, const SplitQuery& q, const TimeGrid& grid, std::size_t n,
                      std::uint64_t seed);

/// P(hit x0 in every interval). Intervals may touch but not overlap.
Estimate multi_hit_prob(const GeneratorSpec& spec, double x0, std::span<const Interval> intervals,
                        const TimeGrid& grid, std::size_t n, std::uint64_t seed);

/// exp(x m~) - exp(x m), clipped at 0. Requires 0 <= m~ <= m and 1 <= m.
double hitting_bound(double m, double m_tilde, double x);

/// Per-draw estimates, one per level x0 < 0 on shared draws, of
///   P(eta <= x0 on [t', t'']) - P(eta_t' > x0, eta_t'' > x0) - (2 e^x0 - 1),
/// which vanishes iff the interval sup of Z equals the endpoint max.
std::vector<Estimate> survivor_identity_residual(const GeneratorSpec& spec, std::span<const double> levels,
                                                 const Interval& window, const TimeGrid& grid, std::size_t n,
                                                 std::uint64_t seed);

/// Per-draw estimates of P(eta <= x0 on [t', t'']) - P(eta_t' <= x0, eta_t'' <= x0).
std::vector<Estimate> interval_cdf_gap(const GeneratorSpec& spec, std::span<const double> levels,
                                       const Interval& window, const TimeGrid& grid, std::size_t n,
                                       std::uint64_t seed);

}  // namespace mshit
