#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mshit/estimate.hpp"
#include "mshit/paths.hpp"
#include "mshit/rng.hpp"

namespace mshit {

/// Z_t = 1 for all t.
struct CompleteDependence
{
    friend bool operator==(const CompleteDependence&, const CompleteDependence&) = default;
};

/// Linear from Z_0 to 1 on [0, a), constant 1 on [a, b], linear from 1 to Z_1
/// on (b, 1]. Z_0, Z_1 are iid with P(Z = 1/n) = n/(n+1), P(Z = n) = 1/(n+1).
struct PiecewiseExample
{
    int n = 2;
    double a = 0.25;
    double b = 0.75;
    friend bool operator==(const PiecewiseExample&, const PiecewiseExample&) = default;
};

/// Linear interpolation through (0, Z_0), (1/2, 1), (1, Z_1) with
///   Z_0 = Y a + (1 - Y) b,
///   Z_1 = (1 - Y) c + (1 - c (a - 1)/(a - b)) (Y~ d + (1 - Y~) e),
/// Y ~ Bernoulli((1 - b)/(a - b)), Y~ ~ Bernoulli((1 - e)/(d - e)).
/// Every path has sup over any [t', t''] equal to the larger endpoint value.
struct NonlinearExample
{
    double a = 2.0;
    double b = 0.5;
    double c = 1.25;
    double d = 7.0;
    double e = 0.5;

    double p() const noexcept { return (1.0 - b) / (a - b); }
    double p_tilde() const noexcept { return (1.0 - e) / (d - e); }
    friend bool operator==(const NonlinearExample&, const NonlinearExample&) = default;
};

/// Z_t = 2(1 - t) or Z_t = 2t with probability 1/2 each.
struct TwoBranch
{
    friend bool operator==(const TwoBranch&, const TwoBranch&) = default;
};

/// Z_t = 1 + sin(2 pi t) W with W uniform on [-amp/2, amp/2].
struct SineBump
{
    double amp = 0.5;
    friend bool operator==(const SineBump&, const SineBump&) = default;
};

using GeneratorSpec = std::variant<CompleteDependence, PiecewiseExample, NonlinearExample, TwoBranch, SineBump>;

std::string variant_name(const GeneratorSpec& spec);

/// The five catalogue generators with their default parameters.
std::vector<GeneratorSpec> catalogue();

/// Empty iff the spec satisfies all constraints of its variant. Each entry
/// names one violated constraint, e.g. "c < (a-b)/(a-1) violated".
std::vector<std::string> validate_spec(const GeneratorSpec& spec);

/// Throws std::invalid_argument listing every violation.
void require_valid(const GeneratorSpec& spec);

// Path formulas for fixed latent draws. out.size() == grid.size().
void piecewise_example_path(const PiecewiseExample& spec, const TimeGrid& grid, double z0, double z1,
                            std::span<double> out);
void nonlinear_example_path(const NonlinearExample& spec, const TimeGrid& grid, bool y, bool y_tilde,
                            std::span<double> out);
void two_branch_path(const TimeGrid& grid, bool decreasing, std::span<double> out);

/// Knot values (Z_0, Z_1/2, Z_1) of a NonlinearExample path.
struct NonlinearKnots
{
    double z0;
    double z_half;
    double z1;
};
NonlinearKnots nonlinear_knots(const NonlinearExample& spec, bool y, bool y_tilde) noexcept;

/// Generator prepared for one grid.
///
/// Uniform draws consumed per path, in order:
///   CompleteDependence  none
///   PiecewiseExample    u0 -> Z_0 = n if u0 < 1/(n+1) else 1/n; u1 -> Z_1 likewise
///   NonlinearExample    u0 -> Y = [u0 < p]; u1 -> Y~ = [u1 < p~]
///   TwoBranch           u0 -> decreasing branch 2(1-t) iff u0 < 1/2
///   SineBump            u0 -> W = amp (u0 - 1/2)
class GeneratorSampler
{
public:
    GeneratorSampler(GeneratorSpec spec, TimeGrid grid);

    const GeneratorSpec& spec() const noexcept { return spec_; }
    const TimeGrid& grid() const noexcept { return grid_; }

    void draw(Stream& stream, std::span<double> out) const;
    SamplePath draw(Stream& stream) const;

private:
    GeneratorSpec spec_;
    TimeGrid grid_;
    std::vector<double> sine_;  // SineBump only
};

/// One realization of Z on the grid.
SamplePath sample_generator(const GeneratorSpec& spec, const TimeGrid& grid, Stream& stream);

struct GeneratorMoments
{
    Estimate m_hat;        ///< E sup_t Z_t
    Estimate m_tilde_hat;  ///< E inf_t Z_t
};

/// Monte Carlo means of the grid sup and inf over n generator paths drawn
/// from the generator tag of `seed`.
GeneratorMoments generator_moments(const GeneratorSpec& spec, const TimeGrid& grid, std::size_t n,
                                   std::uint64_t seed);

/// Monte Carlo means of Z_t at the given grid indices.
std::vector<Estimate> generator_point_means(const GeneratorSpec& spec, const TimeGrid& grid,
                                            std::span<const std::size_t> indices, std::size_t n, std::uint64_t seed);

/// Exact m = E sup_t Z_t where it is known in closed form:
///   CompleteDependence 1, PiecewiseExample (3n^2+n)/(n+1)^2, TwoBranch 2,
///   SineBump 1 + amp/4 (sup = 1 + |W|), NonlinearExample the mean of the
///   largest knot over the four paths.
std::optional<double> closed_form_m(const GeneratorSpec& spec);

/// Exact m~ = E inf_t Z_t, same derivations as closed_form_m.
std::optional<double> closed_form_m_tilde(const GeneratorSpec& spec);

/// Frequency of sup_{t in I} Z_t == max(Z_lo, Z_hi) (to 1e-12) over n paths.
Estimate sup_equals_max_rate(const GeneratorSpec& spec, const Interval& interval, const TimeGrid& grid,
                             std::size_t n, std::uint64_t seed);

/// Mean of sup_{t in I} Z_t - max(Z_lo, Z_hi); zero iff the sup is attained
/// at an endpoint almost surely.
Estimate sup_max_gap(const GeneratorSpec& spec, const Interval& interval, const TimeGrid& grid, std::size_t n,
                     std::uint64_t seed);

}  // namespace mshit
