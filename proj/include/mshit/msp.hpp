#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mshit/estimate.hpp"
#include "mshit/generators.hpp"
#include "mshit/paths.hpp"
#include "mshit/replicate.hpp"
#include "mshit/rng.hpp"

namespace mshit {

class LevelFunction;

/// C with sup_t Z_t <= C almost surely.
double generator_bound(const GeneratorSpec& spec);

inline constexpr std::size_t default_max_points = 1'000'000;

/// Raised when the stopping rule does not fire within max_points arrivals.
class BoundTooLoose : public std::runtime_error
{
public:
    BoundTooLoose(std::size_t arrivals, double deficit);

    std::size_t arrivals() const noexcept { return arrivals_; }
    /// C / Gamma_k - min_t xi(t) at the last arrival; positive.
    double deficit() const noexcept { return deficit_; }

private:
    std::size_t arrivals_;
    double deficit_;
};

/// Exact-on-grid sampler for the standard MSP with a given bounded generator.
///
/// Poisson arrivals Gamma_1 < Gamma_2 < ... (unit-rate exponential sums) each
/// carry an independent generator path Z_i; xi(t) = max_i Z_i(t) / Gamma_i.
/// Once C / Gamma_k < min_t xi(t) no later arrival can raise xi at any grid
/// point, so eta = -1 / xi is exact on the grid. Per arrival the stream
/// yields one exponential and then, if the rule has not fired, the
/// generator's uniforms.
class MspSampler
{
public:
    MspSampler(GeneratorSpec spec, TimeGrid grid, std::size_t max_points = default_max_points);

    const TimeGrid& grid() const noexcept { return generator_.grid(); }
    const GeneratorSpec& spec() const noexcept { return generator_.spec(); }
    double bound() const noexcept { return bound_; }

    struct Scratch
    {
        std::vector<double> xi;
        std::vector<double> z;
    };
    Scratch make_scratch() const;

    /// Writes eta into out and returns the number of arrivals used.
    /// extra_arrivals > 0 keeps applying that many arrivals after the rule
    /// fires; on the grid this never changes the result.
    std::size_t draw(Stream& stream, std::span<double> out, Scratch& scratch, std::size_t extra_arrivals = 0) const;
    SamplePath draw(Stream& stream) const;

private:
    GeneratorSampler generator_;
    double bound_;
    double stop_bound_;
    std::size_t max_points_;
};

SamplePath sample_msp(const GeneratorSpec& spec, const TimeGrid& grid, Stream& stream,
                      std::size_t max_points = default_max_points);

/// P(eta_t <= f(t) at every grid point of f's grid), binomial se.
/// Throws std::invalid_argument if f is not a valid level function.
Estimate joint_cdf_estimate(const GeneratorSpec& spec, const LevelFunction& f, std::size_t n, std::uint64_t seed);

/// P(eta_t > f(t) at every grid point of f's grid), binomial se.
Estimate survivor_estimate(const GeneratorSpec& spec, const LevelFunction& f, std::size_t n, std::uint64_t seed);

/// KS distance between the simulated law of eta_t and exp(x) on (-inf, 0].
double marginal_gof(const GeneratorSpec& spec, const TimeGrid& grid, double t, std::size_t n, std::uint64_t seed);

/// Samples of eta_t for each requested grid index, over n MSP replicas.
std::vector<std::vector<double>> marginal_samples(const GeneratorSpec& spec, const TimeGrid& grid,
                                                  std::span<const std::size_t> indices, std::size_t n,
                                                  std::uint64_t seed);

/// n MSP paths stored in memory for shared-draw comparisons. Path i is the
/// same path any streaming estimator draws as replica i for `seed`.
class MspCorpus
{
public:
    MspCorpus(const GeneratorSpec& spec, const TimeGrid& grid, std::size_t n, std::uint64_t seed);

    std::size_t size() const noexcept { return n_; }
    const TimeGrid& grid() const noexcept { return grid_; }
    std::span<const double> path(std::size_t i) const noexcept
    {
        return std::span<const double>(data_).subspan(i * grid_.size(), grid_.size());
    }

private:
    TimeGrid grid_;
    std::size_t n_;
    std::vector<double> data_;
};

/// Draws n MSP paths for `seed` and applies fn(eta, row) to each, where row
/// is the replica's k output slots. Returns the n x k row-major matrix.
template <class Fn>
std::vector<double> replicate_msp(const MspSampler& sampler, std::size_t n, std::uint64_t seed, std::size_t k,
                                  Fn&& fn)
{
    std::vector<double> out(n * k);
    const std::size_t m = sampler.grid().size();
    run_replicas(
        n, [&] { return std::pair{sampler.make_scratch(), std::vector<double>(m)}; },
        [&](std::size_t i, auto& ws) {
            Stream stream = replica_stream(seed, tags::msp, i);
            sampler.draw(stream, ws.second, ws.first);
            fn(std::span<const double>(ws.second), std::span<double>(out).subspan(i * k, k));
        });
    return out;
}

/// Proportion of nonzero entries in column j of an n x k matrix.
Estimate column_proportion(std::span<const double> matrix, std::size_t k, std::size_t j, std::uint64_t seed);

/// Mean of column j of an n x k matrix.
Estimate column_mean(std::span<const double> matrix, std::size_t k, std::size_t j, std::uint64_t seed);

}  // namespace mshit
