#include "mshit/msp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mshit/dnorm.hpp"
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

std::string deficit_message(std::size_t arrivals, double deficit)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, "bound-too-loose: stopping rule not met after %zu arrivals (deficit %.6g)",
                  arrivals, deficit);
    return buf;
}

}  // namespace

BoundTooLoose::BoundTooLoose(std::size_t arrivals, double deficit)
    : std::runtime_error(deficit_message(arrivals, deficit)), arrivals_(arrivals), deficit_(deficit)
{
}

double generator_bound(const GeneratorSpec& spec)
{
    require_valid(spec);
    return std::visit(overloaded{
                          [](const CompleteDependence&) { return 1.0; },
                          [](const PiecewiseExample& s) { return static_cast<double>(s.n); },
                          [](const NonlinearExample& s) {
                              double c = 0.0;
                              for (bool y : {false, true}) {
                                  for (bool yt : {false, true}) {
                                      const auto k = nonlinear_knots(s, y, yt);
                                      c = std::max({c, k.z0, k.z_half, k.z1});
                                  }
                              }
                              return c;
                          },
                          [](const TwoBranch&) { return 2.0; },
                          [](const SineBump& s) { return 1.0 + s.amp; },
                      },
                      spec);
}

MspSampler::MspSampler(GeneratorSpec spec, TimeGrid grid, std::size_t max_points)
    : generator_(std::move(spec), std::move(grid)),
      bound_(generator_bound(generator_.spec())),
      // Absorbs rounding in the path formulas so Z_i(t) <= stop_bound_ holds in floating point.
      stop_bound_(bound_ * (1.0 + 1e-12)),
      max_points_(max_points)
{
    if (max_points_ < 1)
        throw std::invalid_argument("max_points must be >= 1");
}

MspSampler::Scratch MspSampler::make_scratch() const
{
    return {std::vector<double>(grid().size()), std::vector<double>(grid().size())};
}

std::size_t MspSampler::draw(Stream& stream, std::span<double> out, Scratch& scratch,
                             std::size_t extra_arrivals) const
{
    auto& xi = scratch.xi;
    auto& z = scratch.z;
    const std::size_t m = grid().size();
    if (out.size() != m || xi.size() != m || z.size() != m)
        throw std::invalid_argument("MSP buffers do not match the grid");
    std::fill(xi.begin(), xi.end(), 0.0);

    double gamma = 0.0;
    double min_xi = 0.0;
    std::size_t k = 0;
    for (;;) {
        if (k == max_points_)
            throw BoundTooLoose(k, stop_bound_ / gamma - min_xi);
        ++k;
        gamma += stream.exponential();
        if (stop_bound_ / gamma < min_xi)
            break;
        generator_.draw(stream, z);
        const double inv = 1.0 / gamma;
        double lo = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            xi[i] = std::max(xi[i], z[i] * inv);
            lo = std::min(lo, xi[i]);
        }
        min_xi = lo;
    }

    // Debug mode: the arrival that fired the rule and its successors.
    for (std::size_t j = 0; j < extra_arrivals; ++j) {
        if (j > 0)
            gamma += stream.exponential();
        generator_.draw(stream, z);
        const double inv = 1.0 / gamma;
        for (std::size_t i = 0; i < m; ++i)
            xi[i] = std::max(xi[i], z[i] * inv);
    }

    for (std::size_t i = 0; i < m; ++i)
        out[i] = -1.0 / xi[i];
    return k;
}

SamplePath MspSampler::draw(Stream& stream) const
{
    auto scratch = make_scratch();
    std::vector<double> values(grid().size());
    draw(stream, values, scratch);
    return SamplePath{grid(), std::move(values)};
}

SamplePath sample_msp(const GeneratorSpec& spec, const TimeGrid& grid, Stream& stream, std::size_t max_points)
{
    return MspSampler{spec, grid, max_points}.draw(stream);
}

Estimate joint_cdf_estimate(const GeneratorSpec& spec, const LevelFunction& f, std::size_t n, std::uint64_t seed)
{
    if (n < 1)
        throw std::invalid_argument("joint_cdf_estimate needs n >= 1");
    const MspSampler sampler{spec, f.grid()};
    const auto level = f.values();
    const auto out = replicate_msp(sampler, n, seed, 1, [&](std::span<const double> eta, std::span<double> row) {
        bool ok = true;
        for (std::size_t j = 0; j < level.size() && ok; ++j)
            ok = eta[j] <= level[j];
        row[0] = ok;
    });
    return column_proportion(out, 1, 0, seed);
}

Estimate survivor_estimate(const GeneratorSpec& spec, const LevelFunction& f, std::size_t n, std::uint64_t seed)
{
    if (n < 1)
        throw std::invalid_argument("survivor_estimate needs n >= 1");
    const MspSampler sampler{spec, f.grid()};
    const auto level = f.values();
    const auto out = replicate_msp(sampler, n, seed, 1, [&](std::span<const double> eta, std::span<double> row) {
        bool ok = true;
        for (std::size_t j = 0; j < level.size() && ok; ++j)
            ok = eta[j] > level[j];
        row[0] = ok;
    });
    return column_proportion(out, 1, 0, seed);
}

std::vector<std::vector<double>> marginal_samples(const GeneratorSpec& spec, const TimeGrid& grid,
                                                  std::span<const std::size_t> indices, std::size_t n,
                                                  std::uint64_t seed)
{
    if (n == 0)
        throw std::invalid_argument("marginal samples need n >= 1");
    for (std::size_t idx : indices) {
        if (idx >= grid.size())
            throw std::invalid_argument("marginal index outside the grid");
    }
    const MspSampler sampler{spec, grid};
    std::vector<std::vector<double>> out(indices.size(), std::vector<double>(n));
    run_replicas(
        n, [&] { return std::pair{sampler.make_scratch(), std::vector<double>(grid.size())}; },
        [&](std::size_t i, auto& ws) {
            Stream stream = replica_stream(seed, tags::msp, i);
            sampler.draw(stream, ws.second, ws.first);
            for (std::size_t j = 0; j < indices.size(); ++j)
                out[j][i] = ws.second[indices[j]];
        });
    return out;
}

double marginal_gof(const GeneratorSpec& spec, const TimeGrid& grid, double t, std::size_t n, std::uint64_t seed)
{
    if (n == 0)
        throw std::invalid_argument("marginal_gof needs a nonempty sample");
    const std::size_t idx = grid.find(t);
    if (idx == TimeGrid::npos)
        throw std::invalid_argument("marginal time is not a grid point");
    const std::size_t indices[] = {idx};
    return ks_distance_neg_exponential(marginal_samples(spec, grid, indices, n, seed).front());
}

MspCorpus::MspCorpus(const GeneratorSpec& spec, const TimeGrid& grid, std::size_t n, std::uint64_t seed)
    : grid_(grid), n_(n), data_(n * grid.size())
{
    const MspSampler sampler{spec, grid};
    run_replicas(
        n, [&] { return sampler.make_scratch(); },
        [&](std::size_t i, MspSampler::Scratch& scratch) {
            Stream stream = replica_stream(seed, tags::msp, i);
            sampler.draw(stream, std::span<double>(data_).subspan(i * grid_.size(), grid_.size()), scratch);
        });
}

Estimate column_proportion(std::span<const double> matrix, std::size_t k, std::size_t j, std::uint64_t seed)
{
    const std::size_t n = matrix.size() / k;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i)
        hits += matrix[i * k + j] != 0.0;
    return proportion_estimate(hits, n, seed);
}

Estimate column_mean(std::span<const double> matrix, std::size_t k, std::size_t j, std::uint64_t seed)
{
    const std::size_t n = matrix.size() / k;
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i)
        col[i] = matrix[i * k + j];
    return mean_estimate(col, seed);
}

}  // namespace mshit
