#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mshit/estimate.hpp"
#include "mshit/generators.hpp"
#include "mshit/paths.hpp"

namespace mshit {

enum class LevelShape
{
    constant,
    indicator_step,
    piecewise_linear,
};

/// A nonpositive function on [0, 1], sampled on a grid. At least one value
/// is strictly negative.
class LevelFunction
{
public:
    /// f == level.
    static LevelFunction constant(TimeGrid grid, double level);
    /// f == level on [lo, hi] (grid points inside, inclusive), base elsewhere.
    static LevelFunction indicator_step(TimeGrid grid, Interval interval, double level, double base = 0.0);
    /// Linear interpolation through (t, value) breakpoints spanning [0, 1].
    static LevelFunction piecewise_linear(TimeGrid grid, std::vector<std::pair<double, double>> breakpoints);

    const TimeGrid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    LevelShape shape() const noexcept { return shape_; }

    /// max_t |f(t)| over the grid.
    double sup_norm() const noexcept;
    /// |c| * f.
    LevelFunction scaled(double c) const;

private:
    LevelFunction(TimeGrid grid, std::vector<double> values, LevelShape shape);

    TimeGrid grid_;
    std::vector<double> values_;
    LevelShape shape_;
};

struct DNormEstimate
{
    double value = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

/// Shared draws reuse the generator paths of `seed` for every function, so
/// comparisons between functions hold per draw. Independent draws salt the
/// seed with the function's values.
enum class DrawMode
{
    shared,
    independent,
};

/// Monte Carlo mean over n generator paths of max_t |f(t)| Z_t.
DNormEstimate dnorm_estimate(const GeneratorSpec& spec, const LevelFunction& f, std::size_t n, std::uint64_t seed,
                             DrawMode mode = DrawMode::shared);

/// Estimate of the D-norm of the indicator of I, i.e. E sup_{t in I} Z_t.
DNormEstimate dnorm_indicator(const GeneratorSpec& spec, const Interval& interval, const TimeGrid& grid,
                              std::size_t n, std::uint64_t seed);

/// 1 - exp(-E inf_t |f(t)| Z_t), a lower bound for P(eta > f everywhere).
double survivor_lower_bound(const GeneratorSpec& spec, const LevelFunction& f, std::size_t n, std::uint64_t seed);

struct TakahashiProbe
{
    double dnorm;
    double sup_norm;
    double se;
    bool equal;  ///< |dnorm - sup_norm| <= 3 se
};

struct TakahashiReport
{
    bool complete_dependence = false;
    Estimate m_hat;
    std::vector<TakahashiProbe> probes;
};

/// Complete dependence holds iff the D-norm equals the sup-norm; checked on
/// at least three probes. Throws std::invalid_argument on fewer probes.
TakahashiReport takahashi_check(const GeneratorSpec& spec, std::span<const LevelFunction> probes, std::size_t n,
                                std::uint64_t seed);

/// Default probes: -1, -t - 0.5, and -1 on [0.5, 1].
std::vector<LevelFunction> default_probes(const TimeGrid& grid);

/// n generator paths held in memory; path i equals replica i of every
/// streaming estimator for `seed`.
class GeneratorCorpus
{
public:
    GeneratorCorpus(const GeneratorSpec& spec, const TimeGrid& grid, std::size_t n, std::uint64_t seed);

    std::size_t size() const noexcept { return n_; }
    const TimeGrid& grid() const noexcept { return grid_; }
    std::span<const double> path(std::size_t i) const noexcept
    {
        return std::span<const double>(data_).subspan(i * grid_.size(), grid_.size());
    }

    /// max_t |f(t)| Z_t per draw.
    std::vector<double> weighted_sup(const LevelFunction& f) const;
    /// min_t |f(t)| Z_t per draw.
    std::vector<double> weighted_inf(const LevelFunction& f) const;
    DNormEstimate dnorm(const LevelFunction& f) const;

private:
    TimeGrid grid_;
    std::size_t n_;
    std::vector<double> data_;
};

}  // namespace mshit
