#include "doctest.h"

#include <cmath>

#include "mshit/dnorm.hpp"
#include "mshit/generators.hpp"
#include "mshit/msp.hpp"

using namespace mshit;

TEST_CASE("level function validation")
{
    const auto grid = make_grid(11);
    CHECK_THROWS_AS(LevelFunction::constant(grid, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(LevelFunction::constant(grid, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(LevelFunction::piecewise_linear(grid, {{0.0, -1.0}, {1.0, 0.5}}), std::invalid_argument);
    const auto step = LevelFunction::indicator_step(grid, Interval{0.5, 1.0}, -1.0, -0.01);
    CHECK(step.values()[0] == -0.01);
    CHECK(step.values()[5] == -1.0);
    CHECK(step.sup_norm() == 1.0);
    const auto lin = LevelFunction::piecewise_linear(grid, {{0.0, -0.5}, {1.0, -1.5}});
    CHECK(lin.values()[5] == doctest::Approx(-1.0));
    CHECK(lin.scaled(-2.0).values()[10] == doctest::Approx(-3.0));
}

TEST_CASE("dnorm closed forms")
{
    const auto grid = make_grid(1001);
    const auto minus1 = LevelFunction::constant(grid, -1.0);
    const auto cd = dnorm_estimate(CompleteDependence{}, minus1, 1000, 1);
    CHECK(cd.value == 1.0);
    CHECK(cd.se == 0.0);
    const auto pw = dnorm_estimate(PiecewiseExample{}, minus1, 100000, 2);
    CHECK(std::abs(pw.value - 14.0 / 9.0) <= 3.0 * pw.se);
    const auto lin = LevelFunction::piecewise_linear(grid, {{0.0, 0.0}, {1.0, -1.0}});
    const auto tb = dnorm_estimate(TwoBranch{}, lin, 100000, 3);
    CHECK(std::abs(tb.value - 1.25) <= 3.0 * tb.se + 1e-3);
    CHECK_THROWS(dnorm_estimate(TwoBranch{}, minus1, 1, 3));
}

TEST_CASE("dnorm of an indicator")
{
    const auto grid = make_grid(1001);
    for (const auto& spec : catalogue()) {
        const auto ind = dnorm_indicator(spec, Interval{0, 1}, grid, 2000, 4);
        CHECK(ind.value == generator_moments(spec, grid, 2000, 4).m_hat.value);
    }
    const auto tb = dnorm_indicator(TwoBranch{}, Interval{0.5, 1}, grid, 100000, 5);
    CHECK(std::abs(tb.value - 1.5) <= 3.0 * tb.se);
    CHECK(dnorm_indicator(CompleteDependence{}, Interval{0.2, 0.4}, grid, 100, 5).value == 1.0);
}

TEST_CASE("homogeneity with power-of-two factors is exact on shared draws")
{
    const auto grid = make_grid(501);
    const auto f = LevelFunction::piecewise_linear(grid, {{0.0, -0.5}, {0.3, -2.0}, {1.0, -1.0}});
    for (const auto& spec : catalogue()) {
        const auto base = dnorm_estimate(spec, f, 3000, 9);
        for (double c : {0.25, 2.0, 8.0})
            CHECK(dnorm_estimate(spec, f.scaled(c), 3000, 9).value == c * base.value);
    }
}

TEST_CASE("dnorm monotone and bounded by sup-norm times m")
{
    const auto grid = make_grid(501);
    const auto small = LevelFunction::indicator_step(grid, Interval{0.5, 1.0}, -1.0, -0.01);
    const auto big = LevelFunction::constant(grid, -1.0);
    for (const auto& spec : catalogue()) {
        const GeneratorCorpus corpus{spec, grid, 1000, 2};
        const auto a = corpus.weighted_sup(small), b = corpus.weighted_sup(big);
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(a[i] <= b[i]);
        const auto d = corpus.dnorm(small);
        CHECK(d.value >= small.sup_norm() - 3.0 * d.se - 1e-12);
    }
}

TEST_CASE("independent draw mode changes the stream")
{
    const auto grid = make_grid(101);
    const auto f = LevelFunction::constant(grid, -1.0);
    CHECK(dnorm_estimate(SineBump{}, f, 500, 1, DrawMode::shared).value
          != dnorm_estimate(SineBump{}, f, 500, 1, DrawMode::independent).value);
}

TEST_CASE("survivor lower bound")
{
    const auto grid = make_grid(1001);
    const auto minus1 = LevelFunction::constant(grid, -1.0);
    CHECK(survivor_lower_bound(CompleteDependence{}, minus1, 100, 1) == doctest::Approx(1.0 - std::exp(-1.0)));
    CHECK(survivor_lower_bound(SineBump{}, minus1, 100000, 1) == doctest::Approx(1.0 - std::exp(-0.875)).epsilon(0.005));
    CHECK(survivor_lower_bound(TwoBranch{}, minus1, 1000, 1) == 0.0);
    for (const auto& spec : catalogue()) {
        const double lb = survivor_lower_bound(spec, minus1, 20000, 6);
        const auto surv = survivor_estimate(spec, minus1, 20000, 6);
        CHECK(surv.value >= lb - 3.0 * surv.se);
    }
}

TEST_CASE("complete dependence criterion")
{
    const auto grid = make_grid(1001);
    const auto probes = default_probes(grid);
    CHECK(takahashi_check(CompleteDependence{}, probes, 20000, 1).complete_dependence);
    CHECK_FALSE(takahashi_check(PiecewiseExample{}, probes, 20000, 1).complete_dependence);
    CHECK_FALSE(takahashi_check(TwoBranch{}, probes, 20000, 1).complete_dependence);
    CHECK_THROWS_AS(takahashi_check(TwoBranch{}, std::span(probes).first(2), 100, 1), std::invalid_argument);
}
