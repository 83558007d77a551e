#include "doctest.h"

#include <cmath>
#include <vector>

#include "mshit/dnorm.hpp"
#include "mshit/hitting.hpp"
#include "mshit/msp.hpp"
#include "mshit/verify.hpp"

using namespace mshit;

namespace {
const TimeGrid& grid()
{
    static const TimeGrid g = make_grid(1001);
    return g;
}
constexpr std::size_t n = 30000;
}  // namespace

TEST_CASE("hitting probability examples")
{
    const auto cd = hitting_prob(CompleteDependence{}, -1.0, Interval{0, 1}, grid(), n, 1);
    CHECK(cd.value == 0.0);
    CHECK(cd.ci_hi <= 3.0 / n);
    const auto tb = hitting_prob(TwoBranch{}, -1.0, Interval{0, 1}, grid(), n, 2);
    CHECK(std::abs(tb.value - 0.6004236) <= 3.0 * tb.se + 0.005);
    const auto pw = hitting_prob(PiecewiseExample{}, -1.0, Interval{0.25, 0.75}, grid(), n, 3);
    CHECK(pw.value == 0.0);
    CHECK_THROWS_AS(hitting_prob(TwoBranch{}, 0.0, Interval{0, 1}, grid(), n, 1), std::invalid_argument);
    try {
        (void)hitting_prob(TwoBranch{}, 0.5, Interval{0, 1}, grid(), n, 1);
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("level must be negative") != std::string::npos);
    }
}

TEST_CASE("hitting curve")
{
    const std::vector<double> levels{-0.5, -1, -2, -4};
    const auto cd = hitting_curve(CompleteDependence{}, levels, Interval{0, 1}, grid(), 5000, 1);
    for (const auto& e : cd.estimates)
        CHECK(e.value == 0.0);
    const auto tb = hitting_curve(TwoBranch{}, levels, Interval{0, 1}, grid(), n, 4, GeneratorConstants{2.0, 0.0});
    for (std::size_t j = 0; j < levels.size(); ++j) {
        const double exact = final_example_reference(levels[j]).h;
        CHECK(std::abs(tb.estimates[j].value - exact) <= 3.0 * tb.estimates[j].se + 0.005);
        CHECK(tb.upper_bounds[j] == doctest::Approx(1.0 - std::exp(2.0 * levels[j])));
    }
    const std::vector<double> unsorted{-1, -0.5};
    CHECK_THROWS_AS(hitting_curve(TwoBranch{}, unsorted, Interval{0, 1}, grid(), 100, 1), std::invalid_argument);
}

TEST_CASE("hitting integral")
{
    const auto levels = default_integral_levels();
    REQUIRE(levels.size() == 25);
    CHECK(levels.back() == -12.0);
    const auto cd = hitting_curve(CompleteDependence{}, levels, Interval{0, 1}, grid(), 2000, 1);
    CHECK(hitting_integral(cd, 1.0).integral == 0.0);
    const auto tb = hitting_curve(TwoBranch{}, levels, Interval{0, 1}, grid(), 20000, 2, GeneratorConstants{2.0, 0.0});
    const auto integral = hitting_integral(tb, 0.0);
    CHECK(std::isinf(integral.tail_bound));
    CHECK(std::abs(integral.integral + final_example_tail(-12.0) - 1.5) <= 0.05);
}

TEST_CASE("hitting bound")
{
    CHECK(hitting_bound(1, 1, -1) == 0.0);
    CHECK(hitting_bound(2, 0, -1) == doctest::Approx(1.0 - std::exp(-2.0)));
    CHECK(hitting_bound(1.125, 0.875, -1) == doctest::Approx(std::exp(-0.875) - std::exp(-1.125)));
    CHECK_THROWS_AS(hitting_bound(1, 2, -1), std::invalid_argument);
}

TEST_CASE("down-up-down and two-hit")
{
    const TripleQuery q{-1.0, 0.0, 0.25, 0.5};
    CHECK(down_up_down_prob(NonlinearExample{}, q, grid(), n, 1).value == 0.0);
    CHECK(down_up_down_prob(CompleteDependence{}, q, grid(), n, 1).value == 0.0);
    const auto sb = down_up_down_prob(SineBump{}, q, grid(), 100000, 2);
    CHECK(std::abs(sb.value - (std::exp(-1.0) - std::exp(-1.0625))) <= 3.0 * sb.se);
    const auto th = two_hit_prob(SineBump{}, SplitQuery{-1.0, 0.25, 0.0, 0.5}, grid(), 100000, 2);
    CHECK(th.value >= sb.value - 2.0 * sb.se);

    const auto tb = two_hit_prob(TwoBranch{}, SplitQuery{-1.0, 0.5}, grid(), n, 3);
    CHECK(std::abs(tb.value - *final_example_reference(-1.0, 0.5).two_hit) <= 3.0 * tb.se + 0.005);
    CHECK(two_hit_prob(CompleteDependence{}, SplitQuery{-1.0, 0.5}, grid(), 1000, 3).value == 0.0);
}

TEST_CASE("multi-hit")
{
    const std::vector<Interval> three{{0, 0.3}, {0.4, 0.6}, {0.7, 1}};
    const auto e3 = multi_hit_prob(TwoBranch{}, -1.0, three, grid(), n, 1);
    CHECK(e3.value == 0.0);
    CHECK(e3.ci_hi <= 3.0 / n);
    const std::vector<Interval> two{{0, 0.5}, {0.5, 1}};
    CHECK(multi_hit_prob(TwoBranch{}, -1.0, two, grid(), n, 1).value
          == two_hit_prob(TwoBranch{}, SplitQuery{-1.0, 0.5}, grid(), n, 1).value);
    const std::vector<Interval> one{{0, 1}};
    CHECK(multi_hit_prob(CompleteDependence{}, -1.0, one, grid(), 1000, 1).value == 0.0);
    const std::vector<Interval> overlap{{0, 0.6}, {0.5, 1}};
    CHECK_THROWS_AS(multi_hit_prob(TwoBranch{}, -1.0, overlap, grid(), 10, 1), std::invalid_argument);
}

TEST_CASE("function hitting for complete dependence")
{
    const auto f = LevelFunction::piecewise_linear(grid(), {{0.0, -1.0}, {1.0, -2.0}});
    const auto e = function_hitting_prob(CompleteDependence{}, f, Interval{0, 1}, n, 4);
    CHECK(std::abs(e.value - (std::exp(-1.0) - std::exp(-2.0))) <= 3.0 * e.se);
}

TEST_CASE("per-draw invariants on shared paths")
{
    const Interval inner{0.25, 0.5}, outer{0.1, 0.9};
    for (const auto& spec : catalogue()) {
        const MspCorpus corpus{spec, grid(), 500, 17};
        const auto ri = grid_range(grid(), inner), ro = grid_range(grid(), outer);
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const auto p = corpus.path(i);
            for (double x : {-0.3, -1.0, -3.0}) {
                const auto pi = p.subspan(ri.first, ri.size()), po = p.subspan(ro.first, ro.size());
                if (hits_level(pi, x))
                    CHECK(hits_level(po, x));
                // Exactly one of: all below, all above, hit.
                const auto ex = path_extrema(po);
                const int cases = int(ex.max < x) + int(ex.min > x) + int(hits_level(po, x));
                CHECK(cases == 1);
            }
        }
    }
}

TEST_CASE("survivor identity residual vanishes for the nonlinear generator")
{
    const std::vector<double> levels{-0.5, -2.0};
    const auto res = survivor_identity_residual(NonlinearExample{}, levels, Interval{0.2, 0.9}, grid(), n, 5);
    for (const auto& r : res)
        CHECK(std::abs(r.value) <= 4.0 * r.se);
    const auto gap = interval_cdf_gap(NonlinearExample{}, levels, Interval{0.2, 0.9}, grid(), n, 5);
    for (const auto& g : gap)
        CHECK(g.value == 0.0);
    const auto sgap = interval_cdf_gap(SineBump{}, levels, Interval{0.2, 0.9}, grid(), n, 5);
    for (const auto& g : sgap)
        CHECK(g.value < 0.0);
}

TEST_CASE("closing example reference")
{
    const auto r = final_example_reference(-1.0, 0.5);
    CHECK(r.h == doctest::Approx((2.0 - std::exp(-1.0)) * std::exp(-1.0)).epsilon(1e-15));
    CHECK(r.h == doctest::Approx(0.6004236).epsilon(1e-6));
    CHECK(r.m == 2.0);
    CHECK(*r.two_hit == doctest::Approx(0.056954).epsilon(1e-5));
    CHECK(final_example_reference(-1e-9).h == doctest::Approx(0.0).epsilon(1e-8));
    CHECK_THROWS_AS(final_example_reference(0.0), std::invalid_argument);
}
