// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mshit/dnorm.hpp"
#include "mshit/generators.hpp"
#include "mshit/hitting.hpp"
#include "mshit/msp.hpp"
#include "mshit/verify.hpp"

using namespace mshit;

namespace {

const TimeGrid grid = make_grid(default_grid_points);
const std::size_t n = default_replications();

std::uint64_t seed_for(int criterion)
{
    return check_seed(7, "acceptance-" + std::to_string(criterion));
}

struct Verdict
{
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string name(const GeneratorSpec& s) { return variant_name(s); }

Verdict margins()
{
    Verdict v;
    const std::vector<std::size_t> idx{grid.find(0.0), grid.find(0.37), grid.find(1.0)};
    const double band = ks_band95(n);
    for (const auto& spec : catalogue()) {
        const auto samples = marginal_samples(spec, grid, idx, n, seed_for(1));
        for (std::size_t j = 0; j < idx.size(); ++j) {
            const double ks = ks_distance_neg_exponential(samples[j]);
            v.require(ks <= band, name(spec) + " t=" + num(grid[idx[j]]) + " KS=" + num(ks) + " > " + num(band));
        }
    }
    return v;
}

Verdict roundtrip()
{
    Verdict v;
    const std::vector<LevelFunction> fs{
        LevelFunction::constant(grid, -1.0),
        LevelFunction::indicator_step(grid, Interval{0.5, 1.0}, -1.01, -0.01),
        LevelFunction::piecewise_linear(grid, {{0.0, -0.5}, {1.0, -1.5}}),
    };
    for (const auto& spec : catalogue()) {
        for (std::size_t k = 0; k < fs.size(); ++k) {
            const auto joint = joint_cdf_estimate(spec, fs[k], n, seed_for(2));
            const auto d = dnorm_estimate(spec, fs[k], n, seed_for(2));
            const double target = std::exp(-d.value);
            const double se = std::hypot(joint.se, target * d.se);
            const double gap = std::abs(joint.value - target);
            v.require(gap <= 3.0 * se, name(spec) + " f#" + std::to_string(k) + " gap=" + num(gap) + " 3se=" + num(3 * se));
        }
    }
    return v;
}

Verdict example2_constant()
{
    Verdict v;
    const PiecewiseExample spec{2, 0.25, 0.75};
    const auto mom = generator_moments(spec, grid, n, seed_for(3));
    const double exact = (3.0 * 4 + 2) / 9.0;
    v.require(std::abs(mom.m_hat.value - exact) <= 3.0 * mom.m_hat.se,
              "m_hat=" + num(mom.m_hat.value) + " se=" + num(mom.m_hat.se));
    v.require(closed_form_m(spec) == exact, "closed form differs from 14/9");
    return v;
}

Verdict complete_dependence()
{
    Verdict v;
    const auto h = hitting_prob(CompleteDependence{}, -1.0, Interval{0, 1}, grid, n, seed_for(4));
    v.require(h.value == 0.0 && h.ci_hi <= 3e-5, "h=" + num(h.value) + " ci_hi=" + num(h.ci_hi));
    const auto f = LevelFunction::piecewise_linear(grid, {{0.0, -1.0}, {1.0, -2.0}});
    const auto e = function_hitting_prob(CompleteDependence{}, f, Interval{0, 1}, n, seed_for(4));
    const double exact = std::exp(-1.0) - std::exp(-2.0);
    v.require(std::abs(e.value - exact) <= 3.0 * e.se, "image hit=" + num(e.value) + " se=" + num(e.se));
    return v;
}

Verdict positivity_and_nullity()
{
    Verdict v;
    const PiecewiseExample spec{};
    const auto pos = hitting_prob(spec, -1.0, Interval{0, 1}, grid, n, seed_for(5));
    v.require(pos.value > 0.0 && pos.ci_lo > 0.0, "[0,1]: h=" + num(pos.value) + " ci_lo=" + num(pos.ci_lo));
    const auto null = hitting_prob(spec, -1.0, Interval{0.25, 0.75}, grid, n, seed_for(5));
    v.require(null.value == 0.0 && null.ci_hi <= 3e-5, "[0.25,0.75]: h=" + num(null.value) + " ci_hi=" + num(null.ci_hi));
    return v;
}

Verdict hitting_bound_check()
{
    Verdict v;
    const std::vector<double> levels{-0.25, -1.0, -4.0};
    const auto curve = hitting_curve(SineBump{0.5}, levels, Interval{0, 1}, grid, n, seed_for(6),
                                     GeneratorConstants{1.125, 0.875});
    for (std::size_t j = 0; j < levels.size(); ++j) {
        const auto& e = curve.estimates[j];
        const double bound = std::exp(0.875 * levels[j]) - std::exp(1.125 * levels[j]);
        v.require(e.value <= bound + 4.0 * e.se + 0.005, "x=" + num(levels[j]) + " h=" + num(e.value) + " bound=" + num(bound));
    }
    return v;
}

Verdict integral_bound()
{
    Verdict v;
    const auto levels = default_integral_levels();
    const auto curve = hitting_curve(SineBump{0.5}, levels, Interval{0, 1}, grid, n, seed_for(7),
                                     GeneratorConstants{1.125, 0.875});
    const auto hi = hitting_integral(curve, 0.875);
    const double upper = hi.integral + hi.tail_bound;
    v.require(upper <= 0.2540 + 0.02, "integral+tail=" + num(upper));
    v.require(hi.integral >= 0.001, "integral=" + num(hi.integral));
    return v;
}

Verdict closing_curve()
{
    Verdict v;
    const std::vector<double> levels{-0.5, -1.0, -2.0, -4.0};
    const auto curve = hitting_curve(TwoBranch{}, levels, Interval{0, 1}, grid, n, seed_for(8), GeneratorConstants{2.0, 0.0});
    for (std::size_t j = 0; j < levels.size(); ++j) {
        const auto& e = curve.estimates[j];
        const double exact = final_example_reference(levels[j]).h;
        v.require(std::abs(e.value - exact) <= 3.0 * e.se + 0.005,
                  "x=" + num(levels[j]) + " h=" + num(e.value) + " exact=" + num(exact));
    }
    const auto int_levels = default_integral_levels();
    const auto full = hitting_curve(TwoBranch{}, int_levels, Interval{0, 1}, grid, n, seed_for(8), GeneratorConstants{2.0, 0.0});
    const double total = hitting_integral(full, 0.0).integral + final_example_tail(int_levels.back());
    v.require(std::abs(total - 1.5) <= 0.05, "integral=" + num(total));
    return v;
}

Verdict two_and_three_hits()
{
    Verdict v;
    const auto two = two_hit_prob(TwoBranch{}, SplitQuery{-1.0, 0.5}, grid, n, seed_for(9));
    const double exact = std::pow(std::exp(-0.5) - std::exp(-1.0), 2);
    v.require(std::abs(two.value - exact) <= 3.0 * two.se + 0.005, "two-hit=" + num(two.value) + " exact=" + num(exact));
    const std::vector<Interval> three{{0, 0.3}, {0.4, 0.6}, {0.7, 1}};
    const auto e3 = multi_hit_prob(TwoBranch{}, -1.0, three, grid, n, seed_for(9));
    v.require(e3.value == 0.0 && e3.ci_hi <= 3e-5, "three-hit=" + num(e3.value) + " ci_hi=" + num(e3.ci_hi));
    return v;
}

Verdict down_up_down()
{
    Verdict v;
    const TripleQuery q{-1.0, 0.0, 0.25, 0.5};
    const auto sb = down_up_down_prob(SineBump{0.5}, q, grid, n, seed_for(10));
    const double exact = std::exp(-1.0) - std::exp(-1.0625);
    v.require(std::abs(sb.value - exact) <= 3.0 * sb.se, "SineBump=" + num(sb.value) + " se=" + num(sb.se));
    const auto nl = down_up_down_prob(NonlinearExample{}, q, grid, n, seed_for(10));
    v.require(nl.value == 0.0 && nl.ci_hi <= 3e-5, "Nonlinear=" + num(nl.value) + " ci_hi=" + num(nl.ci_hi));
    return v;
}

Verdict equivalence_bundle()
{
    Verdict v;
    // Ten times the default: at 1e5 draws the SineBump residual sits at 2 to
    // 4 standard errors, short of the required 5.
    const std::size_t big = 10 * n;
    const std::vector<double> levels{-0.5, -2.0};
    const Interval window{0.2, 0.9};
    const auto nl = survivor_identity_residual(NonlinearExample{}, levels, window, grid, big, seed_for(11));
    const auto sb = survivor_identity_residual(SineBump{0.5}, levels, window, grid, big, seed_for(11));
    for (std::size_t j = 0; j < levels.size(); ++j) {
        v.require(std::abs(nl[j].value) <= 4.0 * nl[j].se,
                  "Nonlinear x0=" + num(levels[j]) + " r/se=" + num(nl[j].value / nl[j].se));
        v.require(std::abs(sb[j].value) > 5.0 * sb[j].se,
                  "SineBump x0=" + num(levels[j]) + " r/se=" + num(sb[j].value / sb[j].se));
    }
    return v;
}

Verdict property_suites()
{
    Verdict v;
    const std::size_t draws = 1000;
    const auto small = LevelFunction::indicator_step(grid, Interval{0.5, 1.0}, -1.0, -0.01);
    const auto big = LevelFunction::constant(grid, -1.0);
    const auto inner = grid_range(grid, Interval{0.3, 0.6}), outer = grid_range(grid, Interval{0.1, 0.9});
    const std::size_t i0 = grid.find(0.0), i1 = grid.find(0.25), i2 = grid.find(0.5);
    for (const auto& spec : catalogue()) {
        const std::uint64_t seed = seed_for(12);
        const GeneratorCorpus gens{spec, grid, draws, seed};
        const auto ws = gens.weighted_sup(small), wb = gens.weighted_sup(big);
        std::size_t bad = 0;
        for (std::size_t i = 0; i < draws; ++i)
            bad += ws[i] > wb[i];
        v.require(bad == 0, name(spec) + " dnorm monotonicity violated on " + std::to_string(bad) + " draws");

        const MspCorpus paths{spec, grid, draws, seed};
        std::size_t bad_hit = 0, bad_split = 0;
        for (std::size_t i = 0; i < draws; ++i) {
            const auto p = paths.path(i);
            for (double x : {-0.25, -1.0, -4.0}) {
                bad_hit += hits_level(p.subspan(inner.first, inner.size()), x)
                           && !hits_level(p.subspan(outer.first, outer.size()), x);
                const bool dud = p[i0] <= x && p[i1] > x && p[i2] <= x;
                const bool two = hits_level(p.subspan(i0, i1 - i0 + 1), x) && hits_level(p.subspan(i1, i2 - i1 + 1), x);
                bad_split += dud && !two;
            }
        }
        v.require(bad_hit == 0, name(spec) + " hit-set monotonicity violated " + std::to_string(bad_hit) + "x");
        v.require(bad_split == 0, name(spec) + " two-hit < down-up-down on " + std::to_string(bad_split) + " draws");
        const auto dud = down_up_down_prob(spec, TripleQuery{-1.0, 0.0, 0.25, 0.5}, grid, draws, seed);
        const auto two = two_hit_prob(spec, SplitQuery{-1.0, 0.25, 0.0, 0.5}, grid, draws, seed);
        v.require(two.value >= dud.value, name(spec) + " estimator two-hit < down-up-down");

        const MspSampler sampler{spec, grid};
        auto scratch = sampler.make_scratch();
        std::vector<double> a(grid.size()), b(grid.size());
        std::size_t mismatched = 0;
        for (std::size_t i = 0; i < 100; ++i) {
            Stream s1 = replica_stream(seed, tags::msp, i), s2 = replica_stream(seed, tags::msp, i);
            sampler.draw(s1, a, scratch);
            sampler.draw(s2, b, scratch, 100);
            mismatched += a != b;
        }
        v.require(mismatched == 0, name(spec) + " stopping rule inexact on " + std::to_string(mismatched) + " paths");
    }
    return v;
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"margins follow exp(x)", margins},
        {"joint cdf equals exp(-dnorm)", roundtrip},
        {"piecewise generator constant 14/9", example2_constant},
        {"complete dependence never hits a level", complete_dependence},
        {"hitting positive iff generator varies on the window", positivity_and_nullity},
        {"hitting bound exp(x m~) - exp(x m)", hitting_bound_check},
        {"hitting integral bound (m - m~)/(m m~)", integral_bound},
        {"two-branch hitting curve and integral 3/2", closing_curve},
        {"two-hit closed form and no three hits", two_and_three_hits},
        {"down-up-down identity", down_up_down},
        {"endpoint-sup equivalences", equivalence_bundle},
        {"per-draw property suites and stopping exactness", property_suites},
    };
    std::printf("acceptance: grid=%zu n=%zu\n", grid.size(), n);
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[k].second();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !v.pass;
        std::printf("%s criterion %zu: %s (%.1fs)%s%s\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                    secs, v.detail.empty() ? "" : " -- ", v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
