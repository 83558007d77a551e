#include "doctest.h"

#include <fstream>
#include <sstream>

#include "mshit/verify.hpp"

using namespace mshit;

TEST_CASE("suite resolution")
{
    const std::vector<std::string> paper{"paper"};
    CHECK(resolve_suite(paper) == paper_suite_ids());
    CHECK(paper_suite_ids().size() == check_registry().size());
    const std::vector<std::string> bad{"eq2-roundtrip", "no-such-check"};
    CHECK_THROWS_AS(resolve_suite(bad), std::invalid_argument);
    CHECK(check_seed(7, "a") != check_seed(7, "b"));
}

TEST_CASE("single-entry report is deterministic without timing")
{
    const std::vector<std::string> one{"eq2-roundtrip"};
    const auto a = run_checks(one, 7, 2000);
    REQUIRE(a.checks.size() == 1);
    CHECK(a.checks[0].id == "eq2-roundtrip");
    const auto b = run_checks(one, 7, 2000);
    CHECK(report_to_json(a, false).dump() == report_to_json(b, false).dump());
    CHECK(report_to_json(a, false).at("checks").at(0).at("seconds") == 0.0);
}

TEST_CASE("unknown ids fail before running")
{
    const std::vector<std::string> bad{"no-such-check"};
    CHECK_THROWS_AS(run_checks(bad, 7, 100), std::invalid_argument);
}

TEST_CASE("check matrix documents every check id")
{
    std::ifstream in(std::string(MSHIT_SOURCE_DIR) + "/docs/check_matrix.md");
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    const auto text = ss.str();
    for (const auto& c : check_registry())
        CHECK_MESSAGE(text.find("`" + c.id + "`") != std::string::npos, c.id);
    const std::vector<std::string> statements{
        "generator-mean-one",        "dnorm-identity",        "boundary-null",
        "complete-dependence-image", "hitting-iff-nonconstant", "piecewise-constant-m",
        "survivor-bound",            "hitting-bound",         "down-up-down-formula",
        "endpoint-sup",              "two-hit-lower-bound",   "endpoint-equivalences",
        "nonlinear-generator",       "two-branch-curve",      "two-branch-two-hit",
        "two-branch-no-three-hit",   "generator-existence",   "max-stability-norming",
        "takahashi-proof",           "general-level-functions"};
    for (const auto& key : statements)
        CHECK_MESSAGE(text.find("| `" + key + "` |") != std::string::npos, key);
}
