#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace mshit {

/// Exact values for the two-point construction eta_t = max(eta_0/(1-t), eta_1/t),
/// i.e. the MSP of the TwoBranch generator.
struct FinalExampleValues
{
    double h;                       ///< (1 - e^x - x) e^x
    double m;                       ///< 2
    std::optional<double> two_hit;  ///< (e^{x(1-t0)} - e^x)(e^{x t0} - e^x)
};

/// Throws std::invalid_argument for x >= 0 or t0 outside (0, 1).
FinalExampleValues final_example_reference(double x, std::optional<double> t0 = std::nullopt);

/// Integral of the exact TwoBranch hitting curve over (-inf, x_min].
double final_example_tail(double x_min);

/// Tolerance policy: pass iff |observed - expected| <= z * se + grid_allowance.
struct TolerancePolicy
{
    double z = 3.0;
    double grid_allowance = 0.0;
};

struct CheckSpec
{
    std::string id;
    std::string description;
    TolerancePolicy tolerance;
};

struct CheckOutcome
{
    std::string id;
    std::vector<double> observed;
    std::vector<double> expected;
    std::vector<double> tol;
    bool pass = false;
    double seconds = 0.0;
};

struct CheckReport
{
    std::string suite;
    std::uint64_t seed = 0;
    std::size_t n_default = 0;
    std::vector<CheckOutcome> checks;
    bool pass = false;
};

/// Every registered check, in suite order.
const std::vector<CheckSpec>& check_registry();

/// Ids of the full suite ("paper").
std::vector<std::string> paper_suite_ids();

/// Resolves "paper" to the full suite; other names must be registered ids.
/// Throws std::invalid_argument naming the first unknown id.
std::vector<std::string> resolve_suite(std::span<const std::string> names);

/// Seed of one check, derived from the master seed and the check id.
std::uint64_t check_seed(std::uint64_t master_seed, const std::string& id);

/// 100000, or MSHIT_DEFAULT_N when set to a positive integer.
std::size_t default_replications();

/// Runs the checks in order. All ids are validated before anything runs.
CheckReport run_checks(std::span<const std::string> names, std::uint64_t master_seed,
                       std::size_t n_default = default_replications());

/// {suite, seed, n_default, checks: [{id, observed, expected, tol, pass, seconds}], pass}.
/// With timing disabled every "seconds" field is 0, making reports byte-stable.
nlohmann::json report_to_json(const CheckReport& report, bool timing = true);

}  // namespace mshit
