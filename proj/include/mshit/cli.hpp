#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "mshit/generators.hpp"
#include "mshit/paths.hpp"

namespace mshit::cli {

/// Bad flags, malformed documents, or invalid parameters. Exit code 2.
class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig
{
    std::string command;  ///< simulate | dnorm | hitting | multihit | verify
    std::optional<GeneratorSpec> generator;
    std::size_t grid_points = default_grid_points;
    std::size_t n = 100000;
    std::uint64_t seed = 0;
    std::string out = "-";  ///< "-" is stdout
    int threads = 0;
    std::size_t max_points = 1'000'000;

    std::vector<double> levels;        ///< hitting, multihit
    std::vector<Interval> intervals;   ///< hitting (one window), multihit
    std::size_t paths = 1;             ///< simulate
    nlohmann::json level_function;     ///< dnorm
    std::vector<std::string> suite;    ///< verify
    bool timing = true;                ///< verify: false zeroes runtime fields

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// argv excludes the program name. Loads and validates the generator
/// document, applies defaults (grid 1001, n 100000 or MSHIT_DEFAULT_N) and
/// snaps interval endpoints to the grid, noting any snap on `notes`.
RunConfig parse_invocation(const std::vector<std::string>& argv, std::ostream* notes = nullptr);

nlohmann::json config_to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& doc);

/// Runs the subcommand and writes its output. Returns the process exit code.
int dispatch(const RunConfig& config, std::ostream& err);

/// parse_invocation + dispatch with the exit code contract (0 ok, 1 failure, 2 usage).
int run(const std::vector<std::string>& argv, std::ostream& err);

/// Round-trip decimal formatting (17 significant digits).
std::string format_real(double v);

}  // namespace mshit::cli
