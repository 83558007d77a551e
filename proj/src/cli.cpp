#include "mshit/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"

#include "mshit/dnorm.hpp"
#include "mshit/hitting.hpp"
#include "mshit/msp.hpp"
#include "mshit/replicate.hpp"
#include "mshit/spec_json.hpp"
#include "mshit/verify.hpp"

namespace mshit::cli {

using nlohmann::json;

std::string format_real(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

const std::vector<std::string> commands = {"simulate", "dnorm", "hitting", "multihit", "verify"};

json load_json(const std::string& path_or_inline, const char* what)
{
    try {
        if (!path_or_inline.empty() && path_or_inline.front() == '{')
            return json::parse(path_or_inline);
        std::ifstream in(path_or_inline);
        if (!in)
            throw UsageError(std::string("cannot open ") + what + " file '" + path_or_inline + "'");
        return json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError(std::string("malformed ") + what + " JSON '" + path_or_inline + "': " + e.what());
    }
}

std::pair<double, double> parse_pair(const std::string& token)
{
    const auto comma = token.find(',');
    if (comma == std::string::npos)
        throw UsageError("interval '" + token + "' must be lo,hi");
    try {
        std::size_t p1 = 0, p2 = 0;
        const double lo = std::stod(token.substr(0, comma), &p1);
        const double hi = std::stod(token.substr(comma + 1), &p2);
        if (p1 != comma || p2 != token.size() - comma - 1)
            throw std::invalid_argument("trailing characters");
        return {lo, hi};
    } catch (const std::exception&) {
        throw UsageError("interval '" + token + "' must be lo,hi");
    }
}

class Output
{
public:
    explicit Output(const std::string& path)
    {
        if (path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_)
                throw std::runtime_error("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    void finish()
    {
        stream().flush();
        if (!stream())
            throw std::runtime_error("failed writing output");
    }

private:
    std::unique_ptr<std::ofstream> file_;
};

json estimate_json(const Estimate& e)
{
    return json{{"value", e.value}, {"se", e.se}, {"ci_lo", e.ci_lo}, {"ci_hi", e.ci_hi}, {"n", e.n}, {"seed", e.seed}};
}

json intervals_json(const std::vector<Interval>& ivs)
{
    json out = json::array();
    for (const auto& iv : ivs)
        out.push_back(json::array({iv.lo, iv.hi}));
    return out;
}

int run_simulate(const RunConfig& c, std::ostream& out)
{
    const TimeGrid grid = make_grid(c.grid_points);
    const MspSampler sampler{*c.generator, grid, c.max_points};
    std::vector<std::vector<double>> paths(c.paths, std::vector<double>(grid.size()));
    run_replicas(
        c.paths, [&] { return sampler.make_scratch(); },
        [&](std::size_t i, MspSampler::Scratch& scratch) {
            Stream stream = replica_stream(c.seed, tags::msp, i);
            sampler.draw(stream, paths[i], scratch);
        });
    out << "t";
    for (std::size_t k = 0; k < c.paths; ++k)
        out << ",path_" << k;
    out << '\n';
    for (std::size_t j = 0; j < grid.size(); ++j) {
        out << format_real(grid[j]);
        for (const auto& p : paths)
            out << ',' << format_real(p[j]);
        out << '\n';
    }
    return 0;
}

int run_dnorm(const RunConfig& c, std::ostream& out)
{
    const TimeGrid grid = make_grid(c.grid_points);
    const auto f = level_function_from_json(c.level_function, grid);
    const auto d = dnorm_estimate(*c.generator, f, c.n, c.seed);
    const json doc{{"generator", generator_to_json(*c.generator)},
                   {"f", c.level_function},
                   {"grid", c.grid_points},
                   {"n", d.n},
                   {"seed", c.seed},
                   {"value", d.value},
                   {"se", d.se},
                   {"sup_norm", f.sup_norm()},
                   {"exp_minus_dnorm", std::exp(-d.value)}};
    out << doc.dump(2) << '\n';
    return 0;
}

int run_hitting(const RunConfig& c, std::ostream& out)
{
    const TimeGrid grid = make_grid(c.grid_points);
    std::vector<double> levels = c.levels;
    std::sort(levels.begin(), levels.end(), std::greater<>());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    const Interval window = c.intervals.empty() ? Interval{0.0, 1.0} : c.intervals.front();
    const auto curve = hitting_curve(*c.generator, levels, window, grid, c.n, c.seed);
    out << "x,estimate,ci_lo,ci_hi,bound\n";
    for (std::size_t j = 0; j < levels.size(); ++j) {
        const auto& e = curve.estimates[j];
        out << format_real(levels[j]) << ',' << format_real(e.value) << ',' << format_real(e.ci_lo) << ','
            << format_real(e.ci_hi) << ',' << format_real(curve.upper_bounds[j]) << '\n';
    }
    return 0;
}

int run_multihit(const RunConfig& c, std::ostream& out)
{
    const TimeGrid grid = make_grid(c.grid_points);
    const double x0 = c.levels.front();
    const auto e = multi_hit_prob(*c.generator, x0, c.intervals, grid, c.n, c.seed);
    const json doc{{"query",
                    {{"generator", generator_to_json(*c.generator)},
                     {"x0", x0},
                     {"k", c.intervals.size()},
                     {"intervals", intervals_json(c.intervals)},
                     {"grid", c.grid_points},
                     {"n", c.n},
                     {"seed", c.seed}}},
                   {"estimate", estimate_json(e)}};
    out << doc.dump(2) << '\n';
    return 0;
}

int run_verify(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    const auto report = run_checks(c.suite, c.seed, c.n);
    out << report_to_json(report, c.timing).dump(2) << '\n';
    for (const auto& chk : report.checks)
        err << (chk.pass ? "PASS " : "FAIL ") << chk.id << '\n';
    return report.pass ? 0 : 1;
}

}  // namespace

RunConfig parse_invocation(const std::vector<std::string>& argv, std::ostream* notes)
{
    if (argv.empty())
        throw UsageError("missing subcommand (simulate | dnorm | hitting | multihit | verify)");
    RunConfig c;
    c.command = argv.front();
    if (std::find(commands.begin(), commands.end(), c.command) == commands.end())
        throw UsageError("unknown subcommand '" + c.command + "'");
    c.n = default_replications();

    CLI::App app{"mshit " + c.command};
    app.allow_extras(false);
    std::string generator_path;
    std::string f_doc;
    std::vector<std::string> interval_tokens;
    bool no_timing = false;
    app.add_option("--generator", generator_path, "generator spec JSON file");
    app.add_option("--grid", c.grid_points, "number of grid points");
    app.add_option("--n", c.n, "replications");
    app.add_option("--seed", c.seed, "master seed");
    app.add_option("--out", c.out, "output file, '-' for stdout");
    app.add_option("--threads", c.threads, "worker threads (0 = default)");
    app.add_option("--max-points", c.max_points, "arrival limit per simulated path");
    if (c.command == "hitting" || c.command == "multihit")
        app.add_option("--x", c.levels, "negative level(s)");
    if (c.command == "hitting" || c.command == "multihit")
        app.add_option("--interval", interval_tokens, "window lo,hi (repeatable for multihit)");
    if (c.command == "simulate")
        app.add_option("--paths", c.paths, "number of paths");
    if (c.command == "dnorm")
        app.add_option("--f", f_doc, "level function JSON (file or inline)");
    if (c.command == "verify") {
        app.add_option("--suite", c.suite, "check ids or 'paper'");
        app.add_flag("--no-timing", no_timing, "zero runtime fields in the report");
    }

    std::vector<std::string> rest(argv.begin() + 1, argv.end());
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    for (double x : c.levels) {
        if (!(x < 0.0))
            throw UsageError("level must be negative (got " + format_real(x) + ")");
    }
    if (c.grid_points < 2)
        throw UsageError("--grid must be >= 2");
    if (c.n < 1)
        throw UsageError("--n must be >= 1");
    if (c.threads < 0)
        throw UsageError("--threads must be >= 0");
    if (c.max_points < 1)
        throw UsageError("--max-points must be >= 1");
    c.timing = !no_timing;

    if (c.command != "verify") {
        if (generator_path.empty())
            throw UsageError("--generator is required for " + c.command);
        try {
            c.generator = generator_from_json(load_json(generator_path, "generator"));
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("invalid generator: ") + e.what());
        } catch (const json::exception& e) {
            throw UsageError(std::string("invalid generator: ") + e.what());
        }
    }

    const TimeGrid grid = make_grid(c.grid_points);
    for (const auto& tok : interval_tokens) {
        const auto [lo, hi] = parse_pair(tok);
        if (!(0.0 <= lo && lo < hi && hi <= 1.0))
            throw UsageError("interval '" + tok + "' must satisfy 0 <= lo < hi <= 1");
        try {
            const auto snapped = snap_to_grid(grid, lo, hi);
            if (snapped.moved && notes)
                *notes << "note: interval [" << format_real(lo) << ", " << format_real(hi) << "] snapped to ["
                       << format_real(snapped.interval.lo) << ", " << format_real(snapped.interval.hi) << "]\n";
            c.intervals.push_back(snapped.interval);
        } catch (const std::invalid_argument& e) {
            throw UsageError("interval '" + tok + "' collapses on the grid: " + e.what());
        }
    }

    if (c.command == "hitting") {
        if (c.levels.empty())
            c.levels = {-1.0};
        if (c.intervals.size() > 1)
            throw UsageError("hitting takes a single --interval");
    }
    if (c.command == "multihit") {
        if (c.levels.size() != 1)
            throw UsageError("multihit needs exactly one --x");
        if (c.intervals.empty())
            throw UsageError("multihit needs at least one --interval");
    }
    if (c.command == "dnorm") {
        if (f_doc.empty())
            throw UsageError("--f is required for dnorm");
        c.level_function = load_json(f_doc, "level function");
        try {
            (void)level_function_from_json(c.level_function, grid);
        } catch (const std::exception& e) {
            throw UsageError(std::string("invalid level function: ") + e.what());
        }
    }
    if (c.command == "simulate" && c.paths < 1)
        throw UsageError("--paths must be >= 1");
    if (c.command == "verify") {
        if (c.suite.empty())
            c.suite = {"paper"};
        try {
            (void)resolve_suite(c.suite);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        if (c.n < 2)
            throw UsageError("--n must be >= 2 for verify");
    }
    return c;
}

json config_to_json(const RunConfig& c)
{
    json doc{{"command", c.command},
             {"grid", c.grid_points},
             {"n", c.n},
             {"seed", c.seed},
             {"out", c.out},
             {"threads", c.threads},
             {"max_points", c.max_points},
             {"levels", c.levels},
             {"intervals", intervals_json(c.intervals)},
             {"paths", c.paths},
             {"f", c.level_function},
             {"suite", c.suite},
             {"timing", c.timing}};
    doc["generator"] = c.generator ? generator_to_json(*c.generator) : json(nullptr);
    return doc;
}

RunConfig config_from_json(const json& doc)
{
    RunConfig c;
    c.command = doc.at("command").get<std::string>();
    if (!doc.at("generator").is_null())
        c.generator = generator_from_json(doc.at("generator"));
    c.grid_points = doc.at("grid").get<std::size_t>();
    c.n = doc.at("n").get<std::size_t>();
    c.seed = doc.at("seed").get<std::uint64_t>();
    c.out = doc.at("out").get<std::string>();
    c.threads = doc.at("threads").get<int>();
    c.max_points = doc.at("max_points").get<std::size_t>();
    c.levels = doc.at("levels").get<std::vector<double>>();
    for (const auto& iv : doc.at("intervals"))
        c.intervals.emplace_back(iv.at(0).get<double>(), iv.at(1).get<double>());
    c.paths = doc.at("paths").get<std::size_t>();
    c.level_function = doc.at("f");
    c.suite = doc.at("suite").get<std::vector<std::string>>();
    c.timing = doc.at("timing").get<bool>();
    return c;
}

int dispatch(const RunConfig& c, std::ostream& err)
{
    ScopedExecution exec{ExecutionConfig{Backend::openmp, c.threads}};
    try {
        Output out{c.out};
        int code = 0;
        if (c.command == "simulate")
            code = run_simulate(c, out.stream());
        else if (c.command == "dnorm")
            code = run_dnorm(c, out.stream());
        else if (c.command == "hitting")
            code = run_hitting(c, out.stream());
        else if (c.command == "multihit")
            code = run_multihit(c, out.stream());
        else if (c.command == "verify")
            code = run_verify(c, out.stream(), err);
        else
            throw UsageError("unknown subcommand '" + c.command + "'");
        out.finish();
        return code;
    } catch (const BoundTooLoose& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const UsageError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

int run(const std::vector<std::string>& argv, std::ostream& err)
{
    try {
        return dispatch(parse_invocation(argv, &err), err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace mshit::cli
