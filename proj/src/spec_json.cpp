#include "mshit/spec_json.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace mshit {

namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void expect_keys(const json& params, std::set<std::string> allowed, const std::string& variant)
{
    if (!params.is_object())
        throw std::invalid_argument("generator params must be an object");
    for (const auto& [key, _] : params.items()) {
        if (!allowed.count(key))
            throw std::invalid_argument("unknown parameter '" + key + "' for " + variant);
    }
}

double number(const json& params, const char* key, double fallback)
{
    if (!params.contains(key))
        return fallback;
    const auto& v = params.at(key);
    if (!v.is_number())
        throw std::invalid_argument(std::string("parameter '") + key + "' must be a number");
    return v.get<double>();
}

}  // namespace

GeneratorSpec generator_from_json(const json& doc)
{
    if (!doc.is_object() || !doc.contains("variant") || !doc.at("variant").is_string())
        throw std::invalid_argument("generator document needs a string \"variant\" field");
    const std::string variant = doc.at("variant").get<std::string>();
    const json params = doc.value("params", json::object());

    GeneratorSpec spec;
    if (variant == "CompleteDependence") {
        expect_keys(params, {}, variant);
        spec = CompleteDependence{};
    } else if (variant == "PiecewiseExample") {
        expect_keys(params, {"n", "a", "b"}, variant);
        PiecewiseExample s;
        if (params.contains("n")) {
            if (!params.at("n").is_number_integer())
                throw std::invalid_argument("parameter 'n' must be an integer");
            s.n = params.at("n").get<int>();
        }
        s.a = number(params, "a", s.a);
        s.b = number(params, "b", s.b);
        spec = s;
    } else if (variant == "NonlinearExample") {
        expect_keys(params, {"a", "b", "c", "d", "e"}, variant);
        NonlinearExample s;
        s.a = number(params, "a", s.a);
        s.b = number(params, "b", s.b);
        s.c = number(params, "c", s.c);
        s.d = number(params, "d", s.d);
        s.e = number(params, "e", s.e);
        spec = s;
    } else if (variant == "TwoBranch") {
        expect_keys(params, {}, variant);
        spec = TwoBranch{};
    } else if (variant == "SineBump") {
        expect_keys(params, {"amp"}, variant);
        spec = SineBump{number(params, "amp", 0.5)};
    } else {
        throw std::invalid_argument("unknown generator variant '" + variant + "'");
    }
    require_valid(spec);
    return spec;
}

json generator_to_json(const GeneratorSpec& spec)
{
    json params = std::visit(overloaded{
                                 [](const CompleteDependence&) { return json::object(); },
                                 [](const PiecewiseExample& s) { return json{{"n", s.n}, {"a", s.a}, {"b", s.b}}; },
                                 [](const NonlinearExample& s) {
                                     return json{{"a", s.a}, {"b", s.b}, {"c", s.c}, {"d", s.d}, {"e", s.e}};
                                 },
                                 [](const TwoBranch&) { return json::object(); },
                                 [](const SineBump& s) { return json{{"amp", s.amp}}; },
                             },
                             spec);
    return json{{"variant", variant_name(spec)}, {"params", params}};
}

LevelFunction level_function_from_json(const json& doc, const TimeGrid& grid)
{
    if (!doc.is_object() || !doc.contains("shape") || !doc.at("shape").is_string())
        throw std::invalid_argument("level function document needs a string \"shape\" field");
    const std::string shape = doc.at("shape").get<std::string>();
    auto level = [&] {
        if (!doc.contains("level") || !doc.at("level").is_number())
            throw std::invalid_argument("level function needs a numeric \"level\"");
        return doc.at("level").get<double>();
    };
    if (shape == "constant")
        return LevelFunction::constant(grid, level());
    if (shape == "indicator_step") {
        const auto& iv = doc.at("interval");
        if (!iv.is_array() || iv.size() != 2)
            throw std::invalid_argument("indicator_step needs \"interval\": [lo, hi]");
        const double base = doc.contains("base") ? doc.at("base").get<double>() : 0.0;
        return LevelFunction::indicator_step(grid, Interval{iv[0].get<double>(), iv[1].get<double>()}, level(), base);
    }
    if (shape == "piecewise_linear") {
        const auto& bps = doc.at("breakpoints");
        if (!bps.is_array())
            throw std::invalid_argument("piecewise_linear needs \"breakpoints\": [[t, value], ...]");
        std::vector<std::pair<double, double>> pts;
        for (const auto& bp : bps) {
            if (!bp.is_array() || bp.size() != 2)
                throw std::invalid_argument("each breakpoint must be [t, value]");
            pts.emplace_back(bp[0].get<double>(), bp[1].get<double>());
        }
        return LevelFunction::piecewise_linear(grid, std::move(pts));
    }
    throw std::invalid_argument("unknown level function shape '" + shape + "'");
}

}  // namespace mshit
