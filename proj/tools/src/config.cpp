#include "fkpp_tools/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fkpp/errors.hpp"
#include "fkpp/grid.hpp"
#include "fkpp/test_problem.hpp"

namespace fkpp::cli {
namespace {

using nlohmann::json;

const json& section(const json& doc, const char* name) {
    if (!doc.contains(name) || !doc.at(name).is_object()) {
        throw ConfigError(std::string("config: missing section \"") + name + "\"");
    }
    return doc.at(name);
}

double number(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj.at(key).is_number()) {
        throw ConfigError(std::string("config: \"") + key + "\" must be a number");
    }
    return obj.at(key).get<double>();
}

double number_or(const json& obj, const char* key, double fallback) {
    return obj.contains(key) ? number(obj, key) : fallback;
}

std::string string_or(const json& obj, const char* key, std::string fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_string()) throw ConfigError(std::string("config: \"") + key + "\" must be a string");
    return obj.at(key).get<std::string>();
}

long long integer(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj.at(key).is_number_integer()) {
        throw ConfigError(std::string("config: \"") + key + "\" must be an integer");
    }
    return obj.at(key).get<long long>();
}

Grid1D parse_grid(const json& g) {
    const double length = number_or(g, "length", 1.0);
    if (g.contains("n")) return Grid1D(length, static_cast<int>(integer(g, "n")));
    return Grid1D::from_spacing(length, number(g, "h"));
}

TimeMesh parse_time(const json& t) {
    const double horizon = number(t, "T");
    if (t.contains("steps")) return TimeMesh(horizon, static_cast<int>(integer(t, "steps")));
    return TimeMesh::from_step(horizon, number(t, "k"));
}

CoefficientProcess parse_coefficient(const json& j, const char* role) {
    if (!j.is_object()) throw ConfigError(std::string("config: model.") + role + " must be an object");
    const Shape shape = shape_by_name(string_or(j, "shape", "constant"));
    const RandomVariableSpec amp = j.contains("amplitude") ? parse_amplitude(j.at("amplitude"))
                                                            : RandomVariableSpec::deterministic(1.0);
    std::optional<Interval> declared;
    if (j.contains("declared_bounds")) {
        const json& b = j.at("declared_bounds");
        if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number()) {
            throw ConfigError(std::string("config: model.") + role + ".declared_bounds must be [lower, upper]");
        }
        declared = Interval{b[0].get<double>(), b[1].get<double>()};
    }
    return CoefficientProcess(shape, amp, declared);
}

BoundarySpec parse_boundary_side(const json& j) {
    BoundarySpec s;
    if (!j.is_object()) throw ConfigError("config: boundary sides must be objects");
    s.kind = string_or(j, "kind", "match_initial");
    s.value = number_or(j, "value", 0.0);
    s.target = number_or(j, "target", 0.0);
    s.rate = number_or(j, "rate", 0.0);
    return s;
}

std::optional<ModelBounds> parse_quoted(const json& m) {
    if (!m.contains("quoted_bounds")) return std::nullopt;
    const json& q = m.at("quoted_bounds");
    return ModelBounds{number(q, "d1"), number(q, "d2"), number(q, "b1"), number_or(q, "a1", 0.0),
                       number(q, "a2")};
}

Model parse_custom_model(const json& m, double length) {
    const json initial = m.value("initial", json::object());
    const InitialProcess init = separable_initial(shape_by_name(string_or(initial, "shape", "constant")));
    const RandomVariableSpec init_amp = initial.contains("amplitude") ? parse_amplitude(initial.at("amplitude"))
                                                                      : RandomVariableSpec::deterministic(1.0);
    const json boundary = m.value("boundary", json::object());
    const BoundarySpec left = parse_boundary_side(boundary.value("left", json::object()));
    const BoundarySpec right = parse_boundary_side(boundary.value("right", json::object()));
    return Model{
        .name = string_or(m, "name", "custom"),
        .length = length,
        .diffusion = parse_coefficient(m.value("diffusion", json::object()), "diffusion"),
        .advection = parse_coefficient(m.value("advection", json{{"amplitude", 0.0}}), "advection"),
        .reaction = parse_coefficient(m.value("reaction", json::object()), "reaction"),
        .initial_amplitude = init_amp,
        .initial = init,
        .boundary = make_boundary(left, right, init, length),
        .quoted_bounds = parse_quoted(m),
    };
}

Sampler parse_sampler(const json& s, const Model& model, const Overrides& o, std::uint64_t seed) {
    const std::string method = string_or(s, "method", "auto");
    Sampler sampler;
    if (method == "auto") {
        sampler = default_sampler(model);
    } else if (method == "collocation") {
        sampler = Collocation{};
    } else if (method == "monte_carlo") {
        sampler = MonteCarlo{};
    } else {
        throw ConfigError("config: sampling.method must be auto, collocation or monte_carlo");
    }
    if (auto* c = std::get_if<Collocation>(&sampler)) {
        if (s.contains("nodes")) c->nodes = static_cast<int>(integer(s, "nodes"));
        if (o.samples) c->nodes = static_cast<int>(*o.samples);
        if (c->nodes < 2) throw ConfigError("config: collocation needs at least 2 nodes");
    } else {
        auto& mc = std::get<MonteCarlo>(sampler);
        if (s.contains("samples")) mc.samples = integer(s, "samples");
        if (o.samples) mc.samples = *o.samples;
        if (mc.samples < 1) throw ConfigError("config: monte carlo needs at least one sample");
        mc.seed = seed;
    }
    return sampler;
}

}  // namespace

RandomVariableSpec parse_amplitude(const json& j) {
    if (j.is_number()) return RandomVariableSpec::deterministic(j.get<double>());
    if (!j.is_object()) throw ConfigError("config: an amplitude is a number or an object with a \"law\"");
    const std::string law = string_or(j, "law", "");
    if (law == "deterministic") return RandomVariableSpec::deterministic(number(j, "value"));
    if (law == "truncated_normal") {
        return RandomVariableSpec::truncated_normal(number(j, "mu"), number(j, "sigma"), number(j, "lo"),
                                                    number(j, "hi"));
    }
    throw ConfigError("config: unknown amplitude law \"" + law + "\"");
}

json amplitude_json(const RandomVariableSpec& spec) {
    if (const auto* t = std::get_if<TruncatedNormal>(&spec.kind())) {
        return {{"law", "truncated_normal"}, {"mu", t->mu}, {"sigma", t->sigma}, {"lo", t->lo}, {"hi", t->hi}};
    }
    return {{"law", "deterministic"}, {"value", std::get<Deterministic>(spec.kind()).value}};
}

RunConfig parse_config(const json& doc, const Overrides& o) {
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    const Grid1D grid = parse_grid(section(doc, "grid"));
    const TimeMesh mesh = parse_time(section(doc, "time"));
    const json& m = section(doc, "model");
    const json sampling = doc.value("sampling", json::object());
    const json output = doc.value("output", json::object());
    if (!sampling.is_object() || !output.is_object()) throw ConfigError("config: sampling/output must be objects");

    std::optional<RandomVariableSpec> law;
    const std::string name = string_or(m, "name", "custom");
    Model model = [&] {
        if (name != kTestProblemName) return parse_custom_model(m, grid.length());
        if (grid.length() != 1.0) throw ConfigError("config: the built-in test problem lives on [0, 1]");
        law = m.contains("reaction") ? parse_amplitude(m.at("reaction")) : reference_reaction_law();
        return make_test_problem(*law);
    }();

    std::uint64_t seed = 0;
    if (sampling.contains("seed")) {
        if (!sampling.at("seed").is_number_unsigned()) throw ConfigError("config: sampling.seed must be unsigned");
        seed = sampling.at("seed").get<std::uint64_t>();
    }
    if (o.seed) seed = *o.seed;

    RunConfig rc{.model = std::move(model),
                 .scheme = SchemeConfig{grid, mesh, Collocation{}, o.allow_inadmissible, 0},
                 .builtin_law = law,
                 .out_dir = {},
                 .seed = seed,
                 .resolved = {}};
    rc.scheme.sampler = parse_sampler(sampling, rc.model, o, seed);

    if (output.contains("threads")) rc.scheme.threads = static_cast<int>(integer(output, "threads"));
    if (o.threads) rc.scheme.threads = *o.threads;
    if (rc.scheme.threads < 0) throw ConfigError("config: threads must be nonnegative");

    if (o.out_dir) {
        rc.out_dir = *o.out_dir;
    } else if (output.contains("dir")) {
        rc.out_dir = string_or(output, "dir", "");
    } else if (const char* env = std::getenv("FKPP_OUT_DIR"); env && *env) {
        rc.out_dir = env;
    } else {
        rc.out_dir = "fkpp_out";
    }

    rc.resolved = doc;
    rc.resolved["grid"] = {{"length", grid.length()}, {"n", grid.intervals()}, {"h", grid.spacing()}};
    rc.resolved["time"] = {{"T", mesh.horizon()}, {"steps", mesh.steps()}, {"k", mesh.step()}};
    if (law) rc.resolved["model"] = {{"name", name}, {"reaction", amplitude_json(*law)}};
    json s = {{"seed", seed}};
    if (const auto* c = std::get_if<Collocation>(&rc.scheme.sampler)) {
        s["method"] = "collocation";
        s["nodes"] = c->nodes;
    } else {
        s["method"] = "monte_carlo";
        s["samples"] = std::get<MonteCarlo>(rc.scheme.sampler).samples;
    }
    rc.resolved["sampling"] = s;
    rc.resolved["output"] = {{"dir", rc.out_dir}, {"threads", rc.scheme.threads}};
    rc.resolved["allow_inadmissible"] = o.allow_inadmissible;
    return rc;
}

RunConfig load_config(const std::string& path, const Overrides& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("malformed config " + path + ": " + e.what());
    }
    try {
        return parse_config(doc, overrides);
    } catch (const json::exception& e) {
        throw ConfigError("invalid config " + path + ": " + e.what());
    }
}

}  // namespace fkpp::cli
