#pragma once

// Experiment configuration: JSON ingestion with strict key checking.
// Unknown keys are rejected so a typo'd config never silently runs with
// defaults.

#include <json.hpp>

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixlap/shapes.hpp"

namespace mixlap {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string experiment;
    double s = 0.25;
    double h = 1.0 / 64;
    double local_scale = 1.0;
    double nonlocal_scale = 1.0;
    double tolerance = 1e-8;
    int max_iterations = 200;
    double slack = 0.02;
    int threads = 1;
    unsigned seed = 20240811u;
    bool plot_data = false;

    std::vector<ShapeSpec> domains;
    std::vector<double> aspects;        // fk-sweep ellipse family
    std::vector<double> deltas;         // superlevel / counterexample sweeps
    std::vector<double> amplitudes;     // stability perturbation amplitudes
    std::vector<double> scale_factors;  // scaling experiment t values
    int wave_k = 2;                     // stability perturbation mode
    int t_levels = 64;                  // level-profile grid
    int boundary_samples = 256;         // hopf trace resolution
    int arc_vertices = 2048;            // counterexample polygonization

    /// s >= 1/2 runs are outside the regime the consistency analysis
    /// covers; rows are labeled rather than refused.
    bool extrapolation() const { return nonlocal_scale > 0.0 && s >= 0.5; }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                                const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
}

inline Vec2 parse_vec2(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(where + ": expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace detail

inline ShapeSpec parse_shape(const nlohmann::json& j) {
    using nlohmann::json;
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("shape: expected an object with a \"kind\" key");
    const std::string kind = j.at("kind").get<std::string>();
    try {
        if (kind == "interval") {
            detail::reject_unknown_keys(j, {"kind", "a", "b"}, "interval shape");
            return ShapeSpec::interval(j.at("a").get<double>(), j.at("b").get<double>());
        }
        if (kind == "interval-union") {
            detail::reject_unknown_keys(j, {"kind", "intervals"}, "interval-union shape");
            std::vector<std::pair<double, double>> parts;
            for (const auto& p : j.at("intervals"))
                parts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
            return ShapeSpec::interval_union(std::move(parts));
        }
        if (kind == "disk") {
            detail::reject_unknown_keys(j, {"kind", "center", "radius"}, "disk shape");
            Vec2 c = j.contains("center") ? detail::parse_vec2(j["center"], "disk center") : Vec2{};
            return ShapeSpec::disk(c, j.at("radius").get<double>());
        }
        if (kind == "ellipse") {
            detail::reject_unknown_keys(j, {"kind", "center", "a", "b"}, "ellipse shape");
            Vec2 c = j.contains("center") ? detail::parse_vec2(j["center"], "ellipse center") : Vec2{};
            return ShapeSpec::ellipse(j.at("a").get<double>(), j.at("b").get<double>(), c);
        }
        if (kind == "rectangle") {
            detail::reject_unknown_keys(j, {"kind", "center", "width", "height"}, "rectangle shape");
            Vec2 c = j.contains("center") ? detail::parse_vec2(j["center"], "rectangle center") : Vec2{};
            return ShapeSpec::rectangle(j.at("width").get<double>(), j.at("height").get<double>(), c);
        }
        if (kind == "stadium") {
            detail::reject_unknown_keys(j, {"kind", "center", "length", "radius"}, "stadium shape");
            Vec2 c = j.contains("center") ? detail::parse_vec2(j["center"], "stadium center") : Vec2{};
            return ShapeSpec::stadium(j.at("length").get<double>(), j.at("radius").get<double>(), c);
        }
        if (kind == "polygon") {
            detail::reject_unknown_keys(j, {"kind", "vertices"}, "polygon shape");
            std::vector<Vec2> v;
            for (const auto& p : j.at("vertices")) v.push_back(detail::parse_vec2(p, "polygon vertex"));
            return ShapeSpec::simple_polygon(std::move(v));
        }
        if (kind == "perturbed-disk") {
            detail::reject_unknown_keys(j, {"kind", "center", "amplitude", "mode"},
                                        "perturbed-disk shape");
            Vec2 c = j.contains("center") ? detail::parse_vec2(j["center"], "perturbed-disk center")
                                          : Vec2{};
            return ShapeSpec::perturbed_disk(j.at("amplitude").get<double>(),
                                             j.at("mode").get<int>(), 1024, c);
        }
        if (kind == "radial") {
            detail::reject_unknown_keys(j, {"kind", "center", "samples"}, "radial shape");
            Vec2 c = j.contains("center") ? detail::parse_vec2(j["center"], "radial center") : Vec2{};
            return ShapeSpec::radial_body(j.at("samples").get<std::vector<double>>(), c);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("shape \"") + kind + "\": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("shape \"") + kind + "\": " + e.what());
    }
    throw ConfigError("unknown shape kind \"" + kind + "\"");
}

/// Parse and validate a config for the given experiment. Every experiment
/// shares the solver keys; list-valued keys are whitelisted per experiment.
inline ExperimentConfig parse_config(const nlohmann::json& j, const std::string& experiment) {
    using nlohmann::json;
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");

    std::set<std::string> allowed = {"experiment", "s",          "h",       "local_scale",
                                     "nonlocal_scale", "tolerance", "max_iterations",
                                     "slack",      "threads",    "seed",    "plot_data"};
    if (experiment == "eig" || experiment == "hopf" || experiment == "level-profile" ||
        experiment == "fk-sweep" || experiment == "superlevel")
        allowed.insert("domains");
    if (experiment == "fk-sweep") allowed.insert("aspects");
    if (experiment == "stability") {
        allowed.insert("amplitudes");
        allowed.insert("wave_k");
    }
    if (experiment == "superlevel") allowed.insert("deltas");
    if (experiment == "level-profile") allowed.insert("t_levels");
    if (experiment == "scaling") allowed.insert("scale_factors");
    if (experiment == "counterexample") {
        allowed.insert("deltas");
        allowed.insert("arc_vertices");
    }
    if (experiment == "hopf") allowed.insert("boundary_samples");
    detail::reject_unknown_keys(j, allowed, "config");

    ExperimentConfig cfg;
    cfg.experiment = experiment;
    try {
        if (j.contains("experiment") && j["experiment"].get<std::string>() != experiment)
            throw ConfigError("config: experiment key \"" +
                              j["experiment"].get<std::string>() +
                              "\" does not match subcommand \"" + experiment + "\"");
        if (j.contains("s")) cfg.s = j["s"].get<double>();
        if (j.contains("h")) cfg.h = j["h"].get<double>();
        if (j.contains("local_scale")) cfg.local_scale = j["local_scale"].get<double>();
        if (j.contains("nonlocal_scale")) cfg.nonlocal_scale = j["nonlocal_scale"].get<double>();
        if (j.contains("tolerance")) cfg.tolerance = j["tolerance"].get<double>();
        if (j.contains("max_iterations")) cfg.max_iterations = j["max_iterations"].get<int>();
        if (j.contains("slack")) cfg.slack = j["slack"].get<double>();
        if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<unsigned>();
        if (j.contains("plot_data")) cfg.plot_data = j["plot_data"].get<bool>();
        if (j.contains("domains"))
            for (const auto& d : j["domains"]) cfg.domains.push_back(parse_shape(d));
        if (j.contains("aspects")) cfg.aspects = j["aspects"].get<std::vector<double>>();
        if (j.contains("deltas")) cfg.deltas = j["deltas"].get<std::vector<double>>();
        if (j.contains("amplitudes")) cfg.amplitudes = j["amplitudes"].get<std::vector<double>>();
        if (j.contains("scale_factors"))
            cfg.scale_factors = j["scale_factors"].get<std::vector<double>>();
        if (j.contains("wave_k")) cfg.wave_k = j["wave_k"].get<int>();
        if (j.contains("t_levels")) cfg.t_levels = j["t_levels"].get<int>();
        if (j.contains("boundary_samples")) cfg.boundary_samples = j["boundary_samples"].get<int>();
        if (j.contains("arc_vertices")) cfg.arc_vertices = j["arc_vertices"].get<int>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    if (!(cfg.s > 0.0 && cfg.s < 1.0)) throw ConfigError("config: need s in (0,1)");
    if (!(cfg.h > 0.0)) throw ConfigError("config: need h > 0");
    if (cfg.local_scale < 0.0 || cfg.nonlocal_scale < 0.0)
        throw ConfigError("config: scales must be >= 0");
    if (!(cfg.tolerance > 0.0)) throw ConfigError("config: need tolerance > 0");
    if (cfg.max_iterations < 1) throw ConfigError("config: need max_iterations >= 1");
    if (cfg.threads < 1) throw ConfigError("config: need threads >= 1");
    if (cfg.t_levels < 4) throw ConfigError("config: need t_levels >= 4");
    if (cfg.boundary_samples < 4) throw ConfigError("config: need boundary_samples >= 4");
    if (cfg.arc_vertices < 16) throw ConfigError("config: need arc_vertices >= 16");
    return cfg;
}

}  // namespace mixlap
