#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qpat/errors.hpp"
#include "qpat/model.hpp"
#include "qpat/phantom.hpp"
#include "qpat/sqh.hpp"

namespace qpat {

using json = nlohmann::json;

struct ProblemConfig {
    double a = -1.0;
    double b = 1.0;
    int N_coarse = 100;
    int N_fine = 400;
    PhysicalConstants constants;
};

struct InitConfig {
    double D0 = 0.02;
    double sigma0 = 0.0;
};

struct NoiseConfig {
    double eta = 0.0;
    std::uint64_t seed = 0;
};

struct PathsConfig {
    std::string data = ".";
    std::string out = ".";
};

inline json ellipse_to_json(const Ellipse& e) {
    return json{{"cx", e.cx}, {"cy", e.cy}, {"ax", e.ax}, {"ay", e.ay}, {"phi_deg", e.phi_deg}};
}

inline Ellipse ellipse_from_json(const json& j) {
    return {j.at("cx").get<double>(), j.at("cy").get<double>(), j.at("ax").get<double>(), j.at("ay").get<double>(),
            j.value("phi_deg", 0.0)};
}

inline json shape_to_json(const Shape& s) {
    json j{{"kind", to_string(s.kind)}, {"sigma", s.sigma}, {"D", s.D}, {"label", s.label}};
    switch (s.kind) {
        case ShapeKind::disk:
            j["cx"] = s.outer.cx;
            j["cy"] = s.outer.cy;
            j["r"] = s.outer.ax;
            break;
        case ShapeKind::ellipse: j["ellipse"] = ellipse_to_json(s.outer); break;
        case ShapeKind::annulus:
            j["outer"] = ellipse_to_json(s.outer);
            j["inner"] = ellipse_to_json(s.inner);
            break;
    }
    return j;
}

inline Shape shape_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const double sigma = j.at("sigma").get<double>();
    const double D = j.at("D").get<double>();
    std::string label = j.value("label", kind);
    if (kind == "disk")
        return Shape::disk(j.at("cx").get<double>(), j.at("cy").get<double>(), j.at("r").get<double>(), sigma, D,
                           std::move(label));
    if (kind == "ellipse") return Shape::ellipse(ellipse_from_json(j.at("ellipse")), sigma, D, std::move(label));
    if (kind == "annulus")
        return Shape::annulus(ellipse_from_json(j.at("outer")), ellipse_from_json(j.at("inner")), sigma, D,
                              std::move(label));
    throw ConfigError("phantom shape kind must be disk, ellipse or annulus, got '" + kind + "'");
}

inline json phantom_to_json(const PhantomSpec& p) {
    json shapes = json::array();
    for (const Shape& s : p.shapes) shapes.push_back(shape_to_json(s));
    return json{{"D_background", p.D_background}, {"sigma_background", p.sigma_background}, {"shapes", shapes}};
}

/// Everything a generate/reconstruct run needs. Build with resolve_config().
struct RunConfig {
    int case_id = 1;
    ProblemConfig problem;
    AdmissibleBox box;
    RegularizationWeights weights;
    SqhConfig sqh;
    InitConfig init;
    NoiseConfig noise;
    PathsConfig paths;
    PhantomSpec phantom;  // geometry of the exact phantom; sigma_b comes from problem

    Grid2D coarse_grid() const { return Grid2D(problem.a, problem.b, problem.N_coarse); }
    Grid2D fine_grid() const { return Grid2D(problem.a, problem.b, problem.N_fine); }

    void validate() const {
        if (case_id < 1 || case_id > 5) throw ConfigError("unknown case " + std::to_string(case_id) + " (expected 1..5)");
        if (!(problem.b > problem.a)) throw ConfigError("problem: require a < b");
        if (problem.N_coarse < 2 || problem.N_fine < 2) throw ConfigError("problem: N must be at least 2");
        if (problem.N_fine % problem.N_coarse != 0)
            throw ConfigError("problem: N_fine must be a multiple of N_coarse (nested grids)");
        problem.constants.validate();
        box.validate(problem.constants);
        weights.validate();
        sqh.validate();
        if (!box.contains(init.D0, init.sigma0)) throw ConfigError("init: (D0, sigma0) lies outside the admissible box");
        if (!(noise.eta >= 0.0)) throw ConfigError("noise.eta must be nonnegative");
        auto check_values = [&](double D, double sigma, const std::string& what) {
            if (!(D > 0.0)) throw ConfigError("phantom: D must be positive in " + what);
            if (!(sigma + problem.constants.sigma_b > 0.0))
                throw ConfigError("phantom: sigma + sigma_b must be positive in " + what);
        };
        check_values(phantom.D_background, phantom.sigma_background, "the background");
        for (const Shape& s : phantom.shapes) check_values(s.D, s.sigma, "shape '" + s.label + "'");
    }
};

namespace config_detail {

inline json case_defaults(int case_id, double eta, const json& patch) {
    const PhantomSpec ph = phantom_for_case(case_id);
    PhysicalConstants k;
    k.sigma_b = ph.sigma_b;
    if (const json* p = patch.contains("problem") ? &patch["problem"] : nullptr) {
        if (p->contains("sigma_b")) k.sigma_b = (*p)["sigma_b"].get<double>();
        if (p->contains("sigma_eps")) k.sigma_eps = (*p)["sigma_eps"].get<double>();
    }
    const AdmissibleBox box = AdmissibleBox::defaults_for(k);
    RegularizationWeights w;
    if (eta > 0.0 && (case_id == 2 || case_id == 3)) {
        w.xi1 = 0.1;
        w.gamma = 0.1;
    }
    const SqhConfig s;
    return json{
        {"case_id", case_id},
        {"problem",
         {{"a", -1.0}, {"b", 1.0}, {"N_coarse", 100}, {"N_fine", 400}, {"sigma_b", k.sigma_b}, {"Gamma", k.Gamma},
          {"c", k.c}, {"sigma_eps", k.sigma_eps}}},
        {"box", {{"D_l", box.D_l}, {"D_r", box.D_r}, {"sigma_l", box.sigma_l}, {"sigma_r", box.sigma_r}}},
        {"weights", {{"alpha", w.alpha}, {"xi1", w.xi1}, {"xi2", w.xi2}, {"gamma", w.gamma}}},
        {"sqh",
         {{"eps0", s.eps0}, {"kappa", s.kappa}, {"lambda", s.lambda}, {"zeta", s.zeta}, {"rho", s.rho},
          {"max_outer", s.max_outer}, {"max_eps_rescue", s.max_eps_rescue}, {"eps_max", s.eps_max},
          {"nD", s.search.nD}, {"nSigma", s.search.nSigma}, {"solver_tol", s.solver_tol}, {"threads", 0},
          {"search", "structured"}}},
        {"init", {{"D0", ph.D_background}, {"sigma0", 0.0}}},
        {"noise", {{"eta", 0.0}, {"seed", 0}}},
        {"paths", {{"data", "."}, {"out", "."}}},
        {"phantom", phantom_to_json(ph)},
    };
}

/// Every key of `doc` must exist in `schema`, recursively.
inline void reject_unknown_keys(const json& doc, const json& schema, const std::string& prefix) {
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (!schema.contains(it.key())) throw ConfigError("unknown config key '" + path + "'");
        const json& sub = schema[it.key()];
        if (sub.is_object()) {
            if (!it->is_object()) throw ConfigError("config key '" + path + "' must be an object");
            reject_unknown_keys(*it, sub, path);
        }
    }
}

template <typename T>
T get(const json& doc, const char* section, const char* key) {
    const json& v = section ? doc.at(section).at(key) : doc.at(key);
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config key '") + (section ? std::string(section) + "." : "") + key +
                          "' has the wrong type");
    }
}

inline SearchStrategy parse_strategy(const std::string& s) {
    if (s == "structured") return SearchStrategy::structured;
    if (s == "exhaustive") return SearchStrategy::exhaustive;
    throw ConfigError("sqh.search must be 'structured' or 'exhaustive', got '" + s + "'");
}

}  // namespace config_detail

/// Sets `path` (dot-separated) in `patch`. The value is parsed as JSON when possible, otherwise kept as a string.
inline void apply_override(json& patch, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    json* node = &patch;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        if (!node->contains(part) || !(*node)[part].is_object()) (*node)[part] = json::object();
        node = &(*node)[part];
        start = dot + 1;
    }
}

inline json load_json_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw MissingInputError("cannot open config " + path.string());
    json doc = json::parse(is, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) throw ConfigError("config " + path.string() + " is not a JSON object");
    return doc;
}

/// Case defaults, then `patch` (file contents plus command-line settings) merged on top.
inline json resolved_document(const json& patch) {
    if (!patch.is_object()) throw ConfigError("config must be a JSON object");
    int case_id = 1;
    double eta = 0.0;
    try {
        if (patch.contains("case_id")) case_id = patch["case_id"].get<int>();
        if (patch.contains("noise") && patch["noise"].contains("eta")) eta = patch["noise"]["eta"].get<double>();
    } catch (const json::exception&) {
        throw ConfigError("case_id must be an integer and noise.eta a number");
    }
    json doc = config_detail::case_defaults(case_id, eta, patch);
    config_detail::reject_unknown_keys(patch, doc, "");
    doc.merge_patch(patch);
    return doc;
}

inline RunConfig config_from_document(const json& doc) {
    using config_detail::get;
    RunConfig c;
    c.case_id = get<int>(doc, nullptr, "case_id");
    c.problem.a = get<double>(doc, "problem", "a");
    c.problem.b = get<double>(doc, "problem", "b");
    c.problem.N_coarse = get<int>(doc, "problem", "N_coarse");
    c.problem.N_fine = get<int>(doc, "problem", "N_fine");
    c.problem.constants.sigma_b = get<double>(doc, "problem", "sigma_b");
    c.problem.constants.Gamma = get<double>(doc, "problem", "Gamma");
    c.problem.constants.c = get<double>(doc, "problem", "c");
    c.problem.constants.sigma_eps = get<double>(doc, "problem", "sigma_eps");
    c.box.D_l = get<double>(doc, "box", "D_l");
    c.box.D_r = get<double>(doc, "box", "D_r");
    c.box.sigma_l = get<double>(doc, "box", "sigma_l");
    c.box.sigma_r = get<double>(doc, "box", "sigma_r");
    c.weights.alpha = get<double>(doc, "weights", "alpha");
    c.weights.xi1 = get<double>(doc, "weights", "xi1");
    c.weights.xi2 = get<double>(doc, "weights", "xi2");
    c.weights.gamma = get<double>(doc, "weights", "gamma");
    c.sqh.eps0 = get<double>(doc, "sqh", "eps0");
    c.sqh.kappa = get<double>(doc, "sqh", "kappa");
    c.sqh.lambda = get<double>(doc, "sqh", "lambda");
    c.sqh.zeta = get<double>(doc, "sqh", "zeta");
    c.sqh.rho = get<double>(doc, "sqh", "rho");
    c.sqh.max_outer = get<int>(doc, "sqh", "max_outer");
    c.sqh.max_eps_rescue = get<int>(doc, "sqh", "max_eps_rescue");
    c.sqh.eps_max = get<double>(doc, "sqh", "eps_max");
    c.sqh.solver_tol = get<double>(doc, "sqh", "solver_tol");
    c.sqh.threads = get<unsigned>(doc, "sqh", "threads");
    c.sqh.search.nD = get<int>(doc, "sqh", "nD");
    c.sqh.search.nSigma = get<int>(doc, "sqh", "nSigma");
    c.sqh.search.strategy = config_detail::parse_strategy(get<std::string>(doc, "sqh", "search"));
    c.sqh.search.box = c.box;
    c.init.D0 = get<double>(doc, "init", "D0");
    c.init.sigma0 = get<double>(doc, "init", "sigma0");
    c.noise.eta = get<double>(doc, "noise", "eta");
    c.noise.seed = get<std::uint64_t>(doc, "noise", "seed");
    c.paths.data = get<std::string>(doc, "paths", "data");
    c.paths.out = get<std::string>(doc, "paths", "out");
    try {
        const json& ph = doc.at("phantom");
        c.phantom.case_id = c.case_id;
        c.phantom.sigma_b = c.problem.constants.sigma_b;
        c.phantom.D_background = ph.at("D_background").get<double>();
        c.phantom.sigma_background = ph.at("sigma_background").get<double>();
        c.phantom.shapes.clear();
        for (const json& s : ph.at("shapes")) c.phantom.shapes.push_back(shape_from_json(s));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("phantom section is malformed: ") + e.what());
    }
    c.validate();
    return c;
}

inline RunConfig resolve_config(const json& patch) {
    try {
        return config_from_document(resolved_document(patch));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
}

/// Inverse of config_from_document; used for run snapshots.
inline json to_json(const RunConfig& c) {
    const PhysicalConstants& k = c.problem.constants;
    return json{
        {"case_id", c.case_id},
        {"problem",
         {{"a", c.problem.a}, {"b", c.problem.b}, {"N_coarse", c.problem.N_coarse}, {"N_fine", c.problem.N_fine},
          {"sigma_b", k.sigma_b}, {"Gamma", k.Gamma}, {"c", k.c}, {"sigma_eps", k.sigma_eps}}},
        {"box", {{"D_l", c.box.D_l}, {"D_r", c.box.D_r}, {"sigma_l", c.box.sigma_l}, {"sigma_r", c.box.sigma_r}}},
        {"weights",
         {{"alpha", c.weights.alpha}, {"xi1", c.weights.xi1}, {"xi2", c.weights.xi2}, {"gamma", c.weights.gamma}}},
        {"sqh",
         {{"eps0", c.sqh.eps0}, {"kappa", c.sqh.kappa}, {"lambda", c.sqh.lambda}, {"zeta", c.sqh.zeta},
          {"rho", c.sqh.rho}, {"max_outer", c.sqh.max_outer}, {"max_eps_rescue", c.sqh.max_eps_rescue},
          {"eps_max", c.sqh.eps_max}, {"nD", c.sqh.search.nD}, {"nSigma", c.sqh.search.nSigma},
          {"solver_tol", c.sqh.solver_tol}, {"threads", c.sqh.threads},
          {"search", c.sqh.search.strategy == SearchStrategy::structured ? "structured" : "exhaustive"}}},
        {"init", {{"D0", c.init.D0}, {"sigma0", c.init.sigma0}}},
        {"noise", {{"eta", c.noise.eta}, {"seed", c.noise.seed}}},
        {"paths", {{"data", c.paths.data}, {"out", c.paths.out}}},
        {"phantom", phantom_to_json(c.phantom)},
    };
}

}  // namespace qpat
