#include "lrdfda/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "lrdfda/errors.hpp"
#include "lrdfda/hermite.hpp"

namespace lrdfda {

using nlohmann::json;

SmoothFunction parse_smooth_function(const json& spec) {
    if (spec.is_number()) return SmoothFunction::constant(spec.get<double>());
    if (spec.is_array()) return SmoothFunction::polynomial(spec.get<std::vector<double>>());
    if (!spec.is_object()) throw ConfigError("smooth function spec must be object, array or number");

    const double amplitude = spec.value("amplitude", 1.0);
    if (spec.contains("name")) {
        const std::string name = spec["name"];
        if (name == "zero") return SmoothFunction::zero();
        if (name == "constant") return SmoothFunction::constant(amplitude);
        if (name == "linear") return SmoothFunction::polynomial({0.0, amplitude});
        if (name == "sin2pi")
            return SmoothFunction::sinusoid(amplitude, 2.0 * std::numbers::pi);
        if (name == "sin2pi_plus_cos2pi")
            return SmoothFunction::sinusoid(amplitude, 2.0 * std::numbers::pi) +
                   SmoothFunction::sinusoid(amplitude, 2.0 * std::numbers::pi,
                                            std::numbers::pi / 2.0);
        if (name == "cosine_basis") return SmoothFunction::cosine_basis(spec.at("l")).scaled(amplitude);
        if (name == "sine_basis") return SmoothFunction::sine_basis(spec.at("l")).scaled(amplitude);
        throw ConfigError("unknown smooth function preset: " + name);
    }
    if (spec.contains("terms")) {
        SmoothFunction f;
        for (const auto& term : spec["terms"]) {
            const std::string kind = term.at("kind");
            if (kind == "poly") {
                f = f + SmoothFunction::polynomial(term.at("coeffs").get<std::vector<double>>());
            } else if (kind == "sin") {
                f = f + SmoothFunction::sinusoid(term.value("amplitude", 1.0), term.at("omega"),
                                                 term.value("phase", 0.0));
            } else {
                throw ConfigError("unknown smooth function term kind: " + kind);
            }
        }
        return f;
    }
    throw ConfigError("smooth function spec needs \"name\" or \"terms\"");
}

namespace {

std::vector<BasisComponent> parse_basis(const json& spec) {
    std::vector<BasisComponent> basis;
    if (spec.is_null()) return basis;
    if (spec.is_object()) {
        // shorthand: cosine family with power-law eigenvalues
        const std::string family = spec.value("family", "cosine");
        if (family != "cosine") throw ConfigError("unknown basis family: " + family);
        const int count = spec.value("count", 3);
        const double scale = spec.value("lambda_scale", 1.0);
        const double decay = spec.value("lambda_decay", 2.0);
        for (int l = 1; l <= count; ++l)
            basis.push_back({scale * std::pow(static_cast<double>(l), -decay),
                             SmoothFunction::cosine_basis(l)});
        return basis;
    }
    if (!spec.is_array()) throw ConfigError("model.basis must be an array or a family object");
    for (const auto& comp : spec) {
        BasisComponent c;
        c.lambda = comp.at("lambda");
        if (c.lambda < 0.0) throw ConfigError("basis lambda must be >= 0");
        c.phi = parse_smooth_function(comp.at("phi"));
        basis.push_back(std::move(c));
    }
    return basis;
}

} // namespace

ExperimentConfig parse_config(const json& doc) {
    ExperimentConfig cfg;
    cfg.raw = doc;
    if (doc.contains("model")) {
        const auto& m = doc["model"];
        if (m.contains("trend")) cfg.trend = parse_smooth_function(m["trend"]);
        if (m.contains("basis")) cfg.basis = parse_basis(m["basis"]);
        const std::string law = m.value("score_law", "gaussian");
        if (law == "gaussian")
            cfg.score_law = ScoreLaw::gaussian;
        else if (law == "uniform")
            cfg.score_law = ScoreLaw::uniform;
        else
            throw ConfigError("unknown score_law: " + law);
    }
    if (doc.contains("lrd")) cfg.d = doc["lrd"].value("d", cfg.d);
    if (doc.contains("subordination")) {
        const auto& s = doc["subordination"];
        cfg.transform = s.value("transform", cfg.transform);
        cfg.q = s.value("q", cfg.q);
        const json params = s.value("params", json::object());
        if (cfg.transform == "linear_combo") {
            cfg.a_fn = parse_smooth_function(params.at("a"));
            cfg.b_fn = parse_smooth_function(params.at("b"));
        } else if (cfg.transform == "exp_marginal") {
            cfg.theta_fn = params.contains("theta") ? parse_smooth_function(params["theta"])
                                                    : SmoothFunction::constant(1.0);
        }
    }
    if (doc.contains("design")) {
        const auto& d = doc["design"];
        cfg.generator = d.value("generator", cfg.generator);
        cfg.n = d.value("n", cfg.n);
        cfg.n_points = d.value("n_points", cfg.n_points);
        cfg.jitter = d.value("jitter", cfg.jitter);
        cfg.scale = d.value("scale", cfg.scale);
    }
    if (doc.contains("kernel")) {
        cfg.v = doc["kernel"].value("v", cfg.v);
        cfg.k = doc["kernel"].value("k", cfg.k);
    }
    if (doc.contains("study")) {
        const auto& s = doc["study"];
        cfg.kind = s.value("kind", cfg.kind);
        if (s.contains("b")) cfg.b = s["b"].get<double>();
        if (s.contains("b_grid")) cfg.b_grid = s["b_grid"].get<std::vector<double>>();
        if (s.contains("n_grid")) cfg.n_grid = s["n_grid"].get<std::vector<int>>();
        if (s.contains("tmax_grid")) cfg.tmax_grid = s["tmax_grid"].get<std::vector<std::int64_t>>();
        cfg.replicates = s.value("replicates", cfg.replicates);
        if (s.contains("probes")) cfg.probes = s["probes"].get<std::vector<double>>();
        cfg.seed = s.value("seed", cfg.seed);
        cfg.out_dir = s.value("out_dir", cfg.out_dir);
        cfg.c_lower = s.value("c_lower", cfg.c_lower);
        if (s.contains("thresholds")) cfg.thresholds = s["thresholds"];
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return parse_config(doc);
}

SamplingDesign build_design(const ExperimentConfig& cfg, int n, int n_points) {
    if (cfg.generator == "equidistant") return make_equidistant(n, n_points);
    if (cfg.generator == "jittered")
        return make_jittered(n, n_points, cfg.jitter, cfg.seed, cfg.scale);
    if (cfg.generator == "poisson") return make_poisson(n, n_points, cfg.seed, cfg.scale);
    throw ConfigError("unknown design generator: " + cfg.generator);
}

Experiment validate(const ExperimentConfig& cfg) {
    Experiment ex;
    ex.cfg = cfg;

    ex.model.trend = cfg.trend;
    ex.model.basis = cfg.basis;
    ex.model.score_law = cfg.score_law;
    try {
        ex.model.check_orthonormal();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    ex.lrd.d = cfg.d;
    try {
        ex.lrd.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    ex.kernel = build_kernel_of_order(cfg.v, cfg.k);
    ex.kernel_report = run_certification(ex.kernel);
    if (!ex.kernel_report.all_pass)
        throw ConfigError("kernel certification failed:\n" + ex.kernel_report.text());

    if (cfg.transform != "none") {
        if (cfg.transform == "identity")
            ex.noise = SubordinationMap::identity();
        else if (cfg.transform == "hermite2")
            ex.noise = SubordinationMap::hermite2();
        else if (cfg.transform == "linear_combo")
            ex.noise = SubordinationMap::linear_combo(cfg.a_fn, cfg.b_fn);
        else if (cfg.transform == "exp_marginal")
            ex.noise = SubordinationMap::exp_marginal(cfg.theta_fn);
        else
            throw ConfigError("unknown transform: " + cfg.transform);

        if (!t2_holds(cfg.d, cfg.q))
            throw ConfigError("(T2) violated: need 1/2 - 1/(2q) < d < 1/2, got d = " +
                              std::to_string(cfg.d) + ", q = " + std::to_string(cfg.q));
        const int detected = detect_rank(*ex.noise);
        if (detected != cfg.q)
            throw ConfigError("configured q = " + std::to_string(cfg.q) +
                              " but detected Hermite rank " + std::to_string(detected) + " for " +
                              cfg.transform);
        // finite L2 norm across t
        for (int i = 0; i <= 10; ++i) {
            const double norm2 = ex.noise->l2_norm_squared(i / 10.0);
            if (!std::isfinite(norm2) || norm2 <= 0.0)
                throw ConfigError("transform has degenerate L2 norm at t = " +
                                  std::to_string(i / 10.0));
        }
    }

    ex.base_design = build_design(cfg, cfg.n, cfg.n_points);
    const auto rep = check_design(ex.base_design, cfg.b.value_or(0.1), cfg.d, cfg.q, cfg.k);
    if (!rep.t3_ok || !rep.t4_ok)
        throw ConfigError("design fails (T3)/(T4):\n" + rep.text());
    return ex;
}

} // namespace lrdfda
