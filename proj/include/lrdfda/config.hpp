#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lrdfda/design.hpp"
#include "lrdfda/estimator.hpp"
#include "lrdfda/fda_model.hpp"

namespace lrdfda {

// One structured config document with sections
// model / lrd / subordination / design / kernel / study.
struct ExperimentConfig {
    // model
    SmoothFunction trend;
    std::vector<BasisComponent> basis;
    ScoreLaw score_law = ScoreLaw::gaussian;
    // lrd
    double d = 0.3;
    // subordination
    std::string transform = "identity"; // identity | hermite2 | linear_combo | exp_marginal | none
    SmoothFunction a_fn, b_fn, theta_fn;
    int q = 1;
    // design
    std::string generator = "equidistant"; // equidistant | jittered | poisson
    int n = 1;
    int n_points = 100;
    double jitter = 0.0;
    int scale = 10;
    // kernel
    int v = 0;
    int k = 2;
    // study
    std::string kind = "bias"; // bias | variance | lrd | clt
    std::optional<double> b;
    std::vector<double> b_grid;
    std::vector<int> n_grid;
    std::vector<std::int64_t> tmax_grid;
    int replicates = 1;
    std::vector<double> probes{0.3, 0.5, 0.7};
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    double c_lower = 1.0;
    nlohmann::json thresholds; // optional pass/fail gates, see harness
    nlohmann::json raw;        // original document, echoed into reports
};

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

// Sub-specs validated and turned into module objects. Refuses to construct
// (ConfigError) when a module check fails: kernel certification, basis
// orthonormality, (T2) for the configured (d, q), detected Hermite rank vs q,
// design (T3)/(T4).
struct Experiment {
    ExperimentConfig cfg;
    FunctionalModel model;
    LrdGaussianModel lrd;
    std::optional<SubordinationMap> noise;
    KernelOfOrder kernel;
    CertificationReport kernel_report;
    SamplingDesign base_design;
};

Experiment validate(const ExperimentConfig& cfg);

// SmoothFunction from a JSON spec: named presets or a "terms" array.
SmoothFunction parse_smooth_function(const nlohmann::json& spec);

SamplingDesign build_design(const ExperimentConfig& cfg, int n, int n_points);

} // namespace lrdfda
