#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lrdfda/config.hpp"
#include "lrdfda/stats.hpp"

namespace lrdfda {

struct CellStat {
    double cell = 0;   // b, n or T_max depending on study kind
    double probe = 0;
    int replicates = 0;
    double mean_error = 0;  // mean of mu_hat^(v) - mu^(v)(probe)
    double se_mean = 0;
    double emp_var = 0;     // variance of mu_hat^(v) across replicates
    double se_var = 0;
    double theory_bias = 0;
    double theory_value = 0; // kind-dependent theory column
    double ratio = 0;        // kind-dependent comparison
};

struct RepRow {
    double cell = 0;
    double probe = 0;
    int replicate = 0;
    double value = 0; // mu_hat^(v)(probe)
};

struct SlopeFit {
    double probe = 0;
    double slope = 0, slope_se = 0, intercept = 0, r2 = 0;
    int points = 0;
};

struct CltProbeStat {
    double probe = 0;
    int replicates = 0;
    double ks_d = 0, ks_p = 0;
    double c_var = 0;
};

struct CrossCovStat {
    double s = 0, t = 0;
    double emp = 0, theory = 0, se = 0, z = 0;
};

struct ThresholdCheck {
    std::string name;
    double value = 0;
    double bound = 0;
    bool pass = false;
    std::string detail;
};

struct TheoryRow {
    double t = 0;
    double c_bias = 0;
    double c_var = 0;
    double i_q = 0;
};

struct StudyResult {
    std::string kind;
    nlohmann::json config_echo;
    std::vector<CellStat> cells;
    std::vector<RepRow> reps;
    std::vector<SlopeFit> slopes;
    std::vector<CltProbeStat> clt_probes;
    std::vector<CrossCovStat> cross_cov;
    std::vector<TheoryRow> theory_rows;
    BandwidthWindow window;
    bool window_valid = false;
    double condition8 = 0, condition9_printed = 0, condition9_variant = 0;
    bool refused = false;
    std::string refusal_reason;
    std::vector<ThresholdCheck> checks;

    bool all_pass() const;
};

StudyResult run_bias_study(const Experiment& ex);
StudyResult run_variance_study(const Experiment& ex); // kinds "variance" and "lrd"
StudyResult run_clt_study(const Experiment& ex);
StudyResult run_study(const Experiment& ex); // dispatch on cfg.kind + thresholds

// Pass/fail gates; keys per kind:
//  bias:     slope, slope_tol, ratio_tol (theory ratio at smallest b)
//  variance: slope, slope_tol, ratio_tol (n*var/C_var at largest n)
//  lrd:      slope, slope_tol, level_tol (vs I_q level at largest T_max)
//  clt:      ks_p_min, crosscov_z_max
void evaluate_thresholds(StudyResult& result, const nlohmann::json& thresholds);

// CSV tables + plain-text summary; returns file paths. Deterministic bytes.
std::vector<std::string> emit_report(const StudyResult& result, const std::string& dir);

// One replicate of a study cell, reproducible standalone: equals
// generate_panel(..., rep_master) followed by priestley_chao at the probes.
std::uint64_t replicate_master_seed(std::uint64_t master, std::uint64_t kind_id,
                                    std::uint64_t cell_index, int replicate);

} // namespace lrdfda
