#include "lrdfda/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lrdfda/csv.hpp"
#include "lrdfda/errors.hpp"

namespace lrdfda {

namespace {

enum KindId : std::uint64_t { kBias = 11, kVariance = 12, kLrd = 13, kClt = 14 };

std::uint64_t kind_id_of(const std::string& kind) {
    if (kind == "bias") return kBias;
    if (kind == "variance") return kVariance;
    if (kind == "lrd") return kLrd;
    if (kind == "clt") return kClt;
    throw ConfigError("unknown study kind: " + kind);
}

// Per-cell evaluation engine. Trend/eigenfunction values over the design and
// the kernel weights at the probes are fixed across replicates, so they are
// cached once; a replicate only draws scores, simulates noise paths and takes
// dot products over the probe windows. The arithmetic mirrors
// evaluate_curve + priestley_chao exactly (same operation order), so a
// replicate here is bit-identical to the public API path.
class CellEngine {
public:
    CellEngine(const Experiment& ex, const SamplingDesign& design, double b,
               const std::vector<double>& probes)
        : ex_(ex), design_(design), b_(b), probes_(probes) {
        const bool shared = design.all_rows_equal();
        const std::size_t rows = shared ? 1 : design.times.size();
        mu_.resize(rows);
        phi_.resize(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            const auto& ts = design.t[i];
            mu_[i].resize(ts.size());
            for (std::size_t j = 0; j < ts.size(); ++j) mu_[i][j] = ex.model.trend.eval(ts[j]);
            phi_[i].resize(ex.model.basis.size());
            for (std::size_t l = 0; l < ex.model.basis.size(); ++l) {
                phi_[i][l].resize(ts.size());
                for (std::size_t j = 0; j < ts.size(); ++j)
                    phi_[i][l][j] = ex.model.basis[l].phi.eval(ts[j]);
            }
        }
        shared_rows_ = shared;

        const auto& kv = ex.kernel.derivs[static_cast<std::size_t>(ex.kernel.v)];
        windows_.resize(probes.size());
        for (std::size_t p = 0; p < probes.size(); ++p) {
            const double t = probes[p];
            if (t < b || t > 1.0 - b)
                throw BandwidthTooLarge("study probe t = " + std::to_string(t) +
                                        " is masked at b = " + std::to_string(b));
            windows_[p].resize(design.times.size());
            for (std::size_t i = 0; i < design.times.size(); ++i) {
                const auto& ts = design.t[i];
                auto lo = std::lower_bound(ts.begin(), ts.end(), t - b);
                auto hi = std::upper_bound(lo, ts.end(), t + b);
                if (lo == hi)
                    throw BandwidthTooSmall("empty window at probe t = " + std::to_string(t));
                Window w;
                w.j_begin = static_cast<std::size_t>(lo - ts.begin());
                w.weights.resize(static_cast<std::size_t>(hi - lo));
                for (std::size_t o = 0; o < w.weights.size(); ++o) {
                    const std::size_t j = w.j_begin + o;
                    const double prev = (j == 0) ? 0.0 : ts[j - 1];
                    w.weights[o] = (ts[j] - prev) * kv.eval((ts[j] - t) / b);
                }
                windows_[p][i] = std::move(w);
            }
        }
        const double sign = (ex.kernel.v % 2 == 0) ? 1.0 : -1.0;
        scale_ = sign * std::pow(b, -(ex.kernel.v + 1)) / static_cast<double>(design.n);
    }

    // mu_hat^{(v)} at each probe for one replicate.
    std::vector<double> run(std::uint64_t rep_master) const {
        std::vector<double> acc(probes_.size(), 0.0);
        std::vector<double> y; // reused buffer: Y over one probe window
        for (int i = 0; i < design_.n; ++i) {
            const auto iu = static_cast<std::size_t>(i);
            const std::size_t row = shared_rows_ ? 0 : iu;
            Rng score_rng(seed::derive(rep_master, {seed::kScores, static_cast<std::uint64_t>(i)}));
            const auto xi = draw_scores(ex_.model, score_rng);

            GaussianPath path;
            if (ex_.noise.has_value())
                path = simulate_path(
                    ex_.lrd, static_cast<std::size_t>(design_.t_max),
                    seed::derive(rep_master, {seed::kNoise, static_cast<std::uint64_t>(i)}));

            for (std::size_t p = 0; p < probes_.size(); ++p) {
                const Window& w = windows_[p][iu];
                double subject_acc = 0.0;
                for (std::size_t o = 0; o < w.weights.size(); ++o) {
                    const std::size_t j = w.j_begin + o;
                    double yj = mu_[row][j];
                    for (std::size_t l = 0; l < xi.size(); ++l) yj += xi[l] * phi_[row][l][j];
                    if (ex_.noise.has_value())
                        yj += (*ex_.noise)(path.at_time(design_.times[iu][j]), design_.t[iu][j]);
                    subject_acc += w.weights[o] * yj;
                }
                acc[p] += subject_acc;
            }
        }
        for (double& a : acc) a *= scale_;
        return acc;
    }

private:
    struct Window {
        std::size_t j_begin = 0;
        std::vector<double> weights;
    };
    const Experiment& ex_;
    const SamplingDesign& design_;
    double b_;
    std::vector<double> probes_;
    bool shared_rows_ = false;
    std::vector<std::vector<double>> mu_;                   // [row][j]
    std::vector<std::vector<std::vector<double>>> phi_;     // [row][l][j]
    std::vector<std::vector<Window>> windows_;              // [probe][subject]
    double scale_ = 1.0;
};

// All replicates of one cell, parallel with per-replicate seeds; the result
// vector is indexed by replicate so aggregation order never depends on
// scheduling.
std::vector<std::vector<double>> run_cell(const CellEngine& engine, std::uint64_t master,
                                          std::uint64_t kind_id, std::uint64_t cell_index,
                                          int replicates) {
    std::vector<std::vector<double>> out(static_cast<std::size_t>(replicates));
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < replicates; ++r) {
        try {
            out[static_cast<std::size_t>(r)] =
                engine.run(replicate_master_seed(master, kind_id, cell_index, r));
        } catch (...) {
#pragma omp critical(lrdfda_cell_err)
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return out;
}

} // namespace

std::uint64_t replicate_master_seed(std::uint64_t master, std::uint64_t kind_id,
                                    std::uint64_t cell_index, int replicate) {
    return seed::derive(master, {kind_id, cell_index, static_cast<std::uint64_t>(replicate)});
}

namespace {

// (t, C_bias, C_var, I_q) over the standard grid for the report CSVs.
void fill_theory_rows(StudyResult& res, const Experiment& ex) {
    const TheoryConstants constants(ex.model, ex.kernel, ex.lrd, ex.noise, ex.cfg.q);
    for (double t : default_grid(201))
        res.theory_rows.push_back(
            {t, constants.c_bias(t), constants.c_var(t), constants.i_q(t)});
}

} // namespace

bool StudyResult::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return !refused;
}

StudyResult run_bias_study(const Experiment& ex) {
    const auto& cfg = ex.cfg;
    if (cfg.b_grid.empty()) throw ConfigError("bias study needs study.b_grid");
    StudyResult res;
    res.kind = "bias";
    res.config_echo = cfg.raw;

    std::vector<std::vector<double>> log_absbias(cfg.probes.size()); // per probe over b
    std::vector<double> log_b;

    for (std::size_t ci = 0; ci < cfg.b_grid.size(); ++ci) {
        const double b = cfg.b_grid[ci];
        CellEngine engine(ex, ex.base_design, b, cfg.probes);
        const auto rows = run_cell(engine, cfg.seed, kBias, ci, cfg.replicates);
        log_b.push_back(std::log(b));
        for (std::size_t p = 0; p < cfg.probes.size(); ++p) {
            const double probe = cfg.probes[p];
            const double truth = ex.model.trend.deriv(ex.kernel.v, probe);
            std::vector<double> errs(rows.size());
            for (std::size_t r = 0; r < rows.size(); ++r) {
                errs[r] = rows[r][p] - truth;
                res.reps.push_back({b, probe, static_cast<int>(r), rows[r][p]});
            }
            CellStat cell;
            cell.cell = b;
            cell.probe = probe;
            cell.replicates = static_cast<int>(rows.size());
            cell.mean_error = stats::mean(errs);
            if (errs.size() >= 2) {
                cell.emp_var = stats::variance(errs);
                cell.se_mean = std::sqrt(cell.emp_var / static_cast<double>(errs.size()));
                cell.se_var = cell.emp_var * std::sqrt(2.0 / (static_cast<double>(errs.size()) - 1.0));
            }
            cell.theory_bias = theory_bias(ex.model, ex.kernel, probe, b);
            cell.theory_value = cell.theory_bias;
            cell.ratio = (cell.theory_bias != 0.0) ? cell.mean_error / cell.theory_bias : 0.0;
            res.cells.push_back(cell);
            log_absbias[p].push_back(std::log(std::max(std::abs(cell.mean_error), 1e-300)));
        }
    }
    if (log_b.size() >= 2)
        for (std::size_t p = 0; p < cfg.probes.size(); ++p) {
            const auto fit = stats::ols(log_b, log_absbias[p]);
            res.slopes.push_back({cfg.probes[p], fit.slope, fit.slope_se, fit.intercept, fit.r2,
                                  static_cast<int>(log_b.size())});
        }
    fill_theory_rows(res, ex);
    return res;
}

StudyResult run_variance_study(const Experiment& ex) {
    const auto& cfg = ex.cfg;
    const bool lrd_mode = (cfg.kind == "lrd");
    StudyResult res;
    res.kind = lrd_mode ? "lrd" : "variance";
    res.config_echo = cfg.raw;
    if (cfg.replicates < 300)
        throw ConfigError("variance study needs study.replicates >= 300");
    const double b = cfg.b.value_or(0.1);

    if (lrd_mode) {
        if (cfg.tmax_grid.empty()) throw ConfigError("lrd study needs study.tmax_grid");
        for (const auto& comp : ex.model.basis)
            if (comp.lambda != 0.0)
                throw ConfigError("lrd study isolates the noise term; set all lambda_l = 0");
        if (!ex.noise.has_value()) throw ConfigError("lrd study needs a noise transform");
    } else if (cfg.n_grid.empty()) {
        throw ConfigError("variance study needs study.n_grid");
    }

    TheoryConstants constants(ex.model, ex.kernel, ex.lrd,
                              ex.noise, cfg.q);

    const std::size_t n_cells = lrd_mode ? cfg.tmax_grid.size() : cfg.n_grid.size();
    std::vector<std::vector<double>> log_var(cfg.probes.size());
    std::vector<double> log_cell;

    for (std::size_t ci = 0; ci < n_cells; ++ci) {
        const int cell_n = lrd_mode ? cfg.n : cfg.n_grid[ci];
        const int cell_points = lrd_mode ? static_cast<int>(cfg.tmax_grid[ci]) : cfg.n_points;
        const double cell_value = lrd_mode ? static_cast<double>(cfg.tmax_grid[ci])
                                           : static_cast<double>(cell_n);
        const SamplingDesign design = build_design(cfg, cell_n, cell_points);
        CellEngine engine(ex, design, b, cfg.probes);
        const auto rows =
            run_cell(engine, cfg.seed, lrd_mode ? kLrd : kVariance, ci, cfg.replicates);
        log_cell.push_back(std::log(cell_value));
        const double t_max = static_cast<double>(design.t_max);
        for (std::size_t p = 0; p < cfg.probes.size(); ++p) {
            const double probe = cfg.probes[p];
            std::vector<double> vals(rows.size());
            for (std::size_t r = 0; r < rows.size(); ++r) {
                vals[r] = rows[r][p];
                res.reps.push_back({cell_value, probe, static_cast<int>(r), rows[r][p]});
            }
            CellStat cell;
            cell.cell = cell_value;
            cell.probe = probe;
            cell.replicates = static_cast<int>(rows.size());
            cell.mean_error = stats::mean(vals) - ex.model.trend.deriv(ex.kernel.v, probe);
            cell.emp_var = stats::variance(vals);
            cell.se_mean = std::sqrt(cell.emp_var / static_cast<double>(vals.size()));
            cell.se_var = cell.emp_var * std::sqrt(2.0 / (static_cast<double>(vals.size()) - 1.0));
            const auto tv = theory_variance(constants, probe, cell_n, b, t_max);
            if (lrd_mode) {
                // level comparison: n * var vs b^{-2v} (T_max b)^{(2d-1)q} I_q(t)
                cell.theory_value = tv.lrd_term * static_cast<double>(cell_n);
                cell.ratio = cell.emp_var * static_cast<double>(cell_n) / cell.theory_value;
                log_var[p].push_back(std::log(cell.emp_var * static_cast<double>(cell_n)));
            } else {
                cell.theory_value = tv.leading;
                cell.ratio = cell.emp_var * static_cast<double>(cell_n) / constants.c_var(probe);
                log_var[p].push_back(std::log(cell.emp_var));
            }
            res.cells.push_back(cell);
        }
    }
    if (log_cell.size() >= 2)
        for (std::size_t p = 0; p < cfg.probes.size(); ++p) {
            const auto fit = stats::ols(log_cell, log_var[p]);
            res.slopes.push_back({cfg.probes[p], fit.slope, fit.slope_se, fit.intercept, fit.r2,
                                  static_cast<int>(log_cell.size())});
        }
    fill_theory_rows(res, ex);
    return res;
}

StudyResult run_clt_study(const Experiment& ex) {
    const auto& cfg = ex.cfg;
    StudyResult res;
    res.kind = "clt";
    res.config_echo = cfg.raw;

    res.window = bandwidth_window(cfg.n, cfg.n_points, cfg.d, cfg.q, cfg.v, cfg.k, cfg.c_lower);
    res.window_valid = true;
    if (!res.window.feasible) {
        res.refused = true;
        res.refusal_reason = "InfeasibleWindow: b_low = " + format_double(res.window.b_low) +
                             " >= b_high = " + format_double(res.window.b_high) + "; " +
                             res.window.growth_condition;
        return res;
    }
    const double b = cfg.b.value_or(res.window.b_low);
    if (b < res.window.b_low || b >= res.window.b_high) {
        res.refused = true;
        res.refusal_reason = "study.b = " + format_double(b) + " outside the window [" +
                             format_double(res.window.b_low) + ", " +
                             format_double(res.window.b_high) + ")";
        return res;
    }

    TheoryConstants constants(ex.model, ex.kernel, ex.lrd, ex.noise, cfg.q);
    for (double probe : cfg.probes) {
        if (constants.c_var(probe) < 1e-12) {
            res.refused = true;
            res.refusal_reason = "DegenerateLimit: C_var,v(" + format_double(probe) +
                                 ") = 0; the limit law has zero variance";
            return res;
        }
    }

    res.condition8 = res.window.condition8(cfg.n, b);
    res.condition9_printed =
        res.window.condition9_printed(ex.base_design.beta_n,
                                      static_cast<double>(ex.base_design.t_max), b);
    res.condition9_variant =
        res.window.condition9_variant(ex.base_design.beta_n,
                                      static_cast<double>(ex.base_design.t_max), b);

    CellEngine engine(ex, ex.base_design, b, cfg.probes);
    const auto rows = run_cell(engine, cfg.seed, kClt, 0, cfg.replicates);

    const double sqrt_n = std::sqrt(static_cast<double>(cfg.n));
    std::vector<std::vector<double>> scaled_err(cfg.probes.size()); // sqrt(n)(mu_hat - mu)
    for (std::size_t p = 0; p < cfg.probes.size(); ++p) {
        const double probe = cfg.probes[p];
        const double truth = ex.model.trend.deriv(ex.kernel.v, probe);
        const double c_var = constants.c_var(probe);
        const double sd = std::sqrt(c_var);
        std::vector<double> standardized(rows.size());
        scaled_err[p].resize(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const double e = sqrt_n * (rows[r][p] - truth);
            scaled_err[p][r] = e;
            standardized[r] = e / sd;
            res.reps.push_back({b, probe, static_cast<int>(r), rows[r][p]});
        }
        const auto ks = stats::ks_test_normal(standardized);
        res.clt_probes.push_back(
            {probe, static_cast<int>(rows.size()), ks.d, ks.p_value, c_var});

        CellStat cell;
        cell.cell = b;
        cell.probe = probe;
        cell.replicates = static_cast<int>(rows.size());
        cell.mean_error = stats::mean(scaled_err[p]) / sqrt_n;
        cell.emp_var = stats::variance(scaled_err[p]); // variance of sqrt(n)-scaled error
        cell.se_mean = std::sqrt(cell.emp_var / static_cast<double>(rows.size())) / sqrt_n;
        cell.se_var = cell.emp_var * std::sqrt(2.0 / (static_cast<double>(rows.size()) - 1.0));
        cell.theory_value = c_var;
        cell.ratio = cell.emp_var / c_var;
        res.cells.push_back(cell);
    }

    // limit-process covariance across probe pairs
    for (std::size_t pa = 0; pa < cfg.probes.size(); ++pa)
        for (std::size_t pb = pa + 1; pb < cfg.probes.size(); ++pb) {
            CrossCovStat cs;
            cs.s = cfg.probes[pa];
            cs.t = cfg.probes[pb];
            cs.emp = stats::covariance(scaled_err[pa], scaled_err[pb]);
            double theory = 0.0;
            for (const auto& comp : ex.model.basis)
                theory += comp.lambda * comp.phi.deriv(ex.kernel.v, cs.s) *
                          comp.phi.deriv(ex.kernel.v, cs.t);
            cs.theory = theory;
            cs.se = std::sqrt((constants.c_var(cs.s) * constants.c_var(cs.t) + theory * theory) /
                              static_cast<double>(rows.size()));
            cs.z = (cs.emp - cs.theory) / cs.se;
            res.cross_cov.push_back(cs);
        }
    fill_theory_rows(res, ex);
    return res;
}

StudyResult run_study(const Experiment& ex) {
    StudyResult res;
    const auto kind = ex.cfg.kind;
    kind_id_of(kind); // validates
    if (kind == "bias")
        res = run_bias_study(ex);
    else if (kind == "variance" || kind == "lrd")
        res = run_variance_study(ex);
    else
        res = run_clt_study(ex);
    if (!ex.cfg.thresholds.is_null() && !res.refused)
        evaluate_thresholds(res, ex.cfg.thresholds);
    return res;
}

void evaluate_thresholds(StudyResult& res, const nlohmann::json& th) {
    if (th.is_null() || th.empty()) return;
    auto add = [&res](const std::string& name, double value, double bound, bool pass,
                      std::string detail = "") {
        res.checks.push_back({name, value, bound, pass, std::move(detail)});
    };

    if (res.kind == "bias" || res.kind == "variance" || res.kind == "lrd") {
        if (th.contains("slope")) {
            const double target = th["slope"].get<double>();
            const double tol = th.value("slope_tol", 0.2);
            for (const auto& s : res.slopes)
                add("slope@t=" + format_double(s.probe), s.slope, tol,
                    std::abs(s.slope - target) <= tol,
                    "target " + format_double(target) + " +- " + format_double(tol));
        }
        if (th.contains("ratio_tol") && res.kind == "bias") {
            // theory ratio at the smallest b
            const double tol = th["ratio_tol"].get<double>();
            double b_min = res.cells.front().cell;
            for (const auto& c : res.cells) b_min = std::min(b_min, c.cell);
            for (const auto& c : res.cells)
                if (c.cell == b_min)
                    add("bias_ratio@t=" + format_double(c.probe), c.ratio, tol,
                        std::abs(c.ratio - 1.0) <= tol, "b = " + format_double(b_min));
        }
        if (th.contains("ratio_tol") && res.kind == "variance") {
            const double tol = th["ratio_tol"].get<double>();
            double n_max = res.cells.front().cell;
            for (const auto& c : res.cells) n_max = std::max(n_max, c.cell);
            for (const auto& c : res.cells)
                if (c.cell == n_max)
                    add("nvar_ratio@t=" + format_double(c.probe), c.ratio, tol,
                        std::abs(c.ratio - 1.0) <= tol, "n = " + format_double(n_max));
        }
        if (th.contains("level_tol") && res.kind == "lrd") {
            const double tol = th["level_tol"].get<double>();
            double t_max = res.cells.front().cell;
            for (const auto& c : res.cells) t_max = std::max(t_max, c.cell);
            for (const auto& c : res.cells)
                if (c.cell == t_max)
                    add("lrd_level@t=" + format_double(c.probe), c.ratio, tol,
                        std::abs(c.ratio - 1.0) <= tol, "T_max = " + format_double(t_max));
        }
    } else if (res.kind == "clt") {
        if (th.contains("ks_p_min")) {
            const double p_min = th["ks_p_min"].get<double>();
            for (const auto& s : res.clt_probes)
                add("ks_p@t=" + format_double(s.probe), s.ks_p, p_min, s.ks_p > p_min);
        }
        if (th.contains("crosscov_z_max")) {
            const double z_max = th["crosscov_z_max"].get<double>();
            for (const auto& c : res.cross_cov)
                add("crosscov_z@(" + format_double(c.s) + "," + format_double(c.t) + ")",
                    std::abs(c.z), z_max, std::abs(c.z) <= z_max);
        }
    }
}

namespace {

std::string cell_column_name(const std::string& kind) {
    if (kind == "bias" || kind == "clt") return "b";
    if (kind == "variance") return "n";
    return "t_max";
}

const SlopeFit* slope_for(const StudyResult& res, double probe) {
    for (const auto& s : res.slopes)
        if (s.probe == probe) return &s;
    return nullptr;
}

} // namespace

std::vector<std::string> emit_report(const StudyResult& res, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::vector<std::string> files;

    const std::string cell_col = cell_column_name(res.kind);
    {
        CsvWriter w(dir + "/" + res.kind + "_cells.csv");
        if (res.kind == "bias")
            w.header({cell_col, "probe", "replicates", "mean_bias", "se", "theory_bias", "ratio",
                      "slope_fit"});
        else if (res.kind == "variance")
            w.header({cell_col, "probe", "replicates", "emp_var", "se_var", "theory_leading",
                      "ratio", "slope_fit"});
        else if (res.kind == "lrd")
            w.header({cell_col, "probe", "replicates", "emp_var", "se_var", "n_var",
                      "theory_level", "ratio", "slope_fit"});
        else
            w.header({cell_col, "probe", "replicates", "scaled_var", "se_var", "c_var", "ratio"});
        for (const auto& c : res.cells) {
            const SlopeFit* s = slope_for(res, c.probe);
            const std::string slope_cell = s ? format_double(s->slope) : "";
            if (res.kind == "bias")
                w.raw_row({csv_cell(c.cell), csv_cell(c.probe), csv_cell(c.replicates),
                           csv_cell(c.mean_error), csv_cell(c.se_mean), csv_cell(c.theory_bias),
                           csv_cell(c.ratio), slope_cell});
            else if (res.kind == "variance")
                w.raw_row({csv_cell(c.cell), csv_cell(c.probe), csv_cell(c.replicates),
                           csv_cell(c.emp_var), csv_cell(c.se_var), csv_cell(c.theory_value),
                           csv_cell(c.ratio), slope_cell});
            else if (res.kind == "lrd")
                w.raw_row({csv_cell(c.cell), csv_cell(c.probe), csv_cell(c.replicates),
                           csv_cell(c.emp_var), csv_cell(c.se_var),
                           csv_cell(c.ratio * c.theory_value), // n * var
                           csv_cell(c.theory_value), csv_cell(c.ratio), slope_cell});
            else
                w.raw_row({csv_cell(c.cell), csv_cell(c.probe), csv_cell(c.replicates),
                           csv_cell(c.emp_var), csv_cell(c.se_var), csv_cell(c.theory_value),
                           csv_cell(c.ratio)});
        }
        files.push_back(w.path());
    }
    {
        CsvWriter w(dir + "/" + res.kind + "_slopes.csv");
        w.header({"probe", "slope", "slope_se", "intercept", "r2", "points"});
        for (const auto& s : res.slopes)
            w.raw_row({csv_cell(s.probe), csv_cell(s.slope), csv_cell(s.slope_se),
                       csv_cell(s.intercept), csv_cell(s.r2), csv_cell(s.points)});
        files.push_back(w.path());
    }
    if (res.kind == "clt") {
        CsvWriter w(dir + "/clt_stats.csv");
        w.header({"probe", "replicates", "ks_d", "ks_p", "c_var"});
        for (const auto& s : res.clt_probes)
            w.raw_row({csv_cell(s.probe), csv_cell(s.replicates), csv_cell(s.ks_d),
                       csv_cell(s.ks_p), csv_cell(s.c_var)});
        files.push_back(w.path());
        CsvWriter wc(dir + "/clt_crosscov.csv");
        wc.header({"s", "t", "emp_cov", "theory_cov", "se", "z"});
        for (const auto& c : res.cross_cov)
            wc.raw_row({csv_cell(c.s), csv_cell(c.t), csv_cell(c.emp), csv_cell(c.theory),
                        csv_cell(c.se), csv_cell(c.z)});
        files.push_back(wc.path());
    }
    if (!res.theory_rows.empty()) {
        CsvWriter w(dir + "/theory.csv");
        w.header({"t", "c_bias", "c_var", "i_q"});
        for (const auto& r : res.theory_rows)
            w.raw_row({csv_cell(r.t), csv_cell(r.c_bias), csv_cell(r.c_var), csv_cell(r.i_q)});
        files.push_back(w.path());
    }
    {
        CsvWriter w(dir + "/plot_data.csv");
        w.header({"kind", cell_col, "probe", "replicate", "estimate"});
        for (const auto& r : res.reps)
            w.raw_row({res.kind, csv_cell(r.cell), csv_cell(r.probe), csv_cell(r.replicate),
                       csv_cell(r.value)});
        files.push_back(w.path());
    }
    {
        const std::string path = dir + "/summary.txt";
        std::ofstream out(path, std::ios::binary);
        out << "study: " << res.kind << "\n";
        if (res.refused) {
            out << "REFUSED: " << res.refusal_reason << "\n";
        } else {
            if (res.window_valid) {
                out << "bandwidth window: [" << format_double(res.window.b_low) << ", "
                    << format_double(res.window.b_high) << ") feasible="
                    << (res.window.feasible ? "yes" : "no") << " " << res.window.growth_condition
                    << "\n";
                out << "condition (8) n b^{2(k-v)} = " << format_double(res.condition8) << "\n";
                out << "condition (9) printed exponent = " << format_double(res.condition9_printed)
                    << ", bias/variance-section exponent variant = "
                    << format_double(res.condition9_variant) << "\n";
            }
            for (const auto& s : res.slopes)
                out << "slope t=" << format_double(s.probe) << ": " << format_double(s.slope)
                    << " (se " << format_double(s.slope_se) << ", r2 " << format_double(s.r2)
                    << ")\n";
            for (const auto& s : res.clt_probes)
                out << "KS t=" << format_double(s.probe) << ": D=" << format_double(s.ks_d)
                    << " p=" << format_double(s.ks_p) << "\n";
        }
        for (const auto& c : res.checks)
            out << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << format_double(c.value)
                << " bound=" << format_double(c.bound)
                << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
        out << (res.all_pass() ? "RESULT: pass" : "RESULT: fail") << "\n";
        files.push_back(path);
    }
    return files;
}

} // namespace lrdfda
