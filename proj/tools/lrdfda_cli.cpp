#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "lrdfda/csv.hpp"
#include "lrdfda/errors.hpp"
#include "lrdfda/harness.hpp"

using namespace lrdfda;

namespace {

void write_panel_csv(const Panel& panel, const std::string& path) {
    CsvWriter w(path);
    w.header({"subject", "j", "T", "t", "Y"});
    for (std::size_t i = 0; i < panel.values.size(); ++i)
        for (std::size_t j = 0; j < panel.values[i].size(); ++j)
            w.raw_row({csv_cell(static_cast<int>(i + 1)), csv_cell(static_cast<int>(j + 1)),
                       csv_cell(panel.design.times[i][j]), csv_cell(panel.design.t[i][j]),
                       csv_cell(panel.values[i][j])});
}

Panel read_panel_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open panel file: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("subject,j,T,t,Y", 0) != 0)
        throw ConfigError("panel file must start with header subject,j,T,t,Y");
    std::map<int, std::vector<std::pair<std::int64_t, double>>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        int subject = 0, j = 0;
        std::int64_t big_t = 0;
        double small_t = 0, y = 0;
        if (std::sscanf(line.c_str(), "%d,%d,%ld,%lf,%lf", &subject, &j, &big_t, &small_t, &y) != 5)
            throw ConfigError("malformed panel row: " + line);
        rows[subject].push_back({big_t, y});
    }
    if (rows.empty()) throw ConfigError("panel file has no data rows");
    Panel panel;
    std::int64_t t_max = 0;
    for (const auto& [subject, data] : rows)
        for (const auto& [big_t, y] : data) t_max = std::max(t_max, big_t);
    panel.design.generator = "file";
    for (const auto& [subject, data] : rows) {
        std::vector<std::int64_t> times;
        std::vector<double> ts, ys;
        for (const auto& [big_t, y] : data) {
            times.push_back(big_t);
            ts.push_back(static_cast<double>(big_t) / static_cast<double>(t_max));
            ys.push_back(y);
        }
        panel.design.times.push_back(std::move(times));
        panel.design.t.push_back(std::move(ts));
        panel.values.push_back(std::move(ys));
    }
    panel.design.n = static_cast<int>(panel.design.times.size());
    panel.design.t_max = t_max;
    panel.design.n_min = static_cast<int>(panel.design.times.front().size());
    for (const auto& row : panel.design.times)
        panel.design.n_min = std::min(panel.design.n_min, static_cast<int>(row.size()));
    double mn = 1.0, mx = 0.0;
    mn = panel.design.min_spacing();
    mx = panel.design.max_spacing();
    panel.design.alpha_n = mn > 0 ? 1.0 / mn : 0.0;
    panel.design.beta_n = mx > 0 ? 1.0 / mx : 0.0;
    return panel;
}

int run_simulate(const std::string& config_path, const std::string& out,
                 const std::string& provenance_path, const std::string& design_path) {
    const auto ex = validate(load_config(config_path));
    const Panel panel = generate_panel(ex.model, ex.base_design, ex.noise ? &ex.lrd : nullptr,
                                       ex.noise ? &*ex.noise : nullptr, ex.cfg.seed);
    write_panel_csv(panel, out);
    if (!design_path.empty()) {
        CsvWriter w(design_path);
        w.header({"subject", "j", "T"});
        for (std::size_t i = 0; i < panel.design.times.size(); ++i)
            for (std::size_t j = 0; j < panel.design.times[i].size(); ++j)
                w.raw_row({csv_cell(static_cast<int>(i + 1)), csv_cell(static_cast<int>(j + 1)),
                           csv_cell(panel.design.times[i][j])});
    }
    if (!provenance_path.empty()) {
        nlohmann::json prov;
        prov["master_seed"] = panel.provenance.master_seed;
        prov["summary"] = panel.provenance.model_summary;
        prov["config"] = ex.cfg.raw;
        std::ofstream pf(provenance_path, std::ios::binary);
        pf << prov.dump(2) << "\n";
    }
    std::cout << "wrote " << out << " (" << panel.design.n << " subjects, T_max = "
              << panel.design.t_max << ")\n";
    return 0;
}

int run_estimate(const std::string& panel_path, int v, int k, double b, int grid_points,
                 const std::string& out) {
    const Panel panel = read_panel_csv(panel_path);
    const auto kernel = build_kernel_of_order(v, k);
    certify(kernel);
    const auto grid = default_grid(grid_points);
    const auto est = priestley_chao(panel, kernel, b, grid);
    CsvWriter w(out);
    w.header({"t", "value", "masked"});
    for (std::size_t g = 0; g < est.grid.size(); ++g)
        w.raw_row({csv_cell(est.grid[g]),
                   est.masked[g] ? "nan" : csv_cell(est.values[g]),
                   csv_cell(static_cast<int>(est.masked[g]))});
    std::cout << "wrote " << out << "\n";
    return 0;
}

int run_kernel_check(int v, int k) {
    const auto kernel = build_kernel_of_order(v, k);
    const auto rep = run_certification(kernel);
    std::cout << "kernel of order (" << v << ", " << k << "), theta = " << format_double(kernel.theta)
              << ", kappa_{v+1} = " << format_double(kernel.kappa) << "\n"
              << rep.text();
    return rep.all_pass ? 0 : 3;
}

int run_bandwidth(int n, int n_points, double d, int q, int v, int k, double c_lower) {
    const auto w = bandwidth_window(n, n_points, d, q, v, k, c_lower);
    std::cout << "b_low  = " << format_double(w.b_low) << "  (c_lower * N^-"
              << format_double(w.exponent_low) << ")\n"
              << "b_high = " << format_double(w.b_high) << "  (n^-1/(2(k-v)), strict)\n"
              << "feasible: " << (w.feasible ? "yes" : "no") << "\n"
              << "growth condition: " << w.growth_condition << "\n";
    const double beta = static_cast<double>(n_points);
    const double t_max = static_cast<double>(n_points);
    const double b = w.feasible ? w.b_low : w.b_high;
    std::cout << "at b = " << format_double(b) << ": (8) n b^{2(k-v)} = "
              << format_double(w.condition8(n, b)) << ", (9) printed = "
              << format_double(w.condition9_printed(beta, t_max, b)) << ", variant = "
              << format_double(w.condition9_variant(beta, t_max, b)) << "\n";
    return w.feasible ? 0 : 2;
}

int run_mc_study(const std::string& config_path, const std::string& kind_override,
                 const std::string& out_dir_override) {
    auto cfg = load_config(config_path);
    if (!kind_override.empty()) cfg.kind = kind_override;
    if (!out_dir_override.empty()) cfg.out_dir = out_dir_override;
    const auto ex = validate(cfg);
    const auto res = run_study(ex);
    const auto files = emit_report(res, cfg.out_dir);
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
    if (res.refused) {
        std::cout << "study refused: " << res.refusal_reason << "\n";
        return 3;
    }
    for (const auto& c : res.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " value="
                  << format_double(c.value) << " bound=" << format_double(c.bound) << "\n";
    return res.all_pass() ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"repeated time series with subordinated LRD errors: simulation, "
                 "Priestley-Chao estimation, Monte Carlo studies"};
    app.require_subcommand(1);

    std::string config_path, out = "panel.csv", provenance, design_out, panel_path, out_dir, kind;
    int v = 0, k = 2, grid_points = 201, n = 100, n_points = 10000, q = 1;
    double b = 0.1, d = 0.3, c_lower = 1.0;

    auto* sim = app.add_subcommand("simulate", "generate a panel CSV from a config");
    sim->add_option("--config", config_path, "config JSON")->required();
    sim->add_option("--out", out, "output panel CSV");
    sim->add_option("--provenance", provenance, "provenance JSON path");
    sim->add_option("--design-out", design_out, "also write the design CSV (subject,j,T)");

    auto* est = app.add_subcommand("estimate", "Priestley-Chao estimate from a panel CSV");
    est->add_option("--panel", panel_path, "panel CSV")->required();
    est->add_option("--v", v, "derivative order");
    est->add_option("--k", k, "kernel moment order");
    est->add_option("--b", b, "bandwidth")->required();
    est->add_option("--grid-points", grid_points, "evaluation grid size");
    est->add_option("--out", out, "output CSV");

    auto* kc = app.add_subcommand("kernel-check", "print the (K1)-(K6) certification");
    kc->add_option("--v", v, "derivative order");
    kc->add_option("--k", k, "kernel moment order");

    auto* bw = app.add_subcommand("bandwidth", "bandwidth window from the theory");
    bw->add_option("--n", n, "number of subjects")->required();
    bw->add_option("--n-points", n_points, "points per subject N")->required();
    bw->add_option("--d", d, "memory parameter")->required();
    bw->add_option("--q", q, "Hermite rank");
    bw->add_option("--v", v, "derivative order");
    bw->add_option("--k", k, "kernel moment order");
    bw->add_option("--c-lower", c_lower, "constant in the lower bound");

    auto* mc = app.add_subcommand("mc-study", "run a Monte Carlo study");
    mc->add_option("--config", config_path, "config JSON")->required();
    mc->add_option("--kind", kind, "bias|variance|lrd|clt (overrides config)");
    mc->add_option("--out-dir", out_dir, "output directory (overrides config)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return run_simulate(config_path, out, provenance, design_out);
        if (est->parsed()) return run_estimate(panel_path, v, k, b, grid_points, out);
        if (kc->parsed()) return run_kernel_check(v, k);
        if (bw->parsed()) return run_bandwidth(n, n_points, d, q, v, k, c_lower);
        if (mc->parsed()) return run_mc_study(config_path, kind, out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 3;
    } catch (const CertificationFailure& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
