#include <doctest.h>

#include <omp.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "lrdfda/errors.hpp"
#include "lrdfda/harness.hpp"

using namespace lrdfda;
using nlohmann::json;

namespace {

json small_bias_doc() {
    // deterministic bias run: scores and noise both off
    return json::parse(R"({
      "model": {"trend": {"name": "sin2pi"}},
      "lrd": {"d": 0.3},
      "subordination": {"transform": "none"},
      "design": {"generator": "equidistant", "n": 1, "n_points": 2000},
      "kernel": {"v": 0, "k": 2},
      "study": {"kind": "bias", "b_grid": [0.05, 0.1, 0.2], "replicates": 1,
                "probes": [0.3, 0.7], "seed": 11, "out_dir": "unused"}
    })");
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("config parsing and validation") {
    const auto cfg = parse_config(small_bias_doc());
    CHECK(cfg.kind == "bias");
    CHECK(cfg.b_grid.size() == 3);
    CHECK(cfg.probes == std::vector<double>{0.3, 0.7});
    CHECK(cfg.transform == "none");
    const auto ex = validate(cfg);
    CHECK(ex.kernel_report.all_pass);
    CHECK_FALSE(ex.noise.has_value());
    CHECK(ex.base_design.n == 1);
}

TEST_CASE("validation refuses bad configurations") {
    // (T2) violation: q = 2 needs d > 1/4
    auto doc = small_bias_doc();
    doc["subordination"] = {{"transform", "hermite2"}, {"q", 2}};
    doc["lrd"] = {{"d", 0.2}};
    CHECK_THROWS_AS(validate(parse_config(doc)), ConfigError);

    // declared rank disagrees with the detected rank
    auto doc2 = small_bias_doc();
    doc2["subordination"] = {{"transform", "hermite2"}, {"q", 1}};
    doc2["lrd"] = {{"d", 0.3}};
    CHECK_THROWS_AS(validate(parse_config(doc2)), ConfigError);

    // non-orthonormal basis
    auto doc3 = small_bias_doc();
    doc3["model"]["basis"] = json::array(
        {{{"lambda", 1.0}, {"phi", {{"name", "cosine_basis"}, {"l", 1}}}},
         {{"lambda", 0.5}, {"phi", {{"name", "cosine_basis"}, {"l", 1}}}}});
    CHECK_THROWS_AS(validate(parse_config(doc3)), ConfigError);

    // invalid d
    auto doc4 = small_bias_doc();
    doc4["lrd"] = {{"d", 0.7}};
    CHECK_THROWS_AS(validate(parse_config(doc4)), ConfigError);
}

TEST_CASE("bias study: deterministic run with expected slope") {
    const auto ex = validate(parse_config(small_bias_doc()));
    const auto res = run_bias_study(ex);
    CHECK(res.cells.size() == 6);
    for (const auto& s : res.slopes) {
        INFO("probe ", s.probe, " slope ", s.slope);
        CHECK(std::abs(s.slope - 2.0) < 0.35); // N = 2000 desk-scale check
    }
    // ratio to theory near 1 at the smallest b
    for (const auto& c : res.cells)
        if (c.cell == 0.05) CHECK(std::abs(c.ratio - 1.0) < 0.15);
}

TEST_CASE("harness replicate equals generate_panel + priestley_chao") {
    json doc = json::parse(R"({
      "model": {"trend": {"name": "sin2pi"}, "basis": {"family": "cosine", "count": 3}},
      "lrd": {"d": 0.35},
      "subordination": {"transform": "hermite2", "q": 2},
      "design": {"generator": "equidistant", "n": 4, "n_points": 500},
      "kernel": {"v": 0, "k": 2},
      "study": {"kind": "variance", "b": 0.1, "n_grid": [4], "replicates": 300,
                "probes": [0.3, 0.5], "seed": 5, "out_dir": "unused"}
    })");
    const auto ex = validate(parse_config(doc));
    const auto res = run_variance_study(ex);

    // replicate 17 of cell 0, reproduced through the public API
    const std::uint64_t rep_master = replicate_master_seed(5, 12 /* variance */, 0, 17);
    const auto panel = generate_panel(ex.model, ex.base_design, &ex.lrd, &*ex.noise, rep_master);
    const auto est = priestley_chao(panel, ex.kernel, 0.1, std::vector<double>{0.3, 0.5});
    for (const auto& r : res.reps) {
        if (r.replicate != 17) continue;
        const std::size_t g = (r.probe == 0.3) ? 0 : 1;
        CHECK(r.value == est.values[g]); // bit-identical
    }
}

TEST_CASE("reports: schema, reproducibility, thread-count independence") {
    namespace fs = std::filesystem;
    const auto tmp = fs::temp_directory_path() / "lrdfda_report_test";
    fs::remove_all(tmp);

    auto doc = small_bias_doc();
    const auto ex = validate(parse_config(doc));

    omp_set_num_threads(2);
    const auto res1 = run_bias_study(ex);
    const auto files1 = emit_report(res1, (tmp / "a").string());
    omp_set_num_threads(1);
    const auto res2 = run_bias_study(ex);
    const auto files2 = emit_report(res2, (tmp / "b").string());
    omp_set_num_threads(omp_get_num_procs());

    REQUIRE(files1.size() == files2.size());
    for (std::size_t i = 0; i < files1.size(); ++i)
        CHECK(slurp(files1[i]) == slurp(files2[i])); // byte-identical

    const std::string cells = slurp((tmp / "a" / "bias_cells.csv").string());
    CHECK(cells.starts_with("b,probe,replicates,mean_bias,se,theory_bias,ratio,slope_fit\n"));
    const std::string plot = slurp((tmp / "a" / "plot_data.csv").string());
    CHECK(plot.starts_with("kind,b,probe,replicate,estimate\n"));

    // empty study result -> header-only CSVs
    StudyResult empty;
    empty.kind = "bias";
    const auto files3 = emit_report(empty, (tmp / "c").string());
    CHECK(slurp((tmp / "c" / "bias_cells.csv").string()) ==
          "b,probe,replicates,mean_bias,se,theory_bias,ratio,slope_fit\n");
    fs::remove_all(tmp);
}

TEST_CASE("replicate seeds are pairwise distinct") {
    std::vector<std::uint64_t> seeds;
    for (int r = 0; r < 1000; ++r) seeds.push_back(replicate_master_seed(1, 11, 0, r));
    std::sort(seeds.begin(), seeds.end());
    CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
}

TEST_CASE("clt study refusals") {
    json doc = json::parse(R"({
      "model": {"trend": {"name": "sin2pi"}, "basis": {"family": "cosine", "count": 1}},
      "lrd": {"d": 0.3},
      "subordination": {"transform": "identity", "q": 1},
      "design": {"generator": "equidistant", "n": 100, "n_points": 500},
      "kernel": {"v": 2, "k": 4},
      "study": {"kind": "clt", "replicates": 10, "probes": [0.3], "seed": 1,
                "c_lower": 1.0, "out_dir": "unused"}
    })");
    // v=2 at this scale: infeasible window -> refused with the growth condition
    const auto ex = validate(parse_config(doc));
    const auto res = run_clt_study(ex);
    CHECK(res.refused);
    CHECK(res.refusal_reason.find("InfeasibleWindow") != std::string::npos);

    // degenerate limit: C_var(0.5) = 0 for the single cosine basis
    doc["kernel"] = {{"v", 0}, {"k", 2}};
    doc["study"]["probes"] = {0.5};
    doc["study"]["c_lower"] = 0.3;
    const auto ex2 = validate(parse_config(doc));
    const auto res2 = run_clt_study(ex2);
    CHECK(res2.refused);
    CHECK(res2.refusal_reason.find("DegenerateLimit") != std::string::npos);
}

TEST_CASE("bias study aborts when a probe is masked at some b") {
    auto doc = small_bias_doc();
    doc["study"]["b_grid"] = {0.05, 0.35}; // 0.3 < 0.35 would be masked
    const auto ex = validate(parse_config(doc));
    CHECK_THROWS_AS(run_bias_study(ex), BandwidthTooLarge);
}

TEST_CASE("clt cross-covariance matches the limit process for a single basis") {
    json doc = json::parse(R"({
      "model": {"trend": {"name": "sin2pi", "amplitude": 0.3},
                 "basis": [{"lambda": 1.0, "phi": {"name": "cosine_basis", "l": 1}}]},
      "lrd": {"d": 0.3},
      "subordination": {"transform": "identity", "q": 1},
      "design": {"generator": "equidistant", "n": 50, "n_points": 2048},
      "kernel": {"v": 0, "k": 2},
      "study": {"kind": "clt", "b": 0.08, "c_lower": 0.28, "replicates": 200,
                "probes": [0.3, 0.7], "seed": 3, "out_dir": "unused"}
    })");
    const auto ex = validate(parse_config(doc));
    const auto res = run_clt_study(ex);
    REQUIRE_FALSE(res.refused);
    REQUIRE(res.cross_cov.size() == 1);
    const auto& c = res.cross_cov.front();
    // limit covariance: 2 cos(0.3 pi) cos(0.7 pi)
    const double want = 2.0 * std::cos(0.3 * std::numbers::pi) * std::cos(0.7 * std::numbers::pi);
    CHECK(c.theory == doctest::Approx(want).epsilon(1e-12));
    CHECK(std::abs(c.emp - c.theory) < 3.0 * c.se);
}

TEST_CASE("lrd study rejects a non-degenerate curve model") {
    json doc = json::parse(R"({
      "model": {"basis": {"family": "cosine", "count": 1}},
      "lrd": {"d": 0.3},
      "subordination": {"transform": "identity", "q": 1},
      "design": {"generator": "equidistant", "n": 5, "n_points": 500},
      "kernel": {"v": 0, "k": 2},
      "study": {"kind": "lrd", "b": 0.1, "tmax_grid": [500, 1000], "replicates": 300,
                "probes": [0.5], "seed": 1, "out_dir": "unused"}
    })");
    const auto ex = validate(parse_config(doc));
    CHECK_THROWS_AS(run_variance_study(ex), ConfigError);
}

TEST_CASE("threshold evaluation") {
    const auto ex = validate(parse_config(small_bias_doc()));
    auto res = run_bias_study(ex);
    evaluate_thresholds(res, json{{"slope", 2.0}, {"slope_tol", 0.5}, {"ratio_tol", 0.2}});
    CHECK(!res.checks.empty());
    CHECK(res.all_pass());
    res.checks.clear();
    evaluate_thresholds(res, json{{"slope", -1.0}, {"slope_tol", 0.01}});
    CHECK_FALSE(res.all_pass());
}
