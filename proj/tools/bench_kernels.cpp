// Timings of the OpenMP kernels against their serial references.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <numbers>

#include "lrdfda/config.hpp"
#include "lrdfda/estimator.hpp"
#include "lrdfda/harness.hpp"
#include "lrdfda/fda_model.hpp"

using namespace lrdfda;

namespace {

template <typename F>
double time_ms(F&& f, int repeats = 3) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

} // namespace

int main() {
    std::printf("threads available: %d\n\n", omp_get_max_threads());

    FunctionalModel model;
    model.trend = SmoothFunction::sinusoid(1.0, 2 * std::numbers::pi);
    for (int l = 1; l <= 3; ++l)
        model.basis.push_back({std::pow(l, -2.0), SmoothFunction::cosine_basis(l)});
    LrdGaussianModel lrd{0.3};
    const auto noise = SubordinationMap::identity();

    {
        const auto design = make_equidistant(64, 4096);
        Panel sink;
        const double serial = time_ms(
            [&] { sink = generate_panel_reference(model, design, &lrd, &noise, 1); });
        const double parallel =
            time_ms([&] { sink = generate_panel(model, design, &lrd, &noise, 1); });
        std::printf("generate_panel      n=64 N=4096   serial %8.1f ms   omp %8.1f ms   x%.2f\n",
                    serial, parallel, serial / parallel);

        const auto grid = default_grid(201);
        const auto kernel = build_default_kernel(0);
        EstimateCurve est;
        const double serial_e =
            time_ms([&] { est = priestley_chao_reference(sink, kernel, 0.05, grid); });
        const double parallel_e =
            time_ms([&] { est = priestley_chao(sink, kernel, 0.05, grid); });
        std::printf("priestley_chao      201-pt grid   serial %8.1f ms   omp %8.1f ms   x%.2f\n",
                    serial_e, parallel_e, serial_e / parallel_e);
    }

    {
        // replicate loop of a small variance cell, 1 thread vs all
        nlohmann::json doc = {
            {"model", {{"trend", {{"name", "sin2pi"}}}, {"basis", {{"family", "cosine"}, {"count", 3}}}}},
            {"lrd", {{"d", 0.3}}},
            {"subordination", {{"transform", "identity"}, {"q", 1}}},
            {"design", {{"generator", "equidistant"}, {"n", 16}, {"n_points", 2048}}},
            {"kernel", {{"v", 0}, {"k", 2}}},
            {"study",
             {{"kind", "variance"}, {"b", 0.1}, {"n_grid", {16}}, {"replicates", 300},
              {"probes", {0.3, 0.5, 0.7}}, {"seed", 1}, {"out_dir", "unused"}}}};
        const auto ex = validate(parse_config(doc));
        const int max_threads = omp_get_max_threads();
        omp_set_num_threads(1);
        const double serial = time_ms([&] { run_variance_study(ex); }, 2);
        omp_set_num_threads(max_threads);
        const double parallel = time_ms([&] { run_variance_study(ex); }, 2);
        std::printf("mc replicate loop   R=300         serial %8.1f ms   omp %8.1f ms   x%.2f\n",
                    serial, parallel, serial / parallel);
    }
    return 0;
}
