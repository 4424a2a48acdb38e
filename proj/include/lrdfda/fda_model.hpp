#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrdfda/design.hpp"
#include "lrdfda/fgn.hpp"
#include "lrdfda/hermite.hpp"
#include "lrdfda/rng.hpp"
#include "lrdfda/smooth_function.hpp"

namespace lrdfda {

enum class ScoreLaw { gaussian, uniform };

struct BasisComponent {
    double lambda = 0.0;
    SmoothFunction phi;
};

// Trend mu plus K.L. basis (lambda_l, phi_l); scores xi_il are drawn with
// variance lambda_l (Gaussian by default, uniform as a sensitivity toggle).
struct FunctionalModel {
    SmoothFunction trend;
    std::vector<BasisComponent> basis;
    ScoreLaw score_law = ScoreLaw::gaussian;

    // C_var,v(t) = sum_l lambda_l (phi_l^{(v)}(t))^2
    double c_var(int v, double t) const;
    // L^2[0,1] Gram matrix of the phi_l by composite Simpson quadrature.
    std::vector<std::vector<double>> gram_matrix(int quad_points = 4097) const;
    void check_orthonormal(double tol = 1e-6) const;
};

// mu(t) + sum_l xi_l phi_l(t)
double evaluate_curve(const FunctionalModel& model, std::span<const double> scores, double t);

// Scores for subject i from the dedicated score stream.
std::vector<double> draw_scores(const FunctionalModel& model, Rng& rng);

struct PanelProvenance {
    std::uint64_t master_seed = 0;
    std::string model_summary;
};

struct Panel {
    SamplingDesign design;
    std::vector<std::vector<double>> values; // Y_ij
    PanelProvenance provenance;
};

// Y_ij = mu(t_ij) + sum_l xi_il phi_l(t_ij) + G(Z_i(T_ij), t_ij), with a fresh
// independent Z-path per subject and independent score/noise seed streams.
// Pass nullptr noise for noise-free panels. OpenMP across subjects.
Panel generate_panel(const FunctionalModel& model, const SamplingDesign& design,
                     const LrdGaussianModel* lrd, const SubordinationMap* noise,
                     std::uint64_t master_seed);

// Serial reference, identical output.
Panel generate_panel_reference(const FunctionalModel& model, const SamplingDesign& design,
                               const LrdGaussianModel* lrd, const SubordinationMap* noise,
                               std::uint64_t master_seed);

} // namespace lrdfda
