#include "lrdfda/fda_model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lrdfda {

double FunctionalModel::c_var(int v, double t) const {
    double acc = 0.0;
    for (const auto& comp : basis) {
        const double p = comp.phi.deriv(v, t);
        acc += comp.lambda * p * p;
    }
    return acc;
}

std::vector<std::vector<double>> FunctionalModel::gram_matrix(int quad_points) const {
    if (quad_points < 3 || quad_points % 2 == 0)
        throw std::invalid_argument("gram_matrix: quad_points must be odd and >= 3");
    const std::size_t l = basis.size();
    std::vector<std::vector<double>> g(l, std::vector<double>(l, 0.0));
    const double h = 1.0 / (quad_points - 1);
    for (int p = 0; p < quad_points; ++p) {
        const double t = p * h;
        double w = (p == 0 || p == quad_points - 1) ? 1.0 : (p % 2 == 1 ? 4.0 : 2.0);
        w *= h / 3.0;
        std::vector<double> vals(l);
        for (std::size_t a = 0; a < l; ++a) vals[a] = basis[a].phi.eval(t);
        for (std::size_t a = 0; a < l; ++a)
            for (std::size_t b = a; b < l; ++b) g[a][b] += w * vals[a] * vals[b];
    }
    for (std::size_t a = 0; a < l; ++a)
        for (std::size_t b = 0; b < a; ++b) g[a][b] = g[b][a];
    return g;
}

void FunctionalModel::check_orthonormal(double tol) const {
    const auto g = gram_matrix();
    for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = 0; b < g.size(); ++b) {
            const double want = (a == b) ? 1.0 : 0.0;
            if (std::abs(g[a][b] - want) > tol)
                throw std::invalid_argument(
                    "FunctionalModel: basis not orthonormal in L^2[0,1]: <phi_" +
                    std::to_string(a + 1) + ", phi_" + std::to_string(b + 1) + "> = " +
                    std::to_string(g[a][b]));
        }
}

double evaluate_curve(const FunctionalModel& model, std::span<const double> scores, double t) {
    if (scores.size() != model.basis.size())
        throw std::invalid_argument("evaluate_curve: score length must match basis length");
    double acc = model.trend.eval(t);
    for (std::size_t l = 0; l < scores.size(); ++l)
        acc += scores[l] * model.basis[l].phi.eval(t);
    return acc;
}

std::vector<double> draw_scores(const FunctionalModel& model, Rng& rng) {
    std::vector<double> xi(model.basis.size());
    for (std::size_t l = 0; l < xi.size(); ++l) {
        const double sd = std::sqrt(model.basis[l].lambda);
        if (model.score_law == ScoreLaw::gaussian) {
            xi[l] = sd * rng.normal();
        } else {
            // uniform with matching variance lambda_l
            const double half = sd * std::sqrt(3.0);
            xi[l] = rng.uniform(-half, half);
        }
    }
    return xi;
}

namespace {

void fill_subject(const FunctionalModel& model, const SamplingDesign& design,
                  const LrdGaussianModel* lrd, const SubordinationMap* noise,
                  std::uint64_t master_seed, int i, std::vector<double>& out) {
    const auto iu = static_cast<std::size_t>(i);
    const auto& times = design.times[iu];
    const auto& ts = design.t[iu];
    out.assign(times.size(), 0.0);

    Rng score_rng(seed::derive(master_seed, {seed::kScores, static_cast<std::uint64_t>(i)}));
    const auto xi = draw_scores(model, score_rng);
    for (std::size_t j = 0; j < times.size(); ++j)
        out[j] = evaluate_curve(model, xi, ts[j]);

    if (noise != nullptr) {
        if (lrd == nullptr)
            throw std::invalid_argument("generate_panel: noise map given without an LRD model");
        const auto path = simulate_path(
            *lrd, static_cast<std::size_t>(design.t_max),
            seed::derive(master_seed, {seed::kNoise, static_cast<std::uint64_t>(i)}));
        for (std::size_t j = 0; j < times.size(); ++j)
            out[j] += (*noise)(path.at_time(times[j]), ts[j]);
    }
}

std::string summarize(const FunctionalModel& model, const LrdGaussianModel* lrd,
                      const SubordinationMap* noise) {
    std::ostringstream os;
    os << "basis=" << model.basis.size();
    if (lrd != nullptr) os << " d=" << lrd->d;
    os << " noise=" << (noise != nullptr ? noise->name() : "none");
    return os.str();
}

} // namespace

Panel generate_panel(const FunctionalModel& model, const SamplingDesign& design,
                     const LrdGaussianModel* lrd, const SubordinationMap* noise,
                     std::uint64_t master_seed) {
    Panel panel;
    panel.design = design;
    panel.values.resize(design.times.size());
    panel.provenance = {master_seed, summarize(model, lrd, noise)};
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < design.n; ++i) {
        try {
            fill_subject(model, design, lrd, noise, master_seed, i,
                         panel.values[static_cast<std::size_t>(i)]);
        } catch (...) {
#pragma omp critical(lrdfda_panel_err)
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return panel;
}

Panel generate_panel_reference(const FunctionalModel& model, const SamplingDesign& design,
                               const LrdGaussianModel* lrd, const SubordinationMap* noise,
                               std::uint64_t master_seed) {
    Panel panel;
    panel.design = design;
    panel.values.resize(design.times.size());
    panel.provenance = {master_seed, summarize(model, lrd, noise)};
    for (int i = 0; i < design.n; ++i)
        fill_subject(model, design, lrd, noise, master_seed, i,
                     panel.values[static_cast<std::size_t>(i)]);
    return panel;
}

} // namespace lrdfda
