#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrdfda/fgn.hpp"
#include "lrdfda/smooth_function.hpp"

namespace lrdfda {

// Probabilists' Hermite polynomial H_k: H_0 = 1, H_1 = z,
// H_{k+1} = z H_k - k H_{k-1}; E[H_j H_k] = k! delta_jk under N(0,1).
double hermite_eval(int k, double z);

// Gauss-Hermite rule transformed to the standard normal weight:
// ∫ f(z) phi(z) dz ≈ Σ w_i f(z_i), weights summing to 1.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    static const GaussHermiteRule& get(int n);
    template <typename F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
        return acc;
    }
};

struct HermiteCoefficients {
    double t = 0.0;
    int rank = 1;       // q: smallest k >= 1 with c_k != 0 over the probe grid
    int k_max = 20;
    std::vector<double> coeffs; // c_k for k = 0..k_max (c_0 forced to 0)

    double at(int k) const { return coeffs[static_cast<std::size_t>(k)]; }
    // Σ_{k>=1} c_k^2 / k!  (= var of the subordinated error at this t)
    double variance() const;
};

// The transform G(z,t) behind the subordinated errors eps_i(j) = G(Z(T_ij), t_ij).
// All maps are centered so E[G(Z,t)] = 0: built-ins exactly, custom maps by
// subtracting the quadrature mean per t (cached).
class SubordinationMap {
public:
    static SubordinationMap identity();
    static SubordinationMap hermite2();
    // a(t) z + b(t) (z^2 - 1)
    static SubordinationMap linear_combo(SmoothFunction a, SmoothFunction b);
    // marginal-matching: F_t^{-1}(Phi(z)) - theta(t) for Exponential(mean theta(t))
    static SubordinationMap exp_marginal(SmoothFunction theta);
    static SubordinationMap custom(std::string name, std::function<double(double, double)> g,
                                   std::optional<int> rank_hint = std::nullopt);

    double operator()(double z, double t) const;
    const std::string& name() const { return name_; }
    std::optional<int> rank_hint() const { return rank_hint_; }

    // E[G^2(Z,t)] by quadrature; must be finite for the L^2 expansion.
    double l2_norm_squared(double t, int nodes = 128) const;

private:
    SubordinationMap() = default;
    std::string name_;
    std::function<double(double, double)> raw_;
    std::function<double(double)> center_; // exact m(t) for built-ins, empty for custom
    std::optional<int> rank_hint_;
    bool needs_quadrature_centering_ = false;

    double centered_mean(double t) const;
    struct Cache {
        std::mutex mu;
        std::map<double, double> means;
        std::map<std::pair<int, int>, std::map<double, HermiteCoefficients>> coeffs;
        std::map<std::pair<int, int>, int> ranks;
    };
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();

    friend HermiteCoefficients hermite_coefficients(const SubordinationMap&, double, int, int);
    friend int detect_rank(const SubordinationMap&, int, int);
};

// c_k(t) = E[G(Z,t) H_k(Z)] by Gauss-Hermite quadrature; c_0 forced to 0
// after centering. Throws QuadratureUnstable if doubling the node count moves
// any c_k by more than 1e-8 relative. rank is detected over the probe grid
// t in {0, 0.1, ..., 1} with tolerance 1e-8.
HermiteCoefficients hermite_coefficients(const SubordinationMap& map, double t,
                                         int k_max = 20, int nodes = 128);

int detect_rank(const SubordinationMap& map, int k_max = 20, int nodes = 128);

// eps(j) = G(path[T_j], t_j), elementwise.
std::vector<double> subordinate(const SubordinationMap& map, const GaussianPath& path,
                                std::span<const std::int64_t> times,
                                std::span<const double> rescaled);

// Σ_{l=q}^{k_max} c_l(t1) c_l(t2) / l! * gamma(lag)^l
double asymptotic_error_covariance(const HermiteCoefficients& at_t1,
                                   const HermiteCoefficients& at_t2,
                                   const LrdGaussianModel& model, std::uint64_t lag);

// (T2): 1/2 - 1/(2q) < d < 1/2, the condition under which the subordinated
// process inherits the long memory of Z.
bool t2_holds(double d, int q);

} // namespace lrdfda
