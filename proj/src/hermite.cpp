#include "lrdfda/hermite.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lrdfda/errors.hpp"

namespace lrdfda {

double hermite_eval(int k, double z) {
    if (k < 0) throw std::invalid_argument("hermite_eval: k must be >= 0");
    if (k == 0) return 1.0;
    if (k == 1) return z;
    double hm = 1.0, h = z;
    for (int j = 1; j < k; ++j) {
        const double next = z * h - static_cast<double>(j) * hm;
        hm = h;
        h = next;
    }
    return h;
}

namespace {

// Golub-Welsch nodes from the Jacobi matrix of the probabilists' Hermite
// recurrence (zero diagonal, off-diagonal sqrt(k)), each polished by Newton
// on the orthonormal polynomial. Weights come from the Christoffel-Darboux
// identity w = 1/sum_k p_k(x)^2, which keeps far-tail weights relatively
// accurate where eigenvector components only carry absolute eps accuracy.
GaussHermiteRule build_rule(int n) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(static_cast<double>(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("GaussHermiteRule: eigen decomposition failed");

    // orthonormal recurrence sqrt(k+1) p_{k+1} = z p_k - sqrt(k) p_{k-1};
    // returns p_n and the running sum of p_k^2 for k < n
    auto eval_orthonormal = [n](double z, double& pn, double& pn_prev, double& sumsq) {
        double pm = 0.0, p = 1.0;
        sumsq = 1.0;
        for (int k = 0; k < n; ++k) {
            const double next =
                (z * p - std::sqrt(static_cast<double>(k)) * pm) / std::sqrt(k + 1.0);
            pm = p;
            p = next;
            if (k + 1 < n) sumsq += p * p;
        }
        pn = p;
        pn_prev = pm;
    };

    GaussHermiteRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = es.eigenvalues()[i];
        double pn = 0, pnm = 0, sumsq = 0;
        for (int it = 0; it < 3; ++it) {
            eval_orthonormal(x, pn, pnm, sumsq);
            const double deriv = std::sqrt(static_cast<double>(n)) * pnm; // p_n' = sqrt(n) p_{n-1}
            if (!std::isfinite(pn) || !std::isfinite(deriv) || deriv == 0.0) break;
            const double step = pn / deriv;
            x -= step;
            if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) {
                eval_orthonormal(x, pn, pnm, sumsq);
                break;
            }
        }
        rule.nodes[static_cast<std::size_t>(i)] = x;
        rule.weights[static_cast<std::size_t>(i)] =
            std::isfinite(sumsq) ? 1.0 / sumsq : 0.0;
    }
    // symmetrize into exact +- pairs
    const int half = n / 2;
    for (int i = 0; i < half; ++i) {
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        const double node = 0.5 * (rule.nodes[hi] - rule.nodes[lo]);
        const double weight = 0.5 * (rule.weights[lo] + rule.weights[hi]);
        rule.nodes[lo] = -node;
        rule.nodes[hi] = node;
        rule.weights[lo] = weight;
        rule.weights[hi] = weight;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(half)] = 0.0;
    return rule;
}

} // namespace

const GaussHermiteRule& GaussHermiteRule::get(int n) {
    if (n < 2) throw std::invalid_argument("GaussHermiteRule: need at least 2 nodes");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussHermiteRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, std::make_unique<GaussHermiteRule>(build_rule(n))).first;
    return *it->second;
}

double HermiteCoefficients::variance() const {
    double acc = 0.0, fact = 1.0;
    for (int k = 1; k <= k_max; ++k) {
        fact *= k;
        const double c = coeffs[static_cast<std::size_t>(k)];
        acc += c * c / fact;
    }
    return acc;
}

SubordinationMap SubordinationMap::identity() {
    SubordinationMap m;
    m.name_ = "identity";
    m.raw_ = [](double z, double) { return z; };
    m.center_ = [](double) { return 0.0; };
    m.rank_hint_ = 1;
    return m;
}

SubordinationMap SubordinationMap::hermite2() {
    SubordinationMap m;
    m.name_ = "hermite2";
    m.raw_ = [](double z, double) { return z * z - 1.0; };
    m.center_ = [](double) { return 0.0; };
    m.rank_hint_ = 2;
    return m;
}

SubordinationMap SubordinationMap::linear_combo(SmoothFunction a, SmoothFunction b) {
    SubordinationMap m;
    m.name_ = "linear_combo";
    m.raw_ = [a, b](double z, double t) { return a.eval(t) * z + b.eval(t) * (z * z - 1.0); };
    m.center_ = [](double) { return 0.0; };
    return m;
}

SubordinationMap SubordinationMap::exp_marginal(SmoothFunction theta) {
    SubordinationMap m;
    m.name_ = "exp_marginal";
    m.raw_ = [theta](double z, double t) {
        // F_t^{-1}(Phi(z)) with F_t ~ Exponential(mean theta(t));
        // 1 - Phi(z) = erfc(z/sqrt(2)) / 2 avoids cancellation in the tail.
        const double th = theta.eval(t);
        const double tail = 0.5 * std::erfc(z / std::numbers::sqrt2);
        return -th * std::log(tail);
    };
    m.center_ = [theta](double t) { return theta.eval(t); };
    m.rank_hint_ = 1;
    return m;
}

SubordinationMap SubordinationMap::custom(std::string name,
                                          std::function<double(double, double)> g,
                                          std::optional<int> rank_hint) {
    SubordinationMap m;
    m.name_ = std::move(name);
    m.raw_ = std::move(g);
    m.needs_quadrature_centering_ = true;
    m.rank_hint_ = rank_hint;
    return m;
}

double SubordinationMap::centered_mean(double t) const {
    if (!needs_quadrature_centering_) return center_(t);
    {
        std::lock_guard<std::mutex> lock(cache_->mu);
        auto it = cache_->means.find(t);
        if (it != cache_->means.end()) return it->second;
    }
    const auto& rule = GaussHermiteRule::get(128);
    const double m = rule.integrate([&](double z) { return raw_(z, t); });
    std::lock_guard<std::mutex> lock(cache_->mu);
    cache_->means.emplace(t, m);
    return m;
}

double SubordinationMap::operator()(double z, double t) const {
    return raw_(z, t) - centered_mean(t);
}

double SubordinationMap::l2_norm_squared(double t, int nodes) const {
    const auto& rule = GaussHermiteRule::get(nodes);
    return rule.integrate([&](double z) {
        const double g = (*this)(z, t);
        return g * g;
    });
}

namespace {

std::vector<double> raw_coefficients(const SubordinationMap& map, double t, int k_max, int nodes) {
    const auto& rule = GaussHermiteRule::get(nodes);
    std::vector<double> c(static_cast<std::size_t>(k_max) + 1, 0.0);
    // single pass over nodes, running the Hermite recurrence per node
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double z = rule.nodes[i];
        const double wg = rule.weights[i] * map(z, t);
        double hm = 1.0, h = z;
        c[0] += wg;
        if (k_max >= 1) c[1] += wg * z;
        for (int k = 1; k < k_max; ++k) {
            const double next = z * h - static_cast<double>(k) * hm;
            hm = h;
            h = next;
            c[static_cast<std::size_t>(k) + 1] += wg * h;
        }
    }
    return c;
}

// Stability of c_k under node doubling, measured on the L2-normalized
// coefficients c_k/sqrt(k!) (the scale Parseval and the variance sums use;
// raw high-k coefficients carry ~1e-8 cancellation noise at magnitudes that
// are irrelevant after the k! weighting).
void check_stability(const std::vector<double>& c1, const std::vector<double>& c2, int upto,
                     double t) {
    double sqrt_fact = 1.0;
    for (int k = 0; k <= upto; ++k) {
        if (k >= 1) sqrt_fact *= std::sqrt(static_cast<double>(k));
        const auto i = static_cast<std::size_t>(k);
        const double a = c1[i] / sqrt_fact;
        const double b = c2[i] / sqrt_fact;
        if (std::abs(a - b) > 1e-8 * std::max({1.0, std::abs(a), std::abs(b)}))
            throw QuadratureUnstable("hermite_coefficients: c_" + std::to_string(k) + " at t=" +
                                     std::to_string(t) + " moved by " +
                                     std::to_string(std::abs(c1[i] - c2[i])) +
                                     " when doubling nodes");
    }
}

std::vector<double> stable_coefficients(const SubordinationMap& map, double t, int k_max, int nodes) {
    if (nodes < 2 * k_max)
        throw std::invalid_argument("hermite_coefficients: need nodes >= 2*k_max");
    auto c = raw_coefficients(map, t, k_max, nodes);
    const auto c2 = raw_coefficients(map, t, k_max, 2 * nodes);
    check_stability(c, c2, k_max, t);
    c[0] = 0.0; // centered: E[G] = 0 by construction
    return c;
}

constexpr double kRankTol = 1e-8;

} // namespace

int detect_rank(const SubordinationMap& map, int k_max, int nodes) {
    if (nodes < 2 * k_max)
        throw std::invalid_argument("detect_rank: need nodes >= 2*k_max");
    {
        std::lock_guard<std::mutex> lock(map.cache_->mu);
        auto it = map.cache_->ranks.find({k_max, nodes});
        if (it != map.cache_->ranks.end()) return it->second;
    }
    // Scan k upward over the probe grid {0, 0.1, ..., 1}; only coefficients
    // up to the detected rank need to be quadrature-stable.
    constexpr int kProbes = 11;
    std::vector<std::vector<double>> lo(kProbes), hi(kProbes);
    for (int i = 0; i < kProbes; ++i) {
        const double t = i / 10.0;
        lo[static_cast<std::size_t>(i)] = raw_coefficients(map, t, k_max, nodes);
        hi[static_cast<std::size_t>(i)] = raw_coefficients(map, t, k_max, 2 * nodes);
    }
    int rank = 0;
    for (int k = 1; k <= k_max && rank == 0; ++k) {
        double max_abs = 0.0;
        for (int i = 0; i < kProbes; ++i) {
            check_stability(lo[static_cast<std::size_t>(i)], hi[static_cast<std::size_t>(i)], k,
                            i / 10.0);
            max_abs = std::max(max_abs,
                               std::abs(lo[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]));
        }
        if (max_abs > kRankTol) rank = k;
    }
    if (rank == 0) throw std::runtime_error("detect_rank: all coefficients up to k_max vanish");
    std::lock_guard<std::mutex> lock(map.cache_->mu);
    map.cache_->ranks.emplace(std::make_pair(k_max, nodes), rank);
    return rank;
}

HermiteCoefficients hermite_coefficients(const SubordinationMap& map, double t, int k_max, int nodes) {
    {
        std::lock_guard<std::mutex> lock(map.cache_->mu);
        auto& by_t = map.cache_->coeffs[{k_max, nodes}];
        auto it = by_t.find(t);
        if (it != by_t.end()) return it->second;
    }
    HermiteCoefficients out;
    out.t = t;
    out.k_max = k_max;
    out.coeffs = stable_coefficients(map, t, k_max, nodes);
    out.rank = detect_rank(map, k_max, nodes);
    std::lock_guard<std::mutex> lock(map.cache_->mu);
    map.cache_->coeffs[{k_max, nodes}].emplace(t, out);
    return out;
}

std::vector<double> subordinate(const SubordinationMap& map, const GaussianPath& path,
                                std::span<const std::int64_t> times,
                                std::span<const double> rescaled) {
    if (times.size() != rescaled.size())
        throw std::invalid_argument("subordinate: times and rescaled lengths differ");
    std::vector<double> eps(times.size());
    for (std::size_t j = 0; j < times.size(); ++j)
        eps[j] = map(path.at_time(times[j]), rescaled[j]);
    return eps;
}

double asymptotic_error_covariance(const HermiteCoefficients& at_t1,
                                   const HermiteCoefficients& at_t2,
                                   const LrdGaussianModel& model, std::uint64_t lag) {
    if (lag < 1) throw std::invalid_argument("asymptotic_error_covariance: lag must be >= 1");
    if (at_t1.k_max != at_t2.k_max)
        throw std::invalid_argument("asymptotic_error_covariance: mismatched truncations");
    const double g = autocovariance(model, lag);
    double acc = 0.0, fact = 1.0, gpow = 1.0;
    for (int l = 1; l <= at_t1.k_max; ++l) {
        fact *= l;
        gpow *= g;
        acc += at_t1.at(l) * at_t2.at(l) / fact * gpow;
    }
    return acc;
}

bool t2_holds(double d, int q) {
    if (q < 1) throw std::invalid_argument("t2_holds: q must be >= 1");
    return d > 0.5 - 0.5 / static_cast<double>(q) && d < 0.5;
}

} // namespace lrdfda
