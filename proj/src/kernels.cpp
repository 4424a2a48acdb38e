#include "lrdfda/kernels.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "lrdfda/errors.hpp"

namespace lrdfda {

namespace {

constexpr double kMomentTol = 1e-12;
constexpr double kBoundaryTol = 1e-12;
constexpr double kNonnegTol = -1e-12;
constexpr int kGridPoints = 10000;

Polynomial one_minus_x2_pow(int m) {
    Polynomial base({1.0, 0.0, -1.0});
    Polynomial p({1.0});
    for (int i = 0; i < m; ++i) p = p * base;
    return p;
}

void finish(KernelOfOrder& ker) {
    ker.derivs.clear();
    ker.derivs.push_back(ker.poly);
    for (int i = 0; i < ker.v + 1; ++i)
        ker.derivs.push_back(ker.derivs.back().derivative());
    ker.theta = ker.derivs[static_cast<std::size_t>(ker.v)].moment(ker.k);
    ker.kappa = ker.derivs[static_cast<std::size_t>(ker.v) + 1].sup_abs();
    ker.lipschitz_l = ker.kappa; // C^1 on a compact interval
}

// Gaussian elimination with partial pivoting for the tiny moment systems.
std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        if (a[col][col] == 0.0) throw std::runtime_error("singular kernel moment system");
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t r = n; r-- > 0;) {
        double acc = b[r];
        for (std::size_t c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
        x[r] = acc / a[r][r];
    }
    return x;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace

KernelOfOrder build_default_kernel(int v) {
    if (v < 0 || v > 2) throw std::invalid_argument("build_default_kernel: v must be in {0,1,2}");
    KernelOfOrder ker;
    ker.v = v;
    ker.k = v + 2;
    ker.poly = one_minus_x2_pow(v + 1);
    const double norm = ker.poly.integral();
    ker.poly *= 1.0 / norm; // c_0=3/4, c_1=15/16, c_2=35/32
    finish(ker);
    return ker;
}

KernelOfOrder build_kernel_of_order(int v, int k) {
    if (v < 0) throw std::invalid_argument("kernel order: v must be >= 0");
    if (k < v + 2) throw std::invalid_argument("kernel order: need v <= k-2");
    if ((k - v) % 2 != 0)
        throw std::invalid_argument("kernel order: k-v must be even for symmetric kernels");
    if (k == v + 2 && v <= 2) return build_default_kernel(v);

    // Moment-constrained construction over x^{2i}(1-x^2)^{v+1}: odd moments
    // vanish by symmetry, boundary conditions hold by the (1-x^2)^{v+1}
    // factor, so only the even moments 0, 2, ..., k-v-2 need solving.
    const int m = (k - v) / 2;
    const Polynomial base = one_minus_x2_pow(v + 1);
    std::vector<Polynomial> basis;
    const Polynomial x2({0.0, 0.0, 1.0});
    Polynomial cur = base;
    for (int i = 0; i < m; ++i) {
        basis.push_back(cur);
        cur = cur * x2;
    }
    std::vector<std::vector<double>> a(m, std::vector<double>(m));
    std::vector<double> b(m, 0.0);
    b[0] = 1.0;
    for (int row = 0; row < m; ++row)
        for (int col = 0; col < m; ++col)
            a[row][col] = basis[static_cast<std::size_t>(col)].moment(2 * row);
    const auto c = solve_dense(std::move(a), std::move(b));
    Polynomial p({0.0});
    for (int i = 0; i < m; ++i) {
        Polynomial term = basis[static_cast<std::size_t>(i)];
        term *= c[static_cast<std::size_t>(i)];
        p = p + term;
    }
    KernelOfOrder ker;
    ker.v = v;
    ker.k = k;
    ker.poly = p;
    ker.nonneg_relaxed = (k > v + 2);
    finish(ker);
    return ker;
}

double eval_deriv(const KernelOfOrder& kernel, int order, double x) {
    if (order < 0 || order > kernel.v + 1)
        throw OrderTooHigh("eval_deriv: order exceeds v+1 for this kernel");
    if (x < -1.0 || x > 1.0) return 0.0;
    return kernel.derivs[static_cast<std::size_t>(order)].eval(x);
}

namespace {

CertificationItem item(std::string name, bool pass, std::string detail, bool warning = false) {
    return CertificationItem{std::move(name), pass, warning, std::move(detail)};
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

} // namespace

CertificationReport run_certification(const KernelOfOrder& ker) {
    CertificationReport rep;
    const auto& kv = ker.derivs[static_cast<std::size_t>(ker.v)];

    // (K1) smoothness: polynomial pieces are C^infty inside; report v+1.
    rep.items.push_back(item("K1 smoothness", true,
                             "polynomial of degree " + std::to_string(ker.poly.degree()) +
                                 ", C^" + std::to_string(ker.v + 1) + " on [-1,1]"));

    // (K2) nonnegativity, support, unit mass.
    double min_val = std::min(ker.poly.eval(-1.0), ker.poly.eval(1.0));
    for (int i = 1; i < kGridPoints; ++i) {
        const double x = -1.0 + 2.0 * i / kGridPoints;
        min_val = std::min(min_val, ker.poly.eval(x));
    }
    const double mass = ker.poly.integral();
    const bool nonneg = min_val >= kNonnegTol;
    const bool unit = std::abs(mass - 1.0) <= kMomentTol;
    if (!nonneg && ker.nonneg_relaxed) {
        rep.items.push_back(item("K2 nonnegativity", true,
                                 "relaxed: min K = " + fmt(min_val) +
                                     " (higher-order kernels take negative values)",
                                 true));
    } else {
        rep.items.push_back(item("K2 nonnegativity", nonneg, "min K on grid = " + fmt(min_val)));
    }
    rep.items.push_back(item("K2 unit mass", unit, "∫K = " + fmt(mass)));

    // (K3) Lipschitz constant for K^{(v)}.
    rep.items.push_back(item("K3 Lipschitz", std::isfinite(ker.lipschitz_l),
                             "L = sup|K^(v+1)| = " + fmt(ker.lipschitz_l)));

    // (K4) moment table of K^{(v)}, exact integrals.
    bool k4 = true;
    std::string k4detail;
    const double want_v = (ker.v % 2 == 0 ? 1.0 : -1.0) * factorial(ker.v);
    for (int j = 0; j <= ker.k; ++j) {
        const double m = kv.moment(j);
        if (j == ker.k) {
            if (std::abs(m) <= 1e-8) {
                k4 = false;
                k4detail += "theta at j=" + std::to_string(j) + " vanishes; ";
            }
            k4detail += "theta = " + fmt(m);
        } else if (j == ker.v) {
            if (std::abs(m - want_v) > kMomentTol * 100) {
                k4 = false;
                k4detail += "j=v moment " + fmt(m) + " != " + fmt(want_v) + "; ";
            }
        } else if (std::abs(m) > kMomentTol * 100) {
            k4 = false;
            k4detail += "j=" + std::to_string(j) + " moment nonzero (" + fmt(m) + "); ";
        }
    }
    rep.items.push_back(item("K4 order (" + std::to_string(ker.v) + "," + std::to_string(ker.k) + ")",
                             k4, k4detail));

    // (K5) boundary vanishing of K^{(j)}, j < v.
    bool k5 = true;
    std::string k5detail;
    for (int j = 0; j < ker.v; ++j) {
        const double l = ker.derivs[static_cast<std::size_t>(j)].eval(-1.0);
        const double r = ker.derivs[static_cast<std::size_t>(j)].eval(1.0);
        if (std::abs(l) > kBoundaryTol || std::abs(r) > kBoundaryTol) {
            k5 = false;
            k5detail += "K^(" + std::to_string(j) + ")(±1) = " + fmt(l) + ", " + fmt(r) + "; ";
        }
    }
    rep.items.push_back(item("K5 boundary", k5, k5detail.empty() ? "all vanish" : k5detail));

    // (K6) kappa_{v+1} finite.
    rep.items.push_back(item("K6 kappa", std::isfinite(ker.kappa),
                             "kappa_" + std::to_string(ker.v + 1) + " = " + fmt(ker.kappa)));

    for (const auto& it : rep.items)
        if (!it.pass) rep.all_pass = false;
    return rep;
}

CertificationReport certify(const KernelOfOrder& ker) {
    CertificationReport rep = run_certification(ker);
    if (!rep.all_pass) throw CertificationFailure("kernel certification failed:\n" + rep.text());
    return rep;
}

std::string CertificationReport::text() const {
    std::ostringstream os;
    for (const auto& it : items) {
        os << (it.pass ? (it.warning ? "[warn]" : "[ ok ]") : "[FAIL]") << ' ' << it.name;
        if (!it.detail.empty()) os << ": " << it.detail;
        os << '\n';
    }
    return os.str();
}

double double_kernel_integral(const KernelOfOrder& ker, double exponent) {
    if (exponent <= -1.0 || exponent > 0.0)
        throw std::invalid_argument("double_kernel_integral: exponent must lie in (-1, 0]");
    // ∬K(x)K(y)|x-y|^a = 2 ∫_0^2 u^a rho(u) du with rho the autocorrelation
    // polynomial; each term integrates in closed form since a > -1.
    const Polynomial rho = autocorrelation_on_02(ker.poly);
    const auto& r = rho.coeffs();
    double acc = 0.0;
    for (std::size_t m = 0; m < r.size(); ++m) {
        const double p = exponent + static_cast<double>(m) + 1.0;
        acc += r[m] * std::pow(2.0, p) / p;
    }
    return 2.0 * acc;
}

} // namespace lrdfda
