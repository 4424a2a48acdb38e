#pragma once

#include <string>
#include <vector>

#include "lrdfda/polynomial.hpp"

namespace lrdfda {

// A kernel K of order (v,k) on [-1,1]: K^{(v)} reproduces v-th derivatives of
// polynomials up to degree k-1 and has nonzero k-th moment theta.
// Shipped kernels are polynomials, so every moment in the certificate is an
// exact integral rather than a quadrature value.
struct KernelOfOrder {
    int v = 0;
    int k = 2;
    Polynomial poly;                    // K itself
    std::vector<Polynomial> derivs;     // K, K', ..., K^{(v+1)}
    double theta = 0.0;                 // ∫ x^k K^{(v)}(x) dx
    double lipschitz_l = 0.0;           // Lipschitz constant of K^{(v)} on [-1,1]
    double kappa = 0.0;                 // sup |K^{(v+1)}|
    bool nonneg_relaxed = false;        // higher-order kernels necessarily dip negative

    double eval(double x) const { return (x < -1.0 || x > 1.0) ? 0.0 : poly.eval(x); }
};

struct CertificationItem {
    std::string name;
    bool pass = false;
    bool warning = false;
    std::string detail;
};

struct CertificationReport {
    std::vector<CertificationItem> items;
    bool all_pass = true;   // warnings do not fail
    std::string text() const;
};

// Beta-family polynomial kernels c_v (1-x^2)^{v+1}, order (v, v+2). v in {0,1,2}.
KernelOfOrder build_default_kernel(int v);

// Moment-constrained kernel of order (v,k) over (1-x^2)^{v+1}·{1,x^2,...};
// for k > v+2 these take negative values, so (K2) is relaxed to a warning.
KernelOfOrder build_kernel_of_order(int v, int k);

// K^{(order)}(x); zero outside [-1,1]. Throws OrderTooHigh above v+1.
double eval_deriv(const KernelOfOrder& kernel, int order, double x);

// Full (K1)-(K6) checklist. `certify` throws CertificationFailure on any
// violated item; `run_certification` just reports.
CertificationReport run_certification(const KernelOfOrder& kernel);
CertificationReport certify(const KernelOfOrder& kernel);

// ∬ K(x)K(y)|x-y|^exponent dx dy for exponent in (-1, 0]; exact via the
// kernel autocorrelation polynomial.
double double_kernel_integral(const KernelOfOrder& kernel, double exponent);

} // namespace lrdfda
