#pragma once

#include <cstddef>
#include <vector>

namespace lrdfda {

// Dense univariate polynomial with double coefficients, ascending order.
// Kernel moment certificates rely on the integral routines being exact
// (closed-form antiderivatives), not quadrature.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);

    static Polynomial constant(double c) { return Polynomial({c}); }

    const std::vector<double>& coeffs() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    double eval(double x) const;
    Polynomial derivative() const;
    Polynomial derivative(int order) const;
    Polynomial operator*(const Polynomial& other) const;
    Polynomial operator+(const Polynomial& other) const;
    Polynomial& operator*=(double s);

    // ∫_{-1}^{1} x^j p(x) dx, exact.
    double moment(int j) const;
    // ∫_{-1}^{1} p(x) dx, exact.
    double integral() const { return moment(0); }

    // max |p(x)| over [-1,1], grid scan plus endpoints (certificates only
    // need a sup bound at grid resolution).
    double sup_abs(int grid_points = 10001) const;

private:
    std::vector<double> coeffs_;
    void trim();
};

// Autocorrelation rho(u) = ∫ p(x) p(x-u) dx over the overlap of [-1,1] and
// [u-1, u+1], valid as a single polynomial in u on [0,2] (rho is even).
Polynomial autocorrelation_on_02(const Polynomial& p);

} // namespace lrdfda
