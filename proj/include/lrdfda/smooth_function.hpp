#pragma once

#include <string>
#include <vector>

namespace lrdfda {

// C^infinity functions on [0,1] closed under differentiation: a polynomial
// part plus sinusoid terms a*sin(omega*t + phase). Covers the trend and
// eigenfunction families used in experiments with exact derivatives of any
// order.
class SmoothFunction {
public:
    struct Sinusoid {
        double amplitude = 0.0;
        double omega = 0.0;
        double phase = 0.0;
    };

    SmoothFunction() = default;

    static SmoothFunction zero() { return SmoothFunction(); }
    static SmoothFunction constant(double c);
    static SmoothFunction polynomial(std::vector<double> coeffs);
    static SmoothFunction sinusoid(double amplitude, double omega, double phase = 0.0);
    // sqrt(2) cos(l*pi*t): orthonormal cosine basis element.
    static SmoothFunction cosine_basis(int l);
    // sqrt(2) sin(l*pi*t).
    static SmoothFunction sine_basis(int l);

    SmoothFunction operator+(const SmoothFunction& other) const;
    SmoothFunction scaled(double s) const;

    double eval(double t) const { return deriv(0, t); }
    double deriv(int order, double t) const;

    bool is_zero() const { return poly_.empty() && waves_.empty(); }
    const std::vector<double>& poly_coeffs() const { return poly_; }
    const std::vector<Sinusoid>& waves() const { return waves_; }

private:
    std::vector<double> poly_; // ascending, may be empty
    std::vector<Sinusoid> waves_;
};

} // namespace lrdfda
