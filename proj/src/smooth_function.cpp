#include "lrdfda/smooth_function.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lrdfda {

SmoothFunction SmoothFunction::constant(double c) {
    return polynomial({c});
}

SmoothFunction SmoothFunction::polynomial(std::vector<double> coeffs) {
    SmoothFunction f;
    f.poly_ = std::move(coeffs);
    while (!f.poly_.empty() && f.poly_.back() == 0.0) f.poly_.pop_back();
    return f;
}

SmoothFunction SmoothFunction::sinusoid(double amplitude, double omega, double phase) {
    SmoothFunction f;
    if (amplitude != 0.0) f.waves_.push_back({amplitude, omega, phase});
    return f;
}

SmoothFunction SmoothFunction::cosine_basis(int l) {
    if (l < 1) throw std::invalid_argument("cosine_basis: l must be >= 1");
    return sinusoid(std::numbers::sqrt2, l * std::numbers::pi, std::numbers::pi / 2.0);
}

SmoothFunction SmoothFunction::sine_basis(int l) {
    if (l < 1) throw std::invalid_argument("sine_basis: l must be >= 1");
    return sinusoid(std::numbers::sqrt2, l * std::numbers::pi, 0.0);
}

SmoothFunction SmoothFunction::operator+(const SmoothFunction& other) const {
    SmoothFunction f;
    f.poly_.assign(std::max(poly_.size(), other.poly_.size()), 0.0);
    for (std::size_t i = 0; i < poly_.size(); ++i) f.poly_[i] += poly_[i];
    for (std::size_t i = 0; i < other.poly_.size(); ++i) f.poly_[i] += other.poly_[i];
    while (!f.poly_.empty() && f.poly_.back() == 0.0) f.poly_.pop_back();
    f.waves_ = waves_;
    f.waves_.insert(f.waves_.end(), other.waves_.begin(), other.waves_.end());
    return f;
}

SmoothFunction SmoothFunction::scaled(double s) const {
    SmoothFunction f = *this;
    for (double& c : f.poly_) c *= s;
    for (auto& w : f.waves_) w.amplitude *= s;
    if (s == 0.0) {
        f.poly_.clear();
        f.waves_.clear();
    }
    return f;
}

double SmoothFunction::deriv(int order, double t) const {
    if (order < 0) throw std::invalid_argument("SmoothFunction: derivative order must be >= 0");
    double acc = 0.0;
    // polynomial part: d^m/dt^m t^i = i!/(i-m)! t^{i-m}
    for (std::size_t i = static_cast<std::size_t>(order); i < poly_.size(); ++i) {
        double fall = 1.0;
        for (int m = 0; m < order; ++m) fall *= static_cast<double>(i - static_cast<std::size_t>(m));
        acc += poly_[i] * fall * std::pow(t, static_cast<double>(i) - order);
    }
    // sinusoid part: d^m sin(w t + p) = w^m sin(w t + p + m pi/2)
    for (const auto& w : waves_) {
        const double amp = w.amplitude * std::pow(w.omega, order);
        acc += amp * std::sin(w.omega * t + w.phase + order * std::numbers::pi / 2.0);
    }
    return acc;
}

} // namespace lrdfda
