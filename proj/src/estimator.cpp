#include "lrdfda/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "lrdfda/errors.hpp"

namespace lrdfda {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

void validate_bandwidth(double b) {
    if (b >= 0.5) throw BandwidthTooLarge("priestley_chao: b must be < 1/2");
    if (!(b > 0.0)) throw std::invalid_argument("priestley_chao: b must be positive");
}

// One grid point; windowed sum per subject via binary search.
double estimate_point(const Panel& panel, const Polynomial& kv, int v, double b, double t) {
    const auto& design = panel.design;
    double acc = 0.0;
    for (std::size_t i = 0; i < design.t.size(); ++i) {
        const auto& ts = design.t[i];
        const auto& ys = panel.values[i];
        auto lo = std::lower_bound(ts.begin(), ts.end(), t - b);
        auto hi = std::upper_bound(lo, ts.end(), t + b);
        if (lo == hi)
            throw BandwidthTooSmall("priestley_chao: empty window at t = " + std::to_string(t) +
                                    " for subject " + std::to_string(i + 1) +
                                    "; increase b beyond the max design spacing");
        double subject_acc = 0.0;
        for (auto it = lo; it != hi; ++it) {
            const auto j = static_cast<std::size_t>(it - ts.begin());
            const double prev = (j == 0) ? 0.0 : ts[j - 1];
            subject_acc += (ts[j] - prev) * kv.eval((ts[j] - t) / b) * ys[j];
        }
        acc += subject_acc;
    }
    const double sign = (v % 2 == 0) ? 1.0 : -1.0;
    return sign * std::pow(b, -(v + 1)) * acc / static_cast<double>(design.n);
}

} // namespace

EstimateCurve priestley_chao(const Panel& panel, const KernelOfOrder& kernel, double b,
                             std::span<const double> grid) {
    validate_bandwidth(b);
    EstimateCurve out;
    out.v = kernel.v;
    out.b = b;
    out.grid.assign(grid.begin(), grid.end());
    out.values.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
    out.masked.assign(grid.size(), 1);
    const auto& kv = kernel.derivs[static_cast<std::size_t>(kernel.v)];
    std::exception_ptr err;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t g = 0; g < static_cast<std::ptrdiff_t>(grid.size()); ++g) {
        const double t = grid[static_cast<std::size_t>(g)];
        if (t < b || t > 1.0 - b) continue;
        try {
            out.values[static_cast<std::size_t>(g)] = estimate_point(panel, kv, kernel.v, b, t);
            out.masked[static_cast<std::size_t>(g)] = 0;
        } catch (...) {
#pragma omp critical(lrdfda_estimate_err)
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return out;
}

EstimateCurve priestley_chao_reference(const Panel& panel, const KernelOfOrder& kernel, double b,
                                       std::span<const double> grid) {
    validate_bandwidth(b);
    EstimateCurve out;
    out.v = kernel.v;
    out.b = b;
    out.grid.assign(grid.begin(), grid.end());
    out.values.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
    out.masked.assign(grid.size(), 1);
    const auto& design = panel.design;
    const double sign = (kernel.v % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const double t = grid[g];
        if (t < b || t > 1.0 - b) continue;
        double acc = 0.0;
        std::size_t in_window = 0;
        for (std::size_t i = 0; i < design.t.size(); ++i) {
            const auto& ts = design.t[i];
            const auto& ys = panel.values[i];
            double subject_acc = 0.0;
            std::size_t subject_window = 0;
            for (std::size_t j = 0; j < ts.size(); ++j) {
                const double prev = (j == 0) ? 0.0 : ts[j - 1];
                subject_acc += (ts[j] - prev) * eval_deriv(kernel, kernel.v, (ts[j] - t) / b) * ys[j];
                if (std::abs(ts[j] - t) <= b) ++subject_window;
            }
            if (subject_window == 0)
                throw BandwidthTooSmall("priestley_chao: empty window at t = " + std::to_string(t) +
                                        " for subject " + std::to_string(i + 1) +
                                        "; increase b beyond the max design spacing");
            in_window += subject_window;
            acc += subject_acc;
        }
        (void)in_window;
        out.values[g] = sign * std::pow(b, -(kernel.v + 1)) * acc / static_cast<double>(design.n);
        out.masked[g] = 0;
    }
    return out;
}

TheoryConstants::TheoryConstants(FunctionalModel model, KernelOfOrder kernel, LrdGaussianModel lrd,
                                 std::optional<SubordinationMap> noise, int q)
    : model_(std::move(model)), kernel_(std::move(kernel)), lrd_(lrd), noise_(std::move(noise)),
      q_(q) {
    lrd_.validate();
    if (q_ < 1) throw std::invalid_argument("TheoryConstants: q must be >= 1");
    const double exponent = (2.0 * lrd_.d - 1.0) * q_;
    if (!(exponent > -1.0 && exponent < 0.0))
        throw std::invalid_argument("TheoryConstants: (2d-1)q must lie in (-1,0); (T2) fails");
    dki_ = double_kernel_integral(kernel_, exponent);
}

double TheoryConstants::c_bias(double t) const {
    return model_.trend.deriv(kernel_.k, t) / factorial(kernel_.k) * kernel_.theta;
}

double TheoryConstants::c_var(double t) const { return model_.c_var(kernel_.v, t); }

double TheoryConstants::i_q(double t) const {
    if (!noise_.has_value()) return 0.0;
    const auto coeffs = hermite_coefficients(*noise_, t);
    const double cq = coeffs.at(q_);
    return cq * cq / factorial(q_) * std::pow(lrd_.c_z(), q_) * dki_;
}

double theory_bias(const FunctionalModel& model, const KernelOfOrder& kernel, double t, double b) {
    return std::pow(b, kernel.k - kernel.v) * model.trend.deriv(kernel.k, t) /
           factorial(kernel.k) * kernel.theta;
}

TheoryVariance theory_variance(const TheoryConstants& constants, double t, int n, double b,
                               double t_max) {
    const auto& ker = constants.kernel();
    TheoryVariance tv;
    tv.leading = constants.c_var(t) / static_cast<double>(n);
    tv.bias_correction = std::pow(b, ker.k - ker.v);
    tv.lrd_correction = std::pow(b, -2 * ker.v) *
                        std::pow(t_max * b, (2.0 * constants.lrd().d - 1.0) * constants.q());
    tv.lrd_term = tv.lrd_correction * constants.i_q(t) / static_cast<double>(n);
    return tv;
}

double BandwidthWindow::condition8(int n, double b) const {
    return static_cast<double>(n) * std::pow(b, 2 * (k - v));
}

double BandwidthWindow::condition9_printed(double beta_n, double t_max, double b) const {
    return std::pow(b, 2 * (v + 2)) * beta_n * beta_n *
           std::pow(t_max * b, -(2.0 * d + 1.0) * q);
}

double BandwidthWindow::condition9_variant(double beta_n, double t_max, double b) const {
    return std::pow(b, 2 * (v + 2)) * beta_n * beta_n *
           std::pow(t_max * b, -(1.0 - 2.0 * d) * q);
}

BandwidthWindow bandwidth_window(int n, int n_points, double d, int q, int v, int k,
                                 double c_lower) {
    if (n < 1 || n_points < 1)
        throw std::invalid_argument("bandwidth_window: n and n_points must be >= 1");
    if (!(c_lower > 0.0)) throw std::invalid_argument("bandwidth_window: c_lower must be > 0");
    if (!(d > 0.0 && d < 0.5)) throw std::invalid_argument("bandwidth_window: d must be in (0,1/2)");
    BandwidthWindow w;
    w.v = v;
    w.k = k;
    w.q = q;
    w.d = d;
    const double dq = (2.0 * d + 1.0) * q;
    w.exponent_low = (2.0 - dq) / (2.0 * (v + 2) - dq);
    w.b_low = c_lower * std::pow(static_cast<double>(n_points), -w.exponent_low);
    w.b_high = std::pow(static_cast<double>(n), -1.0 / (2.0 * (k - v)));
    w.feasible = w.b_low < w.b_high;
    w.growth_exponent = 2.0 * (k - v) * w.exponent_low;
    std::ostringstream os;
    os << "n = o(N^{" << 2 * (k - v) << "(2-(2d+1)q)/(2(v+2)-(2d+1)q)}) = o(N^" << w.growth_exponent
       << ")";
    w.growth_condition = os.str();
    return w;
}

void require_feasible(const BandwidthWindow& w) {
    if (!w.feasible) {
        std::ostringstream os;
        os << "bandwidth window infeasible: b_low = " << w.b_low << " >= b_high = " << w.b_high
           << "; needs " << w.growth_condition;
        throw InfeasibleWindow(os.str());
    }
}

} // namespace lrdfda
