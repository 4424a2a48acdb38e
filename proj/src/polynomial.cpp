#include "lrdfda/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lrdfda {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    trim();
}

void Polynomial::trim() {
    while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::eval(double x) const {
    double acc = 0.0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial({0.0});
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
        d[i - 1] = coeffs_[i] * static_cast<double>(i);
    return Polynomial(std::move(d));
}

Polynomial Polynomial::derivative(int order) const {
    if (order < 0) throw std::invalid_argument("derivative order must be >= 0");
    Polynomial p = *this;
    for (int i = 0; i < order; ++i) p = p.derivative();
    return p;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
    std::vector<double> prod(coeffs_.size() + other.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < other.coeffs_.size(); ++j)
            prod[i + j] += coeffs_[i] * other.coeffs_[j];
    return Polynomial(std::move(prod));
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
    std::vector<double> sum(std::max(coeffs_.size(), other.coeffs_.size()), 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) sum[i] += coeffs_[i];
    for (std::size_t i = 0; i < other.coeffs_.size(); ++i) sum[i] += other.coeffs_[i];
    return Polynomial(std::move(sum));
}

Polynomial& Polynomial::operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
}

double Polynomial::moment(int j) const {
    if (j < 0) throw std::invalid_argument("moment order must be >= 0");
    // ∫_{-1}^{1} x^{j+i} dx = 2/(j+i+1) for even j+i, else 0.
    double acc = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const std::size_t p = static_cast<std::size_t>(j) + i;
        if (p % 2 == 0) acc += coeffs_[i] * 2.0 / static_cast<double>(p + 1);
    }
    return acc;
}

double Polynomial::sup_abs(int grid_points) const {
    double best = std::max(std::abs(eval(-1.0)), std::abs(eval(1.0)));
    for (int i = 1; i + 1 < grid_points; ++i) {
        const double x = -1.0 + 2.0 * static_cast<double>(i) / (grid_points - 1);
        best = std::max(best, std::abs(eval(x)));
    }
    return best;
}

namespace {

// Bivariate polynomial in (x,u), c[m][n] multiplying x^m u^n. Degrees stay
// tiny (kernel degree <= ~12), dense storage is fine.
using Biv = std::vector<std::vector<double>>;

Biv biv_zero(std::size_t dx, std::size_t du) {
    return Biv(dx, std::vector<double>(du, 0.0));
}

// Expand p(x-u) into Biv.
Biv shifted(const Polynomial& p) {
    const auto& c = p.coeffs();
    const std::size_t n = c.size();
    Biv out = biv_zero(n, n);
    std::vector<std::vector<double>> binom(n, std::vector<double>(n, 0.0));
    for (std::size_t b = 0; b < n; ++b) {
        binom[b][0] = 1.0;
        for (std::size_t i = 1; i <= b; ++i)
            binom[b][i] = binom[b - 1][i - 1] + (i <= b - 1 ? binom[b - 1][i] : 0.0);
    }
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t i = 0; i <= b; ++i) {
            const std::size_t k = b - i; // power of (-u)
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            out[i][k] += c[b] * binom[b][i] * sign;
        }
    }
    return out;
}

// (u-1)^m as a polynomial in u.
std::vector<double> u_minus_one_pow(std::size_t m) {
    std::vector<double> r{1.0};
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> next(r.size() + 1, 0.0);
        for (std::size_t j = 0; j < r.size(); ++j) {
            next[j + 1] += r[j];
            next[j] -= r[j];
        }
        r = std::move(next);
    }
    return r;
}

} // namespace

Polynomial autocorrelation_on_02(const Polynomial& p) {
    // For u in [0,2] the overlap is [u-1, 1]:
    //   rho(u) = ∫_{u-1}^{1} p(x) p(x-u) dx.
    const auto& c = p.coeffs();
    const std::size_t n = c.size();
    Biv q = shifted(p); // p(x-u)

    // product p(x)*p(x-u)
    Biv prod = biv_zero(2 * n - 1, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t m = 0; m < q.size(); ++m)
            for (std::size_t t = 0; t < q[m].size(); ++t)
                prod[a + m][t] += c[a] * q[m][t];

    // antiderivative in x
    Biv anti = biv_zero(prod.size() + 1, n);
    for (std::size_t m = 0; m < prod.size(); ++m)
        for (std::size_t t = 0; t < n; ++t)
            anti[m + 1][t] = prod[m][t] / static_cast<double>(m + 1);

    // evaluate at x = 1 and x = u-1, both polynomials in u
    std::size_t du = anti.size() + n; // generous bound on u-degree
    std::vector<double> rho(du, 0.0);
    for (std::size_t m = 0; m < anti.size(); ++m) {
        const auto lower = u_minus_one_pow(m); // (u-1)^m
        for (std::size_t t = 0; t < n; ++t) {
            const double coeff = anti[m][t];
            if (coeff == 0.0) continue;
            rho[t] += coeff;                              // x = 1 term
            for (std::size_t j = 0; j < lower.size(); ++j) // minus x = u-1 term
                rho[t + j] -= coeff * lower[j];
        }
    }
    return Polynomial(std::move(rho));
}

} // namespace lrdfda
