#pragma once

#include <cstdint>
#include <vector>

namespace lrdfda {

// Latent stationary Gaussian process with long-range dependent covariance
// gamma(v) ~ c_z v^{2d-1}. Realized as fractional Gaussian noise with
// H = d + 1/2, which satisfies the decay exactly with c_z = H(2H-1).
struct LrdGaussianModel {
    double d = 0.3;

    double hurst() const { return d + 0.5; }
    double c_z() const { const double h = hurst(); return h * (2.0 * h - 1.0); }
    void validate() const;
};

struct GaussianPath {
    std::vector<double> values; // Z(1), ..., Z(t_max)
    LrdGaussianModel model;
    std::uint64_t seed = 0;

    double at_time(std::int64_t t) const; // 1-based integer time
    std::size_t length() const { return values.size(); }
};

// Exact fGn autocovariance: gamma(0)=1,
// gamma(v) = ((v+1)^{2H} - 2 v^{2H} + (v-1)^{2H}) / 2.
double autocovariance(const LrdGaussianModel& model, std::uint64_t lag);

// Exact sampling by circulant embedding (Davies-Harte). The embedding size is
// the smallest power of two >= 2(t_max-1); eigenvalues are checked for
// nonnegativity (reject below -1e-9 * max, clamp smaller negatives to zero).
GaussianPath simulate_path(const LrdGaussianModel& model, std::size_t t_max, std::uint64_t seed);

// Brute-force oracle: dense Cholesky of the exact Toeplitz covariance.
// Distributionally identical to simulate_path. t_max <= 4096.
GaussianPath simulate_path_oracle(const LrdGaussianModel& model, std::size_t t_max, std::uint64_t seed);

// Factor once, sample many times; simulate_path_oracle delegates here.
class CholeskyOracle {
public:
    CholeskyOracle(const LrdGaussianModel& model, std::size_t t_max);
    GaussianPath sample(std::uint64_t seed) const;
    std::size_t t_max() const { return t_max_; }

private:
    LrdGaussianModel model_;
    std::size_t t_max_;
    std::vector<double> chol_; // lower triangle, row-major t_max x t_max
};

// Exposed for tests: eigenvalues of the circulant embedding of size m
// (power of two), after the clamp. Throws EmbeddingFailure as simulate_path
// would.
std::vector<double> circulant_embedding_eigenvalues(const LrdGaussianModel& model, std::size_t m);

// Eigenvalue check/clamp applied to an arbitrary circulant first row; the fGn
// path delegates here. Throws EmbeddingFailure when the row is not
// nonnegative definite beyond tolerance.
std::vector<double> circulant_eigenvalue_check(const std::vector<double>& first_row);

// Smallest power of two >= 2(t_max-1); embedding size used by simulate_path.
std::size_t circulant_embedding_size(std::size_t t_max);

} // namespace lrdfda
