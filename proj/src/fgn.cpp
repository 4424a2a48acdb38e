#include "lrdfda/fgn.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "lrdfda/errors.hpp"
#include "lrdfda/rng.hpp"

namespace lrdfda {

void LrdGaussianModel::validate() const {
    if (!(d > 0.0 && d < 0.5))
        throw std::invalid_argument("LrdGaussianModel: memory parameter d must be in (0, 1/2)");
}

double GaussianPath::at_time(std::int64_t t) const {
    if (t < 1 || static_cast<std::size_t>(t) > values.size())
        throw IndexOutOfRange("GaussianPath: time index outside the simulated grid");
    return values[static_cast<std::size_t>(t - 1)];
}

double autocovariance(const LrdGaussianModel& model, std::uint64_t lag) {
    model.validate();
    if (lag == 0) return 1.0;
    const double two_h = 2.0 * model.hurst();
    const double v = static_cast<double>(lag);
    return 0.5 * (std::pow(v + 1.0, two_h) - 2.0 * std::pow(v, two_h) + std::pow(v - 1.0, two_h));
}

std::size_t circulant_embedding_size(std::size_t t_max) {
    std::size_t need = 2 * (t_max - 1);
    std::size_t m = 2;
    while (m < need) m *= 2;
    return m;
}

namespace {

// FFTW planner calls are not thread-safe; plans are created once per size and
// then reused via the (thread-safe) new-array execute interface.
class FftEngine {
public:
    static void forward(fftw_complex* data, std::size_t m) {
        fftw_plan plan = plan_for(m);
        fftw_execute_dft(plan, data, data);
    }

private:
    static fftw_plan plan_for(std::size_t m) {
        static std::mutex mu;
        static std::map<std::size_t, fftw_plan> plans;
        std::lock_guard<std::mutex> lock(mu);
        auto it = plans.find(m);
        if (it != plans.end()) return it->second;
        fftw_complex* buf = fftw_alloc_complex(m);
        fftw_plan p = fftw_plan_dft_1d(static_cast<int>(m), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        fftw_free(buf);
        plans.emplace(m, p);
        return p;
    }
};

struct FftwDeleter {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuf = std::unique_ptr<fftw_complex[], FftwDeleter>;

FftwBuf alloc_complex(std::size_t m) {
    return FftwBuf(fftw_alloc_complex(m));
}

std::vector<double> eigenvalue_check_impl(const std::vector<double>& first_row) {
    const std::size_t m = first_row.size();
    FftwBuf buf = alloc_complex(m);
    for (std::size_t k = 0; k < m; ++k) {
        buf[k][0] = first_row[k];
        buf[k][1] = 0.0;
    }
    FftEngine::forward(buf.get(), m);
    std::vector<double> lam(m);
    double max_lam = 0.0, min_lam = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        lam[k] = buf[k][0];
        max_lam = std::max(max_lam, lam[k]);
        min_lam = std::min(min_lam, lam[k]);
    }
    if (min_lam < -1e-9 * max_lam)
        throw EmbeddingFailure("circulant embedding has negative eigenvalue " +
                               std::to_string(min_lam) + " (max " + std::to_string(max_lam) +
                               ", size " + std::to_string(m) + "); use the Cholesky oracle");
    for (double& l : lam)
        if (l < 0.0) l = 0.0;
    return lam;
}

std::vector<double> compute_eigenvalues(const LrdGaussianModel& model, std::size_t m) {
    // first circulant row: gamma(min(k, m-k))
    std::vector<double> row(m);
    for (std::size_t k = 0; k < m; ++k) row[k] = autocovariance(model, std::min(k, m - k));
    return eigenvalue_check_impl(row);
}

// Eigenvalues depend only on (d, m); studies reuse them across all subjects
// and replicates.
const std::vector<double>& cached_eigenvalues(const LrdGaussianModel& model, std::size_t m) {
    static std::mutex mu;
    static std::map<std::pair<double, std::size_t>, std::unique_ptr<std::vector<double>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(model.d, m);
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto val = std::make_unique<std::vector<double>>(compute_eigenvalues(model, m));
        it = cache.emplace(key, std::move(val)).first;
    }
    return *it->second;
}

} // namespace

std::vector<double> circulant_embedding_eigenvalues(const LrdGaussianModel& model, std::size_t m) {
    model.validate();
    return compute_eigenvalues(model, m);
}

std::vector<double> circulant_eigenvalue_check(const std::vector<double>& first_row) {
    if (first_row.size() < 2)
        throw std::invalid_argument("circulant_eigenvalue_check: need at least 2 entries");
    return eigenvalue_check_impl(first_row);
}

GaussianPath simulate_path(const LrdGaussianModel& model, std::size_t t_max, std::uint64_t path_seed) {
    model.validate();
    if (t_max < 1) throw std::invalid_argument("simulate_path: t_max must be >= 1");
    GaussianPath path;
    path.model = model;
    path.seed = path_seed;
    Rng rng(path_seed);
    if (t_max == 1) {
        path.values.push_back(rng.normal());
        return path;
    }

    const std::size_t m = circulant_embedding_size(t_max);
    const std::vector<double>& lam = cached_eigenvalues(model, m);
    const double inv_m = 1.0 / static_cast<double>(m);

    FftwBuf buf = alloc_complex(m);
    buf[0][0] = std::sqrt(lam[0] * inv_m) * rng.normal();
    buf[0][1] = 0.0;
    const std::size_t half = m / 2;
    for (std::size_t j = 1; j < half; ++j) {
        const double a = std::sqrt(0.5 * lam[j] * inv_m);
        const double u = rng.normal();
        const double v = rng.normal();
        buf[j][0] = a * u;
        buf[j][1] = a * v;
        buf[m - j][0] = buf[j][0];
        buf[m - j][1] = -buf[j][1];
    }
    buf[half][0] = std::sqrt(lam[half] * inv_m) * rng.normal();
    buf[half][1] = 0.0;

    FftEngine::forward(buf.get(), m);
    path.values.resize(t_max);
    for (std::size_t k = 0; k < t_max; ++k) path.values[k] = buf[k][0];
    return path;
}

CholeskyOracle::CholeskyOracle(const LrdGaussianModel& model, std::size_t t_max)
    : model_(model), t_max_(t_max) {
    model.validate();
    if (t_max < 1 || t_max > 4096)
        throw std::invalid_argument("CholeskyOracle: t_max must be in [1, 4096]");
    const auto n = static_cast<Eigen::Index>(t_max);
    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double g = autocovariance(model, static_cast<std::uint64_t>(i - j));
            cov(i, j) = g;
            cov(j, i) = g;
        }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
        const double min_eig = es.eigenvalues().minCoeff();
        throw NotPositiveDefinite(
            "fGn covariance Cholesky failed at length " + std::to_string(t_max) +
                "; min eigenvalue " + std::to_string(min_eig),
            min_eig);
    }
    const Eigen::MatrixXd l = llt.matrixL();
    chol_.assign(t_max * t_max, 0.0);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j)
            chol_[static_cast<std::size_t>(i) * t_max + static_cast<std::size_t>(j)] = l(i, j);
}

GaussianPath CholeskyOracle::sample(std::uint64_t path_seed) const {
    GaussianPath path;
    path.model = model_;
    path.seed = path_seed;
    Rng rng(path_seed);
    std::vector<double> z(t_max_);
    for (double& x : z) x = rng.normal();
    path.values.assign(t_max_, 0.0);
    for (std::size_t i = 0; i < t_max_; ++i) {
        double acc = 0.0;
        const double* row = chol_.data() + i * t_max_;
        for (std::size_t j = 0; j <= i; ++j) acc += row[j] * z[j];
        path.values[i] = acc;
    }
    return path;
}

GaussianPath simulate_path_oracle(const LrdGaussianModel& model, std::size_t t_max, std::uint64_t seed) {
    return CholeskyOracle(model, t_max).sample(seed);
}

} // namespace lrdfda
