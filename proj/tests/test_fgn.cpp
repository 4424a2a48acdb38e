#include <doctest.h>

#include <cmath>
#include <vector>

#include "lrdfda/errors.hpp"
#include "lrdfda/fgn.hpp"
#include "lrdfda/stats.hpp"

using namespace lrdfda;

TEST_CASE("autocovariance closed form") {
    LrdGaussianModel m{0.2};
    CHECK(autocovariance(m, 0) == 1.0);
    CHECK(autocovariance(m, 1) == doctest::Approx(0.31950791077289426).epsilon(1e-14));
    CHECK(m.hurst() == doctest::Approx(0.7));
    CHECK(m.c_z() == doctest::Approx(0.7 * 0.4).epsilon(1e-14));

    LrdGaussianModel m3{0.3};
    const double lag = 1e4;
    const double ratio = autocovariance(m3, 10000) / (m3.c_z() * std::pow(lag, 2 * 0.3 - 1.0));
    CHECK(std::abs(ratio - 1.0) < 0.01);

    CHECK_THROWS_AS(autocovariance(LrdGaussianModel{0.6}, 1), std::invalid_argument);
}

TEST_CASE("partial-sum identity: sum (m-|v|) gamma(v) = m^{2H}") {
    for (double d : {0.1, 0.3, 0.45}) {
        LrdGaussianModel model{d};
        for (int m : {2, 10, 100}) {
            double acc = 0.0;
            for (int v = -(m - 1); v <= m - 1; ++v)
                acc += (m - std::abs(v)) * autocovariance(model, static_cast<std::uint64_t>(std::abs(v)));
            const double want = std::pow(m, 2.0 * model.hurst());
            CHECK(acc == doctest::Approx(want).epsilon(1e-8));
        }
    }
}

TEST_CASE("simulate_path: degenerate and reproducibility cases") {
    LrdGaussianModel m{0.3};
    const auto p1 = simulate_path(m, 1, 7);
    CHECK(p1.length() == 1);
    const auto a = simulate_path(m, 64, 123);
    const auto b = simulate_path(m, 64, 123);
    CHECK(a.values == b.values); // bit-identical for the same seed
    const auto c = simulate_path(m, 64, 124);
    CHECK(a.values != c.values);
    CHECK_THROWS_AS(a.at_time(0), IndexOutOfRange);
    CHECK_THROWS_AS(a.at_time(65), IndexOutOfRange);
    CHECK(a.at_time(1) == a.values[0]);
}

TEST_CASE("circulant embedding eigenvalues are nonnegative for fGn") {
    for (double d : {0.05, 0.25, 0.45, 0.49}) {
        const auto lam = circulant_embedding_eigenvalues(LrdGaussianModel{d}, 1024);
        for (double l : lam) CHECK(l >= 0.0);
    }
    CHECK(circulant_embedding_size(64) == 128);
    CHECK(circulant_embedding_size(2) == 2);
    CHECK(circulant_embedding_size(16384) == 32768);
}

TEST_CASE("oracle 2x2 covariance by construction") {
    LrdGaussianModel m{0.37};
    CholeskyOracle oracle(m, 2);
    // L applied to iid normals reproduces [[1, g1],[g1, 1]] exactly:
    // var of second coordinate = L10^2 + L11^2 = 1, cov = L10.
    const double g1 = autocovariance(m, 1);
    std::vector<double> v0, v1;
    for (int r = 0; r < 20000; ++r) {
        const auto p = oracle.sample(1000 + static_cast<std::uint64_t>(r));
        v0.push_back(p.values[0]);
        v1.push_back(p.values[1]);
    }
    CHECK(stats::covariance(v0, v1) == doctest::Approx(g1).epsilon(0.08));
    CHECK(stats::variance(v0) == doctest::Approx(1.0).epsilon(0.08));
}

TEST_CASE("circulant path covariance matches the exact fGn covariance") {
    LrdGaussianModel m{0.3};
    const std::size_t len = 64;
    const int reps = 4000;
    std::vector<std::vector<double>> sums(len, std::vector<double>(len, 0.0));
    for (int r = 0; r < reps; ++r) {
        const auto p = simulate_path(m, len, 5000 + static_cast<std::uint64_t>(r));
        for (std::size_t i = 0; i < len; ++i)
            for (std::size_t j = i; j < len; ++j) sums[i][j] += p.values[i] * p.values[j];
    }
    // spot-check a few entries and stationarity across positions
    auto cov = [&](std::size_t i, std::size_t j) { return sums[i][j] / reps; };
    const double se = std::sqrt(2.0 / reps); // crude bound for unit-variance Gaussians
    for (std::size_t lag : {0u, 1u, 5u, 30u}) {
        const double want = autocovariance(m, lag);
        CHECK(std::abs(cov(0, lag) - want) < 4 * se);
        CHECK(std::abs(cov(20, 20 + lag) - want) < 4 * se);
    }
}

TEST_CASE("circulant and oracle paths agree in distribution") {
    LrdGaussianModel m{0.3};
    const std::size_t len = 64;
    const int reps = 6000;
    CholeskyOracle oracle(m, len);
    std::vector<double> mean_circ, mean_orac; // path means as a summary statistic
    for (int r = 0; r < reps; ++r) {
        const auto a = simulate_path(m, len, 31000 + static_cast<std::uint64_t>(r));
        const auto b = oracle.sample(77000 + static_cast<std::uint64_t>(r));
        double sa = 0, sb = 0;
        for (std::size_t i = 0; i < len; ++i) {
            sa += a.values[i];
            sb += b.values[i];
        }
        mean_circ.push_back(sa / len);
        mean_orac.push_back(sb / len);
    }
    // var of the path mean is sum gamma over the window / len^2 = len^{2H-2}
    const double want = std::pow(static_cast<double>(len), 2 * m.hurst() - 2.0);
    const double tol = 4.0 * want * std::sqrt(2.0 / reps);
    CHECK(std::abs(stats::variance(mean_circ) - want) < tol);
    CHECK(std::abs(stats::variance(mean_orac) - want) < tol);
}

TEST_CASE("oracle partial-sum variance slope at d=0.45") {
    LrdGaussianModel m{0.45};
    std::vector<double> log_len, log_var;
    for (std::size_t len : {64u, 128u, 256u}) {
        CholeskyOracle oracle(m, len);
        std::vector<double> means;
        for (int r = 0; r < 4000; ++r) {
            const auto p = oracle.sample(len * 100000 + static_cast<std::uint64_t>(r));
            double s = 0;
            for (double v : p.values) s += v;
            means.push_back(s / static_cast<double>(len));
        }
        log_len.push_back(std::log(static_cast<double>(len)));
        log_var.push_back(std::log(stats::variance(means)));
    }
    const auto fit = stats::ols(log_len, log_var);
    CHECK(std::abs(fit.slope - (2 * 0.45 - 1.0)) < 0.1);
}

TEST_CASE("eigenvalue check rejects a non-embeddable circulant row") {
    // eigenvalues of circ([1, 0.9, 0, ..., 0, 0.9]) are 1 + 1.8 cos(2 pi j / m),
    // negative near j = m/2
    std::vector<double> row(16, 0.0);
    row[0] = 1.0;
    row[1] = 0.9;
    row[15] = 0.9;
    CHECK_THROWS_AS(circulant_eigenvalue_check(row), EmbeddingFailure);

    // fGn rows stay clean even near the d -> 1/2 boundary
    const auto lam = circulant_embedding_eigenvalues(LrdGaussianModel{0.499}, 4096);
    for (double l : lam) CHECK(l >= 0.0);
}
