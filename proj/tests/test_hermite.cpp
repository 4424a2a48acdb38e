#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lrdfda/errors.hpp"
#include "lrdfda/hermite.hpp"
#include "lrdfda/rng.hpp"
#include "lrdfda/stats.hpp"

using namespace lrdfda;

TEST_CASE("probabilists' Hermite values") {
    CHECK(hermite_eval(0, 1.7) == 1.0);
    CHECK(hermite_eval(1, 1.7) == 1.7);
    for (double z : {-2.0, -0.3, 0.0, 1.1, 2.5})
        CHECK(hermite_eval(2, z) == doctest::Approx(z * z - 1.0).epsilon(1e-14));
    CHECK(hermite_eval(3, 2.0) == doctest::Approx(2.0).epsilon(1e-14)); // 8 - 6
}

TEST_CASE("Gauss-Hermite rule: orthogonality under the normal weight") {
    const auto& rule = GaussHermiteRule::get(128);
    double w_sum = 0.0;
    for (double w : rule.weights) w_sum += w;
    CHECK(w_sum == doctest::Approx(1.0).epsilon(1e-13));

    const double h2h3 = rule.integrate(
        [](double z) { return hermite_eval(2, z) * hermite_eval(3, z); });
    CHECK(std::abs(h2h3) < 1e-12);
    const double h3sq = rule.integrate([](double z) {
        const double h = hermite_eval(3, z);
        return h * h;
    });
    CHECK(h3sq == doctest::Approx(6.0).epsilon(1e-10)); // 3!
}

namespace {

// Vanishing coefficients: raw values to 1e-12 at low k; for k > 12 double
// precision only supports zero-ness on the Parseval scale c_k/sqrt(k!)
// (the scale every variance/covariance formula uses), where the quadrature
// cancellation noise sits below 1e-14.
void check_zero_coeff(const HermiteCoefficients& c, int k) {
    double sqrt_fact = 1.0;
    for (int j = 2; j <= k; ++j) sqrt_fact *= std::sqrt(static_cast<double>(j));
    if (k <= 10)
        CHECK(std::abs(c.at(k)) < 1e-12);
    else
        CHECK(std::abs(c.at(k)) / sqrt_fact < 1e-14);
}

} // namespace

TEST_CASE("coefficient recovery: identity, H2, mixed") {
    const auto id = SubordinationMap::identity();
    const auto c_id = hermite_coefficients(id, 0.5);
    CHECK(c_id.rank == 1);
    CHECK(c_id.at(1) == doctest::Approx(1.0).epsilon(1e-12));
    for (int k = 2; k <= 20; ++k) check_zero_coeff(c_id, k);
    CHECK(c_id.at(0) == 0.0);

    const auto h2 = SubordinationMap::hermite2();
    const auto c_h2 = hermite_coefficients(h2, 0.25);
    CHECK(c_h2.rank == 2);
    CHECK(c_h2.at(2) == doctest::Approx(2.0).epsilon(1e-10)); // E[H_2^2] = 2!
    CHECK(std::abs(c_h2.at(1)) < 1e-10);
    CHECK(std::abs(c_h2.at(3)) < 1e-10);

    // a(t) z + b(t) (z^2-1): c_1 = a(t), c_2 = 2 b(t) under c_k = E[G H_k]
    const auto mixed = SubordinationMap::linear_combo(
        SmoothFunction::polynomial({1.0, 0.5}), SmoothFunction::constant(0.3));
    for (double t : {0.0, 0.5, 1.0}) {
        const auto c = hermite_coefficients(mixed, t);
        CHECK(c.rank == 1);
        CHECK(c.at(1) == doctest::Approx(1.0 + 0.5 * t).epsilon(1e-12));
        CHECK(c.at(2) == doctest::Approx(2.0 * 0.3).epsilon(1e-10));
        for (int k = 3; k <= 20; ++k) check_zero_coeff(c, k);
    }
}

TEST_CASE("rank detection is stable in the node count") {
    for (int nodes : {64, 128}) {
        CHECK(detect_rank(SubordinationMap::identity(), 20, nodes) == 1);
        CHECK(detect_rank(SubordinationMap::hermite2(), 20, nodes) == 2);
        CHECK(detect_rank(SubordinationMap::exp_marginal(SmoothFunction::constant(1.0)), 20,
                          nodes) == 1);
    }
}

TEST_CASE("exponential-marginal transform: centering, Parseval, variance") {
    const auto g = SubordinationMap::exp_marginal(SmoothFunction::polynomial({1.0, 0.5}));
    for (double t : {0.0, 0.4, 1.0}) {
        const double theta = 1.0 + 0.5 * t;
        // centered mean is 0 by the exact theta(t) shift
        const auto& rule = GaussHermiteRule::get(256);
        CHECK(std::abs(rule.integrate([&](double z) { return g(z, t); })) < 1e-10);
        // E[G^2] = var of Exponential(mean theta) = theta^2
        CHECK(g.l2_norm_squared(t) == doctest::Approx(theta * theta).epsilon(1e-8));
        // Parseval within 1e-6 relative at K_max = 20
        const auto c = hermite_coefficients(g, t);
        CHECK(c.rank == 1);
        CHECK(c.variance() == doctest::Approx(theta * theta).epsilon(1e-6));
    }
}

TEST_CASE("quadrature instability is detected for rough transforms") {
    const auto rough = SubordinationMap::custom(
        "sign", [](double z, double) { return z >= 0.0 ? 1.0 : -1.0; });
    CHECK_THROWS_AS(hermite_coefficients(rough, 0.5), QuadratureUnstable);
}

TEST_CASE("nodes precondition") {
    CHECK_THROWS_AS(hermite_coefficients(SubordinationMap::identity(), 0.5, 20, 30),
                    std::invalid_argument);
}

TEST_CASE("custom transforms are centered by quadrature") {
    // z^2 has mean 1; auto-centering must reproduce H_2
    const auto g = SubordinationMap::custom("square", [](double z, double) { return z * z; });
    const auto c = hermite_coefficients(g, 0.3);
    CHECK(c.rank == 2);
    CHECK(c.at(2) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(g(1.5, 0.3) == doctest::Approx(1.5 * 1.5 - 1.0).epsilon(1e-10));
}

TEST_CASE("subordinate: identity passthrough and index guards") {
    LrdGaussianModel m{0.3};
    const auto path = simulate_path(m, 32, 99);
    const std::vector<std::int64_t> times{1, 5, 32};
    const std::vector<double> ts{1.0 / 32, 5.0 / 32, 1.0};
    const auto id = SubordinationMap::identity();
    const auto eps = subordinate(id, path, times, ts);
    CHECK(eps.size() == 3);
    CHECK(eps[0] == path.values[0]);
    CHECK(eps[2] == path.values[31]);
    const std::vector<std::int64_t> bad{1, 40};
    const std::vector<double> bad_t{0.1, 0.9};
    CHECK_THROWS_AS(subordinate(id, path, bad, bad_t), IndexOutOfRange);
}

TEST_CASE("H2 errors: moments and Mehler lag covariance") {
    // iid draws: mean 0, variance sum c_k^2/k! = 4/2 = 2
    const auto h2 = SubordinationMap::hermite2();
    Rng rng(2024);
    const int n = 100000;
    std::vector<double> eps(n);
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        eps[static_cast<std::size_t>(i)] = h2(z, 0.0);
    }
    const double se_mean = std::sqrt(2.0 / n);
    CHECK(std::abs(stats::mean(eps)) < 3 * se_mean);
    const double var_se = std::sqrt(56.0 / n); // var(H2^2) = E[H2^4] - 4 = 60 - 4
    CHECK(std::abs(stats::variance(eps) - 2.0) < 3 * var_se);

    // lag covariance on fGn paths: cov = 2 gamma^2(v) (Mehler / Appendix display)
    LrdGaussianModel m{0.35};
    const std::size_t len = 128;
    const int paths = 4000;
    for (std::uint64_t lag : {1u, 4u}) {
        std::vector<double> per_path;
        for (int r = 0; r < paths; ++r) {
            const auto p = simulate_path(m, len, 40000 + static_cast<std::uint64_t>(r));
            double acc = 0.0;
            int cnt = 0;
            for (std::size_t j = 0; j + lag < len; ++j) {
                acc += h2(p.values[j], 0.0) * h2(p.values[j + lag], 0.0);
                ++cnt;
            }
            per_path.push_back(acc / cnt);
        }
        const double want = 2.0 * std::pow(autocovariance(m, lag), 2.0);
        const double se = std::sqrt(stats::variance(per_path) / paths);
        INFO("lag ", lag, " want ", want, " got ", stats::mean(per_path), " se ", se);
        CHECK(std::abs(stats::mean(per_path) - want) < 4 * se);
    }
}

TEST_CASE("asymptotic error covariance") {
    LrdGaussianModel m{0.35};
    const auto id_coeffs = hermite_coefficients(SubordinationMap::identity(), 0.5);
    // identity: sum reduces to gamma(lag) exactly
    for (std::uint64_t lag : {1u, 7u, 100u})
        CHECK(asymptotic_error_covariance(id_coeffs, id_coeffs, m, lag) ==
              doctest::Approx(autocovariance(m, lag)).epsilon(1e-12));

    // H2, d = 0.35: ratio to 2 c_z^2 lag^{2(2d-1)} within 2% at lag 1000
    const auto h2_coeffs = hermite_coefficients(SubordinationMap::hermite2(), 0.5);
    const double got = asymptotic_error_covariance(h2_coeffs, h2_coeffs, m, 1000);
    const double asym = 2.0 * m.c_z() * m.c_z() * std::pow(1000.0, 2.0 * (2 * 0.35 - 1.0));
    CHECK(got / asym == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("Parseval holds for every built-in transform at K_max = 20") {
    const std::vector<SubordinationMap> maps = {
        SubordinationMap::identity(),
        SubordinationMap::hermite2(),
        SubordinationMap::linear_combo(SmoothFunction::polynomial({1.0, 0.5}),
                                       SmoothFunction::polynomial({0.3, -0.1})),
        SubordinationMap::exp_marginal(SmoothFunction::polynomial({1.0, 0.5})),
    };
    for (const auto& map : maps)
        for (double t : {0.0, 0.5, 1.0}) {
            const auto c = hermite_coefficients(map, t);
            const double norm2 = map.l2_norm_squared(t, 256);
            INFO(map.name(), " at t=", t);
            CHECK(c.variance() == doctest::Approx(norm2).epsilon(1e-6));
            CHECK(c.variance() <= norm2 * (1.0 + 1e-12)); // Bessel
        }
}

TEST_CASE("(T2) condition") {
    CHECK(t2_holds(0.3, 1));
    CHECK(t2_holds(0.4, 2));
    CHECK_FALSE(t2_holds(0.2, 2)); // d < 1/2 - 1/(2q) = 1/4
    CHECK_FALSE(t2_holds(0.55, 1));
}
