#pragma once

#include <span>
#include <vector>

namespace lrdfda {
namespace stats {

double mean(std::span<const double> x);
// unbiased sample variance (n-1)
double variance(std::span<const double> x);
double covariance(std::span<const double> x, std::span<const double> y);

struct OlsFit {
    double slope = 0;
    double intercept = 0;
    double slope_se = 0;
    double r2 = 0;
    std::vector<double> residuals;
};
// least squares of y on x with residual diagnostics
OlsFit ols(std::span<const double> x, std::span<const double> y);

double normal_cdf(double z);

// Kolmogorov-Smirnov against a fully specified N(0,1) null.
struct KsResult {
    double d = 0;
    double p_value = 0;
};
KsResult ks_test_normal(std::vector<double> sample);

} // namespace stats
} // namespace lrdfda
