#pragma once

#include <stdexcept>
#include <string>

namespace lrdfda {

// Error taxonomy. Preconditions that indicate caller bugs use
// std::invalid_argument; the named types below are runtime/numerical
// conditions callers may want to catch individually.

struct EmbeddingFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotPositiveDefinite : std::runtime_error {
    double min_eigenvalue;
    NotPositiveDefinite(const std::string& msg, double min_eig)
        : std::runtime_error(msg), min_eigenvalue(min_eig) {}
};

struct QuadratureUnstable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IndexOutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct DegenerateCell : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OrderTooHigh : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct CertificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BandwidthTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BandwidthTooLarge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InfeasibleWindow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace lrdfda
