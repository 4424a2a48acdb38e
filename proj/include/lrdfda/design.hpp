#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lrdfda {

// Irregular integer-time sampling design: per-subject nondecreasing times
// T_ij in N_+, rescaled t_ij = T_ij / T_max. Spacings include the first gap
// t_i1 - t_i0 with t_i0 = 0. alpha_n/beta_n are certified from realized
// spacings (alpha = 1/min, beta = 1/max), not from nominal generator rates.
struct SamplingDesign {
    int n = 0;
    std::vector<std::vector<std::int64_t>> times; // T_ij
    std::vector<std::vector<double>> t;           // T_ij / T_max
    std::int64_t t_max = 0;
    int n_min = 0;       // N = min_i N_i
    double alpha_n = 0;  // 1 / min spacing
    double beta_n = 0;   // 1 / max spacing
    std::string generator;

    double min_spacing() const;
    double max_spacing() const;
    bool all_rows_equal() const;
};

SamplingDesign make_equidistant(int n, int n_points);

// T_ij uniform on the integer cell around j*scale of half-width
// floor(jitter*scale); jitter < 1/2 keeps cells disjoint. scale*(1-2*jitter)
// must be >= 1 or cells would touch (DegenerateCell after 100 retries).
SamplingDesign make_jittered(int n, int n_points, double jitter, std::uint64_t seed,
                             int scale = 10);

// Poisson arrivals rounded onto the integer grid. Violates (T4) with positive
// probability (ties are kept); check_design reports this honestly.
SamplingDesign make_poisson(int n, int n_points, std::uint64_t seed, int scale = 10);

struct DesignReport {
    double min_spacing = 0, max_spacing = 0;
    double alpha_n = 0, beta_n = 0;
    bool t3_ok = false; // monotone, within [0, T_max], t = T/T_max
    bool t4_ok = false; // positive finite spacings, alpha >= beta
    double t5_statistic = 0;   // (b alpha)^{1+(1-2d)q} (b beta)^{-2}
    double thm1_statistic = 0; // b^{k+1} beta_N (Theorem 1 needs this -> inf)
    std::string note;
    std::string text() const;
};

DesignReport check_design(const SamplingDesign& design, double b, double d, int q, int k);

// (T5) and the b^{k+1} beta_N precondition along a sequence of (N, b) pairs
// under the equidistant convention alpha = beta = N.
struct SequenceRow {
    int n_points;
    double b;
    double t5_statistic;
    double thm1_statistic;
};
struct SequenceReport {
    std::vector<SequenceRow> rows;
    bool t5_decreasing = false;
    bool thm1_increasing = false;
};
SequenceReport check_design_sequence(const std::vector<std::pair<int, double>>& nb,
                                     double d, int q, int k);

} // namespace lrdfda
