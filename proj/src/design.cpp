#include "lrdfda/design.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lrdfda/errors.hpp"
#include "lrdfda/rng.hpp"

namespace lrdfda {

namespace {

// Spacings from integer time differences over T_max, first gap included
// (t_i0 = 0). Integer arithmetic first keeps equal gaps exactly equal.
void spacing_bounds(const SamplingDesign& d, double& mn, double& mx) {
    mn = std::numeric_limits<double>::infinity();
    mx = 0.0;
    const double tm = static_cast<double>(d.t_max);
    for (const auto& row : d.times) {
        std::int64_t prev = 0;
        for (std::int64_t tt : row) {
            const double gap = static_cast<double>(tt - prev) / tm;
            mn = std::min(mn, gap);
            mx = std::max(mx, gap);
            prev = tt;
        }
    }
}

void finalize(SamplingDesign& d) {
    d.n = static_cast<int>(d.times.size());
    d.t_max = 0;
    d.n_min = d.times.empty() ? 0 : static_cast<int>(d.times.front().size());
    for (const auto& row : d.times) {
        if (!row.empty()) d.t_max = std::max(d.t_max, row.back());
        d.n_min = std::min(d.n_min, static_cast<int>(row.size()));
    }
    d.t.resize(d.times.size());
    const double tm = static_cast<double>(d.t_max);
    for (std::size_t i = 0; i < d.times.size(); ++i) {
        d.t[i].resize(d.times[i].size());
        for (std::size_t j = 0; j < d.times[i].size(); ++j)
            d.t[i][j] = static_cast<double>(d.times[i][j]) / tm;
    }
    double mn, mx;
    spacing_bounds(d, mn, mx);
    d.alpha_n = 1.0 / mn;
    d.beta_n = 1.0 / mx;
}

} // namespace

double SamplingDesign::min_spacing() const {
    double mn, mx;
    spacing_bounds(*this, mn, mx);
    return mn;
}

double SamplingDesign::max_spacing() const {
    double mn, mx;
    spacing_bounds(*this, mn, mx);
    return mx;
}

bool SamplingDesign::all_rows_equal() const {
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] != times[0]) return false;
    return true;
}

SamplingDesign make_equidistant(int n, int n_points) {
    if (n < 1 || n_points < 1)
        throw std::invalid_argument("make_equidistant: n and n_points must be >= 1");
    SamplingDesign d;
    d.generator = "equidistant";
    d.times.assign(static_cast<std::size_t>(n), {});
    for (auto& row : d.times) {
        row.resize(static_cast<std::size_t>(n_points));
        for (int j = 0; j < n_points; ++j) row[static_cast<std::size_t>(j)] = j + 1;
    }
    finalize(d);
    // closed form: all gaps equal 1/N
    d.alpha_n = static_cast<double>(n_points);
    d.beta_n = static_cast<double>(n_points);
    return d;
}

SamplingDesign make_jittered(int n, int n_points, double jitter, std::uint64_t master_seed,
                             int scale) {
    if (n < 1 || n_points < 1)
        throw std::invalid_argument("make_jittered: n and n_points must be >= 1");
    if (!(jitter >= 0.0 && jitter < 0.5))
        throw std::invalid_argument("make_jittered: jitter must lie in [0, 1/2)");
    if (scale < 1) throw std::invalid_argument("make_jittered: scale must be >= 1");
    const auto w = static_cast<std::int64_t>(std::floor(jitter * scale));
    if (static_cast<double>(scale) * (1.0 - 2.0 * jitter) < 1.0)
        throw std::invalid_argument("make_jittered: scale*(1-2*jitter) must be >= 1");

    SamplingDesign d;
    d.generator = "jittered";
    d.times.assign(static_cast<std::size_t>(n), {});
    for (int i = 0; i < n; ++i) {
        Rng rng(seed::derive(master_seed, {seed::kDesign, static_cast<std::uint64_t>(i)}));
        auto& row = d.times[static_cast<std::size_t>(i)];
        row.resize(static_cast<std::size_t>(n_points));
        std::int64_t prev = 0;
        for (int j = 1; j <= n_points; ++j) {
            const std::int64_t center = static_cast<std::int64_t>(j) * scale;
            std::int64_t draw = center;
            if (w > 0) {
                int attempts = 0;
                do {
                    draw = rng.uniform_int(center - w, center + w);
                    if (++attempts > 100)
                        throw DegenerateCell("make_jittered: could not separate adjacent times");
                } while (draw <= prev);
            }
            row[static_cast<std::size_t>(j) - 1] = draw;
            prev = draw;
        }
    }
    finalize(d);
    return d;
}

SamplingDesign make_poisson(int n, int n_points, std::uint64_t master_seed, int scale) {
    if (n < 1 || n_points < 1)
        throw std::invalid_argument("make_poisson: n and n_points must be >= 1");
    SamplingDesign d;
    d.generator = "poisson";
    d.times.assign(static_cast<std::size_t>(n), {});
    for (int i = 0; i < n; ++i) {
        Rng rng(seed::derive(master_seed, {seed::kDesign, static_cast<std::uint64_t>(i)}));
        auto& row = d.times[static_cast<std::size_t>(i)];
        row.resize(static_cast<std::size_t>(n_points));
        double arrival = 0.0;
        for (int j = 0; j < n_points; ++j) {
            arrival += rng.exponential(1.0);
            auto tt = static_cast<std::int64_t>(std::llround(arrival * scale));
            if (tt < 1) tt = 1;
            if (j > 0) tt = std::max(tt, row[static_cast<std::size_t>(j) - 1]); // ties kept
            row[static_cast<std::size_t>(j)] = tt;
        }
    }
    finalize(d);
    return d;
}

DesignReport check_design(const SamplingDesign& design, double b, double d, int q, int k) {
    DesignReport rep;
    spacing_bounds(design, rep.min_spacing, rep.max_spacing);

    rep.t3_ok = true;
    for (std::size_t i = 0; i < design.times.size(); ++i) {
        std::int64_t prev = 0;
        for (std::size_t j = 0; j < design.times[i].size(); ++j) {
            const std::int64_t tt = design.times[i][j];
            if (tt < prev || tt > design.t_max) rep.t3_ok = false;
            const double r = design.t[i][j];
            if (r < 0.0 || r > 1.0 ||
                std::llround(r * static_cast<double>(design.t_max)) != tt)
                rep.t3_ok = false;
            prev = tt;
        }
    }

    if (rep.min_spacing > 0.0) {
        rep.alpha_n = 1.0 / rep.min_spacing;
        rep.beta_n = 1.0 / rep.max_spacing;
        rep.t4_ok = rep.alpha_n >= rep.beta_n && rep.beta_n > 0.0;
    } else {
        rep.alpha_n = std::numeric_limits<double>::infinity();
        rep.beta_n = 1.0 / rep.max_spacing;
        rep.t4_ok = false;
        rep.note += "zero spacing present (tied times); no finite alpha_N certifies (T4). ";
    }
    if (design.generator == "poisson")
        rep.note += "poisson design: (T4) holds only per-realization, nominal rates uncertified. ";

    const double ba = b * rep.alpha_n;
    const double bb = b * rep.beta_n;
    rep.t5_statistic = std::pow(ba, 1.0 + (1.0 - 2.0 * d) * q) * std::pow(bb, -2.0);
    rep.thm1_statistic = std::pow(b, k + 1) * rep.beta_n;
    return rep;
}

std::string DesignReport::text() const {
    std::ostringstream os;
    os << "min spacing " << min_spacing << ", max spacing " << max_spacing
       << ", alpha_N " << alpha_n << ", beta_N " << beta_n << '\n'
       << "(T3) " << (t3_ok ? "ok" : "VIOLATED") << ", (T4) "
       << (t4_ok ? "ok" : "VIOLATED") << '\n'
       << "(T5) statistic (b a)^{1+(1-2d)q}(b b)^{-2} = " << t5_statistic << '\n'
       << "b^{k+1} beta_N = " << thm1_statistic << '\n';
    if (!note.empty()) os << note << '\n';
    return os.str();
}

SequenceReport check_design_sequence(const std::vector<std::pair<int, double>>& nb,
                                     double d, int q, int k) {
    SequenceReport rep;
    for (const auto& [n_points, b] : nb) {
        const double bn = b * static_cast<double>(n_points);
        SequenceRow row;
        row.n_points = n_points;
        row.b = b;
        row.t5_statistic = std::pow(bn, 1.0 + (1.0 - 2.0 * d) * q) * std::pow(bn, -2.0);
        row.thm1_statistic = std::pow(b, k + 1) * static_cast<double>(n_points);
        rep.rows.push_back(row);
    }
    rep.t5_decreasing = rep.rows.size() >= 2;
    rep.thm1_increasing = rep.rows.size() >= 2;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        if (rep.rows[i].t5_statistic >= rep.rows[i - 1].t5_statistic) rep.t5_decreasing = false;
        if (rep.rows[i].thm1_statistic <= rep.rows[i - 1].thm1_statistic) rep.thm1_increasing = false;
    }
    return rep;
}

} // namespace lrdfda
