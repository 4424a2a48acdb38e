#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace lrdfda {

// Counter-based seed derivation: every (study cell, replicate, subject,
// stream) tuple gets its own well-separated seed from one master seed, so
// generation order and thread scheduling never affect the draws.
namespace seed {

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += kGamma;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive(std::uint64_t master, std::initializer_list<std::uint64_t> ids) {
    std::uint64_t s = splitmix64(master);
    for (std::uint64_t id : ids) s = splitmix64(s ^ (id * kGamma + 1));
    return s;
}

// Stream tags keep score draws, noise paths and design jitter independent.
enum Stream : std::uint64_t {
    kScores = 1,
    kNoise = 2,
    kDesign = 3,
};

} // namespace seed

class Rng {
public:
    explicit Rng(std::uint64_t s) : gen_(s) {}

    double normal() { return normal_(gen_); }
    double uniform(double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(gen_);
    }
    std::int64_t uniform_int(std::int64_t a, std::int64_t b) {
        return std::uniform_int_distribution<std::int64_t>(a, b)(gen_);
    }
    double exponential(double rate) {
        return std::exponential_distribution<double>(rate)(gen_);
    }

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace lrdfda
