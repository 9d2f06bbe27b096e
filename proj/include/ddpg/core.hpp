#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>

namespace ddpg {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Single RNG type used everywhere; seeds are mixed through splitmix64 so that
// small consecutive user seeds (0,1,2,...) produce unrelated streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    // Derive an independent stream, e.g. per-component or per-episode.
    Rng fork(std::uint64_t salt) { return Rng(splitmix64(gen_() ^ salt)); }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen_);
    }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
    // Uniform integer in [0, n).
    std::uint64_t index(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(gen_);
    }
    std::mt19937_64& gen() { return gen_; }

private:
    std::mt19937_64 gen_;
};

// Round-trip-stable float formatting shared by every CSV/JSON writer, so that
// identical runs produce byte-identical output files.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace ddpg
