#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace mcrmhmc {

// Deterministic RNG stream.  Distributions are hand-rolled on top of
// mt19937_64 so that draws are reproducible independent of the standard
// library's (unspecified) distribution algorithms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Streams for independent chains are split by chain index.
    static Rng for_chain(std::uint64_t seed, int chain_index) {
        return Rng(seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(chain_index + 1));
    }

    // Uniform on (0, 1), never returns 0 or 1.
    double uniform() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Uniform on the integers {a, ..., b} inclusive.
    int uniform_int(int a, int b) {
        const auto n = static_cast<std::uint64_t>(b - a) + 1;
        return a + static_cast<int>(gen_() % n);
    }

    // Box-Muller without state caching.
    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    void fill_normal(std::span<double> out) {
        for (double& v : out) v = normal();
    }

    // Marsaglia-Tsang; requires shape >= 1 (all uses here satisfy that).
    double gamma(double shape, double rate) {
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
        }
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

  private:
    std::mt19937_64 gen_;
};

}  // namespace mcrmhmc
