#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string_view>

#include "util/hash.hpp"

namespace kpforge {

// Seeded random stream with hand-rolled draw primitives. std::*_distribution
// output is implementation-defined, so weighted/uniform draws are done here to
// keep pipeline runs reproducible across standard libraries.
class Rng {
public:
    explicit Rng(uint64_t seed) : seed_(seed), engine_(hash::mix(seed)) {}

    // Derive an independent stream, e.g. per stage or per item.
    Rng fork(uint64_t salt) const { return Rng(hash::mix(seed_ ^ hash::mix(salt))); }
    Rng fork(std::string_view label, uint64_t salt = 0) const {
        return fork(hash::fnv1a(label) ^ salt);
    }

    uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of precision.
    double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform index in [0, n).
    size_t next_index(size_t n) {
        if (n == 0) throw std::invalid_argument("next_index: empty range");
        return static_cast<size_t>(next_double() * static_cast<double>(n)) % n;
    }

    bool next_bool(double p_true) { return next_double() < p_true; }

    // Draw an index proportionally to non-negative weights; total must be > 0.
    size_t weighted_index(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        if (!(total > 0.0)) throw std::invalid_argument("weighted_index: zero total weight");
        double u = next_double() * total;
        double cum = 0.0;
        for (size_t i = 0; i < weights.size(); ++i) {
            cum += weights[i];
            if (u < cum) return i;
        }
        // Floating point slack: fall back to the last positive weight.
        for (size_t i = weights.size(); i-- > 0;)
            if (weights[i] > 0.0) return i;
        throw std::invalid_argument("weighted_index: zero total weight");
    }

private:
    uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace kpforge
