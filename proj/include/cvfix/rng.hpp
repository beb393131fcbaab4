#pragma once

#include <cstdint>
#include <random>

#include "cvfix/complex_order.hpp"

namespace cvfix {

/// Deterministic sample source for the checkers.
///
/// Wraps std::mt19937_64 but maps raw 64-bit draws to doubles explicitly
/// (53-bit mantissa trick) instead of going through distribution objects,
/// whose output is implementation-defined.  Identical seeds therefore yield
/// identical sample streams on any conforming toolchain, which keeps check
/// reports and recorded witnesses reproducible.
class SampleRng {
public:
    explicit SampleRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform draw in [0, 1).
    double canonical() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * canonical(); }

    /// Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(static_cast<double>(hi - lo + 1) * canonical());
    }

    bool coin() { return (engine_() & 1u) != 0u; }

    /// Uniform complex point in the square [lo, hi]^2 (default box 10).
    ComplexScalar complex_in_box(double lo = -10.0, double hi = 10.0) {
        double re = uniform(lo, hi);
        double im = uniform(lo, hi);
        return {re, im};
    }

    /// Cone element with components in [0, hi].
    ComplexScalar cone_point(double hi = 10.0) {
        return {uniform(0.0, hi), uniform(0.0, hi)};
    }

    /// Nonzero cone element (redraws until modulus clears a small floor).
    ComplexScalar cone_point_nonzero(double hi = 10.0) {
        for (;;) {
            ComplexScalar z = cone_point(hi);
            if (z.modulus() > 1e-6) return z;
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace cvfix
