#pragma once

#include <cstdint>

#include "ptcop/common.hpp"

namespace ptcop {

// SplitMix64 (Vigna, public domain). Used only to expand seeds into state.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

// xoshiro256++ stream addressed by (seed, stream). Streams with distinct
// indices are derived through independent SplitMix64 expansions, so adding a
// task never perturbs the draws of earlier task indices. All sampling in this
// library flows through this class; none of it touches <random> distribution
// adaptors, which are implementation-defined and would break byte-level
// reproducibility across toolchains.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0) {
        SplitMix64 sm(seed ^ (0x6a09e667f3bcc909ULL + 0x9e3779b97f4a7c15ULL * stream));
        s_[0] = sm.next();
        s_[1] = sm.next();
        s_[2] = sm.next();
        s_[3] = sm.next();
        // all-zero state is the one invalid xoshiro seed
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[3] = 0x9e3779b97f4a7c15ULL;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on the open interval (0, 1): 53-bit mantissa centered on the
    // cell, so 0 and 1 are unreachable and log(u01()) is always finite.
    double u01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform on (lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    // Standard normal via Box-Muller (cosine branch only; no cached spare, so
    // the draw count per call is fixed).
    double normal() {
        const double r = std::sqrt(-2.0 * std::log(u01()));
        const double a = 6.283185307179586476925286766559 * u01();
        return r * std::cos(a);
    }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t uniform_index(std::uint64_t n) {
        require(n > 0, ErrorCode::invalid_parameter, "uniform_index needs n > 0");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return x % n;
    }

    // Gamma(shape, 1) via Marsaglia-Tsang, with the shape<1 boost.
    double gamma(double shape) {
        require(shape > 0.0, ErrorCode::invalid_parameter, "gamma shape must be positive");
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            return g * std::pow(u01(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            const double u = u01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    // Positive alpha-stable, alpha in (0, 1] (Chambers-Mallows-Stuck).
    double positive_stable(double alpha) {
        require(alpha > 0.0 && alpha <= 1.0, ErrorCode::invalid_parameter,
                "positive_stable needs alpha in (0, 1]");
        if (alpha == 1.0) return 1.0;
        const double pi = 3.14159265358979323846;
        const double theta = pi * u01();
        const double w = -std::log(u01());
        const double a = std::sin(alpha * theta) / std::pow(std::sin(theta), 1.0 / alpha);
        const double b = std::pow(std::sin((1.0 - alpha) * theta) / w, (1.0 - alpha) / alpha);
        return a * b;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
};

}  // namespace ptcop
