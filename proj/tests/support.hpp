#pragma once

// Test-only oracles: enumeration, quadrature and brute-force references that
// stay independent of the library code paths they check.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "ptcop/common.hpp"

namespace oracle {

using ptcop::Index;
using ptcop::Vector;

// E max_i |x_i| Z_i for the unit-vector generator Z = d e_J, J uniform:
// direct enumeration over J.
inline double unit_vector_norm(const Vector& x) {
    const Index d = x.size();
    double sum = 0.0;
    for (Index j = 0; j < d; ++j) {
        double value = 0.0;
        for (Index i = 0; i < d; ++i) {
            const double z = (i == j) ? static_cast<double>(d) : 0.0;
            value = std::max(value, std::abs(x[i]) * z);
        }
        sum += value;
    }
    return sum / static_cast<double>(d);
}

// E max(|x1| 2U1, |x2| 2U2) with U1, U2 independent uniforms: tensor-product
// midpoint quadrature.
inline double scaled_indep_norm2(double x1, double x2, int cells = 2000) {
    const double h = 1.0 / cells;
    double sum = 0.0;
    for (int i = 0; i < cells; ++i) {
        const double u = (i + 0.5) * h;
        for (int j = 0; j < cells; ++j) {
            const double v = (j + 0.5) * h;
            sum += std::max(std::abs(x1) * 2.0 * u, std::abs(x2) * 2.0 * v);
        }
    }
    return sum * h * h;
}

// E min over the same model.
inline double scaled_indep_tail2(double x1, double x2, int cells = 2000) {
    const double h = 1.0 / cells;
    double sum = 0.0;
    for (int i = 0; i < cells; ++i) {
        const double u = (i + 0.5) * h;
        for (int j = 0; j < cells; ++j) {
            const double v = (j + 0.5) * h;
            sum += std::min(std::abs(x1) * 2.0 * u, std::abs(x2) * 2.0 * v);
        }
    }
    return sum * h * h;
}

// Thinned norm for independent U and constant Z = 1:
// E max_j |x_j| 1(U_j > u_j) / (1 - u_j), enumerated over the 2^d indicator
// outcomes.
inline double thinned_norm_indep_constant(const Vector& threshold, const Vector& x) {
    const Index d = x.size();
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
        double prob = 1.0;
        double value = 0.0;
        for (Index j = 0; j < d; ++j) {
            if (mask & (std::uint64_t{1} << j)) {
                prob *= 1.0 - threshold[j];
                value = std::max(value, std::abs(x[j]) / (1.0 - threshold[j]));
            } else {
                prob *= threshold[j];
            }
        }
        total += prob * value;
    }
    return total;
}

// Thinned norm for comonotone U (a single uniform) and constant Z = 1 with a
// common threshold: a single Bernoulli outcome.
inline double thinned_norm_comonotone_constant(double threshold, const Vector& x) {
    double value = 0.0;
    for (Index j = 0; j < x.size(); ++j)
        value = std::max(value, std::abs(x[j]) / (1.0 - threshold));
    return (1.0 - threshold) * value;
}

// Alternating subset sum of a max functional: brute force over all nonempty
// subsets. `norm_of_masked` receives x restricted to the subset (zeros
// elsewhere).
inline double inclusion_exclusion(const Vector& x,
                                  const std::function<double(const Vector&)>& norm_of_masked) {
    const Index d = x.size();
    double total = 0.0;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << d); ++mask) {
        Vector restricted = Vector::Zero(d);
        int bits = 0;
        for (Index j = 0; j < d; ++j)
            if (mask & (std::uint64_t{1} << j)) {
                restricted[j] = x[j];
                ++bits;
            }
        total += (bits % 2 == 1 ? 1.0 : -1.0) * norm_of_masked(restricted);
    }
    return total;
}

// Empirical joint CDF of sample rows at a point.
inline double empirical_cdf(const ptcop::Matrix& samples, const Vector& x) {
    Index count = 0;
    for (Index i = 0; i < samples.rows(); ++i) {
        bool dom = true;
        for (Index j = 0; j < samples.cols(); ++j)
            if (!(samples(i, j) <= x[j])) {
                dom = false;
                break;
            }
        if (dom) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(samples.rows());
}

// Empirical joint survival P(all components > x).
inline double empirical_survival(const ptcop::Matrix& samples, const Vector& x) {
    Index count = 0;
    for (Index i = 0; i < samples.rows(); ++i) {
        bool all = true;
        for (Index j = 0; j < samples.cols(); ++j)
            if (!(samples(i, j) > x[j])) {
                all = false;
                break;
            }
        if (all) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(samples.rows());
}

}  // namespace oracle
