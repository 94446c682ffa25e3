#pragma once

#include "ptcop/common.hpp"
#include "ptcop/copula.hpp"
#include "ptcop/dnorm.hpp"
#include "ptcop/generators.hpp"
#include "ptcop/rng.hpp"

namespace ptcop {

// GP function H(x) = 1 - ||x||_D on {x <= 0, ||x||_D <= 1}. A quasi-copula;
// for d >= 3 it is not a distribution function globally, hence the hard
// domain guard.
class GPFunction {
  public:
    explicit GPFunction(DNorm norm) : norm_(std::move(norm)) {}

    const DNorm& norm() const { return norm_; }
    MCEstimate eval(const Vector& x, RngStream* rng = nullptr) const;

  private:
    DNorm norm_;
};

// A copula whose upper tail is exactly 1 - ||u - 1||_D for the D-norm of the
// generator. Exact region: all u_i >= 1 + K with K = max(M, -1/c). Samples
// come from V_i = max(M, -U/Z_i); components at or below K are replaced by a
// single shared uniform(-1, K) fill-in, which leaves every margin uniform on
// (0,1). Below the exact region the joint law is whatever this construction
// induces; no CDF claims are made there.
class GpdCopulaModel {
  public:
    // Default M = -1/c maximizes the exact region while keeping the fill-in
    // interval (-1, K) nonempty whenever c > 1.
    explicit GpdCopulaModel(GeneratorSpec gen);
    // clip_m = 0 selects the default -1/c.
    GpdCopulaModel(GeneratorSpec gen, double clip_m);

    const GeneratorSpec& generator() const { return gen_; }
    Index dim() const { return gen_.dim(); }
    double clip_m() const { return m_; }
    double clip_k() const { return k_; }
    // Lower corner of the exact-CDF region, 1 + K in every coordinate.
    Vector exact_region_lower() const;

    // CDF on the exact region; closed form when the generator's norm has one,
    // MC estimate otherwise. Arguments below the region raise
    // outside_upper_region.
    MCEstimate cdf_upper(const Vector& u, RngStream* rng = nullptr,
                         Index n_samples = 100000) const;

    // n x d matrix of copula samples in (0,1)^d.
    Matrix sample(RngStream& rng, Index n) const;

  private:
    GeneratorSpec gen_;
    double m_;
    double k_;
    DNorm norm_;
};

// View a GPD-copula model as a CopulaModel (for use as the "given" C).
CopulaModel as_copula(const GpdCopulaModel& model);

}  // namespace ptcop
