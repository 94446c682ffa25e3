#pragma once

#include "ptcop/common.hpp"
#include "ptcop/copula.hpp"
#include "ptcop/gpd_copula.hpp"
#include "ptcop/rng.hpp"

namespace ptcop {

// Standardized ranks R_ij = (1/(n+1)) * #{k : X_kj <= X_ij}. Ties follow the
// literal counting definition, so tied observations share one rank value.
class RankMatrix {
  public:
    explicit RankMatrix(Matrix ranks);

    Index rows() const { return ranks_.rows(); }
    Index cols() const { return ranks_.cols(); }
    const Matrix& values() const { return ranks_; }

    // Empirical copula C_n(v) = (1/n) #{i : R_i <= v componentwise}.
    double cdf(const Vector& v) const;

    // u*_j = P_n(U*_j <= u_j), the per-component rank mass at or below u.
    Vector threshold_mass(const Vector& u) const;

    // #{i : R_i > u componentwise}.
    Index joint_exceedances(const Vector& u) const;

  private:
    Matrix ranks_;
};

RankMatrix standardized_ranks(const Matrix& data);

// The empirical copula as a samplable model: uniform resampling of rank rows.
CopulaModel as_copula(const RankMatrix& ranks);

// Empirical-copula piecing together:
//   Y*_i = U*_i 1(U*_i <= u_i) + {u*_i + (1-u*_i) V_i} 1(U*_i > u_i)
// with U* resampled from the rank rows and V from the GPD-copula model.
Matrix empirical_pt_sample(const RankMatrix& ranks, const GpdCopulaModel& gpd,
                           const Vector& threshold, RngStream& rng, Index n_out);

// Thinned norm of the empirical variant: indicator at u_j, scaled by 1 - u*_j.
MCEstimate empirical_thinned_dnorm(const GeneratorSpec& gen, const RankMatrix& ranks,
                                   const Vector& threshold, const Vector& x,
                                   Index n_samples, RngStream& rng);

}  // namespace ptcop
