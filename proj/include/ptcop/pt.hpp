#pragma once

#include <functional>
#include <vector>

#include "ptcop/common.hpp"
#include "ptcop/copula.hpp"
#include "ptcop/gpd_copula.hpp"
#include "ptcop/rng.hpp"
#include "ptcop/stats.hpp"

namespace ptcop {

// Configuration of the multivariate piecing-together construction
//   Y_i = U_i 1(U_i <= u_i) + {u_i + (1-u_i) V_i} 1(U_i > u_i)
// with U from `copula`, V from `gpd`, U and V independent.
struct PTConfig {
    Vector threshold;       // u in (0,1)^d
    CopulaModel copula;     // law of U
    GpdCopulaModel gpd;     // law of V

    PTConfig(Vector threshold_, CopulaModel copula_, GpdCopulaModel gpd_);

    Index dim() const { return threshold.size(); }

    // Lower corner 1 + K' of the region where the PT copula's upper tail is
    // exactly 1 - ||x - 1|| in the thinned norm: K'_j = (1 - u_j) * K. This
    // is the componentwise intersection of the per-coordinate constraints.
    Vector exact_region_lower() const;

    // Verify P(U > u) > 0, by closed form when available and by a pilot
    // Monte Carlo draw otherwise.
    void check_threshold_mass(RngStream& rng, Index pilot_n = 20000) const;
};

// n x d matrix of PT samples. Draw order per call: the U block, then the V
// block.
Matrix pt_sample(const PTConfig& config, RngStream& rng, Index n);

// Thinned-generator norm of Theorem-style piecing together:
//   E max_j |x_j| Z_j 1(U_j > u_j) / (1 - u_j),
// Z from `gen` and U from `copula`, independent.
MCEstimate thinned_dnorm(const GeneratorSpec& gen, const CopulaModel& copula,
                         const Vector& threshold, const Vector& x, Index n_samples,
                         RngStream& rng);

// Generalized scale variant used by the empirical-copula version, where the
// indicator threshold u_j and the normalizing mass s_j = P(U_j > u_j) differ.
MCEstimate thinned_dnorm_scaled(const GeneratorSpec& gen, const CopulaModel& copula,
                                const Vector& threshold, const Vector& exceed_prob,
                                const Vector& x, Index n_samples, RngStream& rng);

// Apply quantile functions column by column; the result is on data scale.
using QuantileFunction = std::function<double(double)>;
Matrix inject_margins(const Matrix& copula_samples,
                      const std::vector<QuantileFunction>& quantiles);

// ---------------------------------------------------------------------------
// Univariate piecing together.

// GPD tail Q_{gamma,mu,sigma}: shape gamma (0 = exponential), location mu,
// scale sigma > 0.
struct GpdTail {
    double gamma = 0.0;
    double mu = 0.0;
    double sigma = 1.0;
};

double gpd_cdf(const GpdTail& tail, double x);
double gpd_quantile(const GpdTail& tail, double p);

// F*(x) = F(x) below x0 and F(x0) + (1 - F(x0)) Q(x) above; with mu = x0 the
// junction is continuous.
class UnivariatePT {
  public:
    UnivariatePT(std::function<double(double)> base_cdf, double x0, GpdTail tail);

    double threshold() const { return x0_; }
    double base_at_threshold() const { return f0_; }
    const GpdTail& tail() const { return tail_; }

    double cdf(double x) const;
    // Inverse of the pieced CDF through the tail; levels at or below F(x0)
    // raise below_threshold_level.
    double high_quantile(double p) const;

  private:
    std::function<double(double)> base_cdf_;
    double x0_;
    GpdTail tail_;
    double f0_;
};

double univariate_pt(const UnivariatePT& pt, double x);
double high_quantile(const UnivariatePT& pt, double p);

// Maximum likelihood fit of (gamma, sigma) to the excesses above x0, with a
// probability-weighted-moments fallback when the likelihood search fails.
// mu is pinned to x0. Requires at least 30 exceedances.
struct GpdFitResult {
    GpdTail tail;
    Index n_exceedances = 0;
    bool used_pwm = false;
};

GpdFitResult fit_gpd_tail(const Vector& data, double x0);

// Convenience: empirical base CDF below x0, fitted GPD tail above.
UnivariatePT make_empirical_pt(const Vector& data, double x0);

}  // namespace ptcop
