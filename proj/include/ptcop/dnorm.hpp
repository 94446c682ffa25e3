#pragma once

#include <optional>
#include <string>

#include "ptcop/common.hpp"
#include "ptcop/generators.hpp"
#include "ptcop/rng.hpp"

namespace ptcop {

// A norm of the form E max_i |x_i| Z_i, either in closed form (sup-, 1- or
// theta-norm) or Monte-Carlo-backed by a generator. Closed-form evaluation is
// exact; the MC backend reports an estimate with its standard error and needs
// an RNG stream.
class DNorm {
  public:
    enum class Backend { sup, one, theta, monte_carlo };

    static DNorm sup(Index d);
    static DNorm one(Index d);
    static DNorm theta(Index d, double exponent);
    static DNorm monte_carlo(GeneratorSpec gen, Index n_samples = 100000);

    Index dim() const { return dim_; }
    Backend backend() const { return backend_; }
    bool closed_form() const { return backend_ != Backend::monte_carlo; }
    double theta_exponent() const;
    const GeneratorSpec& generator() const;
    Index mc_samples() const { return mc_samples_; }

  private:
    DNorm() = default;

    Backend backend_ = Backend::sup;
    Index dim_ = 0;
    double theta_ = 1.0;
    Index mc_samples_ = 0;
    std::optional<GeneratorSpec> gen_;
};

// The natural DNorm of a generator: closed form where the family pins one
// down, Monte Carlo otherwise.
DNorm natural_dnorm(const GeneratorSpec& gen, Index n_samples = 100000);

// ||x||_D. rng may be null for closed-form backends.
MCEstimate eval_dnorm(const DNorm& norm, const Vector& x, RngStream* rng = nullptr);

// Pickands dependence function: the norm at (t_1,...,t_{d-1}, 1 - sum t_i).
// t must lie in the unit simplex.
MCEstimate pickands(const DNorm& norm, const Vector& t, RngStream* rng = nullptr);

// Tail copula lambda(x) = E min_i |x_i| Z_i for x <= 0, by Monte Carlo.
MCEstimate tail_copula(const GeneratorSpec& gen, const Vector& x, Index n_samples,
                       RngStream& rng);

// Same quantity through the min-max identity: the alternating sum of
// subset-restricted norms over all nonempty subsets. 2^d enumeration, capped
// at d = 20. The returned standard error combines the per-subset MC errors;
// it is 0 for closed-form norms.
MCEstimate tail_copula_via_inclusion_exclusion(const DNorm& norm, const Vector& x,
                                               RngStream* rng = nullptr);

}  // namespace ptcop
