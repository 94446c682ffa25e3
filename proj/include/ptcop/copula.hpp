#pragma once

#include <memory>
#include <optional>
#include <string>

#include "ptcop/common.hpp"
#include "ptcop/rng.hpp"

namespace ptcop {

namespace detail {
class CopulaImpl;
}

// A samplable copula on [0,1]^d. Models are immutable and cheap to copy;
// sampling is pure given an RNG stream. cdf() returns the exact distribution
// function where the family has one (nullopt otherwise), so callers fall back
// to Monte Carlo when it is absent.
class CopulaModel {
  public:
    static CopulaModel independence(Index d);
    static CopulaModel comonotone(Index d);
    static CopulaModel clayton(Index d, double theta);
    static CopulaModel gumbel(Index d, double theta);
    // Gaussian copula from a full correlation matrix.
    static CopulaModel gaussian(Matrix correlation);
    static CopulaModel gaussian_exchangeable(Index d, double rho);

    Index dim() const;
    const std::string& family() const;

    // n x d matrix, one sample per row.
    Matrix sample(RngStream& rng, Index n) const;

    std::optional<double> cdf(const Vector& u) const;

    // P(U > v) componentwise; exact for families that admit it, nullopt
    // otherwise.
    std::optional<double> survival(const Vector& v) const;

    // Monte Carlo joint-exceedance probability P(U > v).
    MCEstimate survival_mc(const Vector& v, Index n, RngStream& rng) const;

    explicit CopulaModel(std::shared_ptr<const detail::CopulaImpl> impl);

  private:
    std::shared_ptr<const detail::CopulaImpl> impl_;
};

namespace detail {

class CopulaImpl {
  public:
    virtual ~CopulaImpl() = default;
    virtual Index dim() const = 0;
    virtual const std::string& family() const = 0;
    virtual Matrix sample(RngStream& rng, Index n) const = 0;
    virtual std::optional<double> cdf(const Vector& u) const { return std::nullopt; }
    virtual std::optional<double> survival(const Vector& v) const { return std::nullopt; }
};

}  // namespace detail

}  // namespace ptcop
