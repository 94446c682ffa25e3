#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ptcop/copula.hpp"
#include "ptcop/common.hpp"
#include "ptcop/rng.hpp"

namespace ptcop {

// A generator: a nonnegative random vector Z in [0, c]^d whose components all
// have mean 1. The induced norm is E max_i |x_i| Z_i. Specs are immutable and
// safe to share; sampling takes an explicit stream.
class GeneratorSpec {
  public:
    enum class Family { constant, unit_vector, scaled_copula, bernoulli_mixture, custom };

    // Z == (1,...,1); induces the sup-norm. Bound c = 1.
    static GeneratorSpec constant(Index d);
    // Z = d * e_J with J uniform on {1,...,d}; induces the 1-norm. Bound c = d.
    static GeneratorSpec unit_vector(Index d);
    // Z = 2 * (U_1,...,U_d) with U following the copula. Bound c = 2.
    static GeneratorSpec scaled_copula(CopulaModel copula);
    // Z = e_J / w_J with J ~ Categorical(w). Each component has mean 1 and the
    // induced norm is the 1-norm for every weight vector, which makes the
    // family a ready-made example of generators not being unique. Bound
    // c = 1/min(w).
    static GeneratorSpec bernoulli_mixture(Vector weights);
    // User-supplied row sampler. Rows are validated against [0, bound] on
    // every draw; the unit-mean property can only be checked empirically.
    static GeneratorSpec custom(Index d, double bound,
                                std::function<Vector(RngStream&)> row_sampler,
                                std::string label = "custom");

    Index dim() const { return dim_; }
    double bound() const { return bound_; }
    Family family() const { return family_; }
    const std::string& label() const { return label_; }

    // n x d matrix of generator draws, deterministic given the stream state.
    Matrix sample(RngStream& rng, Index n) const;

  private:
    GeneratorSpec() = default;

    Family family_ = Family::constant;
    Index dim_ = 0;
    double bound_ = 1.0;
    std::string label_;
    // set for scaled_copula
    std::shared_ptr<const CopulaModel> copula_;
    // set for bernoulli_mixture
    Vector weights_;
    Vector weight_cumsum_;
    // set for custom
    std::function<Vector(RngStream&)> row_sampler_;
};

// Bounded i.i.d. atoms with mean 1, the building blocks of generator
// processes.
class AtomSpec {
  public:
    // W == 1.
    static AtomSpec constant();
    // W in {lo, hi} with P(W = hi) = p_hi; requires lo*(1-p_hi) + hi*p_hi = 1.
    static AtomSpec two_point(double lo, double hi, double p_hi);
    // W uniform on (0, 2).
    static AtomSpec uniform02();

    double bound() const { return bound_; }
    const std::string& label() const { return label_; }
    double sample(RngStream& rng) const;

  private:
    AtomSpec() = default;

    enum class Kind { constant, two_point, uniform02 };
    Kind kind_ = Kind::constant;
    double lo_ = 1.0, hi_ = 1.0, p_hi_ = 1.0;
    double bound_ = 1.0;
    std::string label_;
};

using BasisFunction = std::function<double(double)>;

// Piecewise-linear hat functions on J equispaced knots in [0,1]; they are
// nonnegative, continuous and sum to 1 everywhere. J = 1 is the constant 1.
std::vector<BasisFunction> make_hat_basis(Index count);

// A generator process Z_t = sum_j a_j(t) W_j on a grid: nonnegative continuous
// weights a_j summing to one at every point, i.i.d. bounded mean-1 atoms W_j.
// Every Z_t then lies in [0, c] with mean 1, c being the atom bound.
class GeneratorProcessSpec {
  public:
    GeneratorProcessSpec(std::vector<BasisFunction> basis, AtomSpec atoms, Vector grid);

    const Vector& grid() const { return grid_; }
    Index grid_size() const { return grid_.size(); }
    Index basis_count() const { return static_cast<Index>(basis_.size()); }
    double bound() const { return atoms_.bound(); }
    const AtomSpec& atoms() const { return atoms_; }

    // basis evaluated on the grid, (m+1) x J
    const Matrix& basis_matrix() const { return basis_values_; }

    // Paths as rows of an n x (m+1) matrix.
    Matrix sample(RngStream& rng, Index n) const;
    // Same, also exposing the drawn atoms (n x J) for exactness checks.
    std::pair<Matrix, Matrix> sample_with_atoms(RngStream& rng, Index n) const;

    // Finite-dimensional projection onto this spec's grid (or another one):
    // a GeneratorSpec whose draws consume the stream identically to the
    // process sampler, so grid-consistency holds bit for bit.
    GeneratorSpec to_generator() const;
    GeneratorSpec to_generator(const Vector& grid) const;

  private:
    Matrix evaluate_basis(const Vector& grid) const;

    std::vector<BasisFunction> basis_;
    AtomSpec atoms_;
    Vector grid_;
    Matrix basis_values_;
};

// Uniform grid of m+1 points on [0,1]; m = 0 degenerates to the single point
// {0} so that functional operations can be projected onto one coordinate.
Vector make_uniform_grid(Index m);

}  // namespace ptcop
