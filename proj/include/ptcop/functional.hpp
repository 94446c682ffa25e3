#pragma once

#include "ptcop/common.hpp"
#include "ptcop/copula.hpp"
#include "ptcop/generators.hpp"
#include "ptcop/gpd_copula.hpp"
#include "ptcop/pt.hpp"
#include "ptcop/rng.hpp"

namespace ptcop {

// A function sampled on a grid over [0,1]. Processes and test functions are
// both carried in this form; the sup over [0,1] is approximated by the max
// over the grid.
struct GridPath {
    Vector grid;
    Vector values;

    GridPath() = default;
    GridPath(Vector grid_, Vector values_);

    Index size() const { return grid.size(); }
};

GridPath make_grid_path(const Vector& grid, const std::function<double(double)>& f);

// Copula process on a grid: componentwise probability transform of a smooth
// Gaussian process with unit marginal variances and squared-exponential
// correlation exp(-(s-t)^2 / (2 l^2)).
CopulaModel gaussian_process_copula(const Vector& grid, double lengthscale);

// Degenerate copula process U_t == U; continuous and handy for enumeration
// oracles.
CopulaModel comonotone_process_copula(const Vector& grid);

// Standard generalized Pareto process V_t = max(M, -U/Z_t) on the grid.
// Values lie in [M, 0); close to zero each margin satisfies P(V_t <= x) = 1+x.
Matrix sample_gpp_ensemble(const GeneratorProcessSpec& gen_process, double clip_m,
                           RngStream& rng, Index n);
GridPath sample_gpp(const GeneratorProcessSpec& gen_process, double clip_m,
                    RngStream& rng);

// GPCP: the GPP pushed to uniform margins by the shared fill-in variable;
// returns Q = V~ + 1 in (0,1). clip_m = 0 selects the default -1/c.
Matrix sample_gpcp_ensemble(const GeneratorProcessSpec& gen_process, double clip_m,
                            RngStream& rng, Index n);
GridPath sample_gpcp(const GeneratorProcessSpec& gen_process, double clip_m,
                     RngStream& rng);

// Functional piecing together on the grid:
//   Y_t = U_t 1(U_t <= u) + {u + (1-u) Q_t} 1(U_t > u).
struct FunctionalPTConfig {
    CopulaModel copula_process;      // law of (U_t) on the grid
    GeneratorProcessSpec gen_process;
    double threshold;                // scalar u in (0,1)
    double clip_m;                   // M < 0; 0 selects -1/c

    FunctionalPTConfig(CopulaModel copula_process_, GeneratorProcessSpec gen_process_,
                       double threshold_, double clip_m_ = 0.0);

    const Vector& grid() const { return gen_process.grid(); }
    double clip_k() const;

    // Equivalent finite-dimensional PT configuration on the grid. All
    // functional sampling routes through this projection, so a one-point grid
    // reproduces the multivariate construction draw for draw.
    PTConfig project() const;
};

Matrix functional_pt_ensemble(const FunctionalPTConfig& config, RngStream& rng, Index n);
GridPath functional_pt_sample(const FunctionalPTConfig& config, RngStream& rng);

// Thinned functional norm E max_t |f(t)| Z_t 1(U_t > u) / (1 - u) over the
// grid. f must live on the same grid as the generator process.
MCEstimate functional_thinned_dnorm(const GeneratorProcessSpec& gen_process,
                                    const CopulaModel& copula_process, double threshold,
                                    const GridPath& f, Index n_samples, RngStream& rng);

}  // namespace ptcop
