#include "ptcop/functional.hpp"

#include <cmath>

namespace ptcop {

GridPath::GridPath(Vector grid_, Vector values_)
    : grid(std::move(grid_)), values(std::move(values_)) {
    require(grid.size() == values.size(), ErrorCode::grid_mismatch,
            "grid and values disagree in length");
    require(grid.size() >= 1, ErrorCode::grid_mismatch, "empty grid path");
    for (Index i = 0; i < grid.size(); ++i) {
        require(grid[i] >= 0.0 && grid[i] <= 1.0, ErrorCode::grid_mismatch,
                "grid points must lie in [0,1]");
        if (i > 0)
            require(grid[i] > grid[i - 1], ErrorCode::grid_mismatch,
                    "grid must be strictly increasing");
    }
}

GridPath make_grid_path(const Vector& grid, const std::function<double(double)>& f) {
    Vector values(grid.size());
    for (Index i = 0; i < grid.size(); ++i) values[i] = f(grid[i]);
    return GridPath(grid, std::move(values));
}

CopulaModel gaussian_process_copula(const Vector& grid, double lengthscale) {
    require(lengthscale > 0.0, ErrorCode::invalid_parameter,
            "lengthscale must be positive");
    const Index m1 = grid.size();
    Matrix corr(m1, m1);
    for (Index i = 0; i < m1; ++i)
        for (Index j = 0; j < m1; ++j) {
            const double dt = (grid[i] - grid[j]) / lengthscale;
            corr(i, j) = std::exp(-0.5 * dt * dt);
        }
    return CopulaModel::gaussian(std::move(corr));
}

CopulaModel comonotone_process_copula(const Vector& grid) {
    return CopulaModel::comonotone(grid.size());
}

Matrix sample_gpp_ensemble(const GeneratorProcessSpec& gen_process, double clip_m,
                           RngStream& rng, Index n) {
    if (clip_m == 0.0) clip_m = -1.0 / gen_process.bound();
    require(clip_m < 0.0, ErrorCode::invalid_config, "clipping constant M must be negative");
    require(n >= 1, ErrorCode::invalid_parameter, "sample count must be >= 1");
    Matrix z = gen_process.sample(rng, n);
    Matrix v(n, z.cols());
    for (Index i = 0; i < n; ++i) {
        const double u = rng.u01();
        for (Index j = 0; j < z.cols(); ++j) {
            const double zij = z(i, j);
            v(i, j) = zij > 0.0 ? std::max(clip_m, -u / zij) : clip_m;
        }
    }
    return v;
}

GridPath sample_gpp(const GeneratorProcessSpec& gen_process, double clip_m,
                    RngStream& rng) {
    Matrix v = sample_gpp_ensemble(gen_process, clip_m, rng, 1);
    return GridPath(gen_process.grid(), v.row(0).transpose());
}

Matrix sample_gpcp_ensemble(const GeneratorProcessSpec& gen_process, double clip_m,
                            RngStream& rng, Index n) {
    GpdCopulaModel model(gen_process.to_generator(), clip_m);
    return model.sample(rng, n);
}

GridPath sample_gpcp(const GeneratorProcessSpec& gen_process, double clip_m,
                     RngStream& rng) {
    Matrix q = sample_gpcp_ensemble(gen_process, clip_m, rng, 1);
    return GridPath(gen_process.grid(), q.row(0).transpose());
}

FunctionalPTConfig::FunctionalPTConfig(CopulaModel copula_process_,
                                       GeneratorProcessSpec gen_process_, double threshold_,
                                       double clip_m_)
    : copula_process(std::move(copula_process_)),
      gen_process(std::move(gen_process_)),
      threshold(threshold_),
      clip_m(clip_m_) {
    require(copula_process.dim() == gen_process.grid_size(), ErrorCode::grid_mismatch,
            "copula process and generator process live on different grids");
    require(threshold > 0.0 && threshold < 1.0, ErrorCode::invalid_threshold,
            "threshold must lie strictly inside (0,1)");
    if (clip_m == 0.0) clip_m = -1.0 / gen_process.bound();
    require(clip_m < 0.0, ErrorCode::invalid_config, "clipping constant M must be negative");
}

double FunctionalPTConfig::clip_k() const {
    return std::max(clip_m, -1.0 / gen_process.bound());
}

PTConfig FunctionalPTConfig::project() const {
    Vector u = Vector::Constant(gen_process.grid_size(), threshold);
    return PTConfig(std::move(u), copula_process,
                    GpdCopulaModel(gen_process.to_generator(), clip_m));
}

Matrix functional_pt_ensemble(const FunctionalPTConfig& config, RngStream& rng, Index n) {
    return pt_sample(config.project(), rng, n);
}

GridPath functional_pt_sample(const FunctionalPTConfig& config, RngStream& rng) {
    Matrix y = functional_pt_ensemble(config, rng, 1);
    return GridPath(config.grid(), y.row(0).transpose());
}

MCEstimate functional_thinned_dnorm(const GeneratorProcessSpec& gen_process,
                                    const CopulaModel& copula_process, double threshold,
                                    const GridPath& f, Index n_samples, RngStream& rng) {
    require(f.size() == gen_process.grid_size() &&
                (f.grid.array() == gen_process.grid().array()).all(),
            ErrorCode::grid_mismatch, "test function lives on a different grid");
    require(threshold > 0.0 && threshold < 1.0, ErrorCode::invalid_threshold,
            "threshold must lie strictly inside (0,1)");
    Vector u = Vector::Constant(gen_process.grid_size(), threshold);
    return thinned_dnorm(gen_process.to_generator(), copula_process, u, f.values,
                         n_samples, rng);
}

}  // namespace ptcop
