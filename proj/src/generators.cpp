#include "ptcop/generators.hpp"

#include <cmath>

namespace ptcop {

GeneratorSpec GeneratorSpec::constant(Index d) {
    require(d >= 1, ErrorCode::invalid_dimension, "generator dimension must be >= 1");
    GeneratorSpec g;
    g.family_ = Family::constant;
    g.dim_ = d;
    g.bound_ = 1.0;
    g.label_ = "constant";
    return g;
}

GeneratorSpec GeneratorSpec::unit_vector(Index d) {
    require(d >= 1, ErrorCode::invalid_dimension, "generator dimension must be >= 1");
    GeneratorSpec g;
    g.family_ = Family::unit_vector;
    g.dim_ = d;
    g.bound_ = static_cast<double>(d);
    g.label_ = "unit_vector";
    return g;
}

GeneratorSpec GeneratorSpec::scaled_copula(CopulaModel copula) {
    GeneratorSpec g;
    g.family_ = Family::scaled_copula;
    g.dim_ = copula.dim();
    g.bound_ = 2.0;
    g.label_ = "scaled_copula(" + copula.family() + ")";
    g.copula_ = std::make_shared<const CopulaModel>(std::move(copula));
    return g;
}

GeneratorSpec GeneratorSpec::bernoulli_mixture(Vector weights) {
    const Index d = weights.size();
    require(d >= 1, ErrorCode::invalid_dimension, "generator dimension must be >= 1");
    double sum = 0.0;
    double min_w = 1.0;
    for (Index i = 0; i < d; ++i) {
        require(weights[i] > 0.0, ErrorCode::invalid_parameter,
                "bernoulli_mixture weights must be positive");
        sum += weights[i];
        min_w = std::min(min_w, weights[i]);
    }
    require(std::abs(sum - 1.0) <= 1e-12, ErrorCode::invalid_parameter,
            "bernoulli_mixture weights must sum to 1");
    GeneratorSpec g;
    g.family_ = Family::bernoulli_mixture;
    g.dim_ = d;
    g.bound_ = 1.0 / min_w;
    g.label_ = "bernoulli_mixture";
    g.weights_ = weights;
    g.weight_cumsum_ = Vector(d);
    double acc = 0.0;
    for (Index i = 0; i < d; ++i) {
        acc += weights[i];
        g.weight_cumsum_[i] = acc;
    }
    g.weight_cumsum_[d - 1] = 1.0;
    return g;
}

GeneratorSpec GeneratorSpec::custom(Index d, double bound,
                                    std::function<Vector(RngStream&)> row_sampler,
                                    std::string label) {
    require(d >= 1, ErrorCode::invalid_dimension, "generator dimension must be >= 1");
    require(bound >= 1.0, ErrorCode::invalid_parameter,
            "generator bound must be >= 1 (unit means force c >= 1)");
    require(static_cast<bool>(row_sampler), ErrorCode::unsupported_model,
            "custom generator needs a sampler");
    GeneratorSpec g;
    g.family_ = Family::custom;
    g.dim_ = d;
    g.bound_ = bound;
    g.label_ = std::move(label);
    g.row_sampler_ = std::move(row_sampler);
    return g;
}

Matrix GeneratorSpec::sample(RngStream& rng, Index n) const {
    require(n >= 1, ErrorCode::invalid_parameter, "sample count must be >= 1");
    switch (family_) {
        case Family::constant:
            return Matrix::Ones(n, dim_);
        case Family::unit_vector: {
            Matrix out = Matrix::Zero(n, dim_);
            for (Index i = 0; i < n; ++i) {
                const Index j = static_cast<Index>(
                    rng.uniform_index(static_cast<std::uint64_t>(dim_)));
                out(i, j) = static_cast<double>(dim_);
            }
            return out;
        }
        case Family::scaled_copula:
            return 2.0 * copula_->sample(rng, n);
        case Family::bernoulli_mixture: {
            Matrix out = Matrix::Zero(n, dim_);
            for (Index i = 0; i < n; ++i) {
                const double u = rng.u01();
                Index j = 0;
                while (j + 1 < dim_ && u > weight_cumsum_[j]) ++j;
                out(i, j) = 1.0 / weights_[j];
            }
            return out;
        }
        case Family::custom: {
            Matrix out(n, dim_);
            for (Index i = 0; i < n; ++i) {
                Vector row = row_sampler_(rng);
                require(row.size() == dim_, ErrorCode::dimension_mismatch,
                        "custom generator returned a row of wrong dimension");
                for (Index j = 0; j < dim_; ++j)
                    require(row[j] >= 0.0 && row[j] <= bound_ + 1e-12,
                            ErrorCode::unsupported_model,
                            "custom generator violated its bound [0, c]");
                out.row(i) = row;
            }
            return out;
        }
    }
    throw Error(ErrorCode::unsupported_model, "unknown generator family");
}

AtomSpec AtomSpec::constant() {
    AtomSpec a;
    a.kind_ = Kind::constant;
    a.bound_ = 1.0;
    a.label_ = "constant";
    return a;
}

AtomSpec AtomSpec::two_point(double lo, double hi, double p_hi) {
    require(lo >= 0.0 && hi >= lo, ErrorCode::invalid_atom, "two_point needs 0 <= lo <= hi");
    require(p_hi >= 0.0 && p_hi <= 1.0, ErrorCode::invalid_atom, "two_point needs p in [0,1]");
    const double mean = lo * (1.0 - p_hi) + hi * p_hi;
    require(std::abs(mean - 1.0) <= 1e-12, ErrorCode::invalid_atom,
            "two_point atoms must have mean 1");
    require(std::isfinite(hi), ErrorCode::invalid_atom, "atoms must be bounded");
    AtomSpec a;
    a.kind_ = Kind::two_point;
    a.lo_ = lo;
    a.hi_ = hi;
    a.p_hi_ = p_hi;
    a.bound_ = hi;
    a.label_ = "two_point";
    return a;
}

AtomSpec AtomSpec::uniform02() {
    AtomSpec a;
    a.kind_ = Kind::uniform02;
    a.bound_ = 2.0;
    a.label_ = "uniform02";
    return a;
}

double AtomSpec::sample(RngStream& rng) const {
    switch (kind_) {
        case Kind::constant: return 1.0;
        case Kind::two_point: return rng.u01() < p_hi_ ? hi_ : lo_;
        case Kind::uniform02: return 2.0 * rng.u01();
    }
    return 1.0;
}

std::vector<BasisFunction> make_hat_basis(Index count) {
    require(count >= 1, ErrorCode::invalid_basis, "hat basis needs at least one function");
    std::vector<BasisFunction> basis;
    if (count == 1) {
        basis.emplace_back([](double) { return 1.0; });
        return basis;
    }
    const double h = 1.0 / static_cast<double>(count - 1);
    for (Index j = 0; j < count; ++j) {
        const double knot = static_cast<double>(j) * h;
        basis.emplace_back([knot, h](double t) {
            const double w = 1.0 - std::abs(t - knot) / h;
            return w > 0.0 ? w : 0.0;
        });
    }
    return basis;
}

Vector make_uniform_grid(Index m) {
    require(m >= 0, ErrorCode::invalid_parameter, "grid size must be nonnegative");
    if (m == 0) return Vector::Zero(1);
    Vector g(m + 1);
    for (Index i = 0; i <= m; ++i) g[i] = static_cast<double>(i) / static_cast<double>(m);
    return g;
}

GeneratorProcessSpec::GeneratorProcessSpec(std::vector<BasisFunction> basis, AtomSpec atoms,
                                           Vector grid)
    : basis_(std::move(basis)), atoms_(std::move(atoms)), grid_(std::move(grid)) {
    require(!basis_.empty(), ErrorCode::invalid_basis, "empty basis");
    require(grid_.size() >= 1, ErrorCode::invalid_basis, "empty grid");
    for (Index i = 0; i < grid_.size(); ++i) {
        require(grid_[i] >= 0.0 && grid_[i] <= 1.0, ErrorCode::invalid_basis,
                "grid points must lie in [0,1]");
        if (i > 0)
            require(grid_[i] > grid_[i - 1], ErrorCode::invalid_basis,
                    "grid must be strictly increasing");
    }
    basis_values_ = evaluate_basis(grid_);
}

Matrix GeneratorProcessSpec::evaluate_basis(const Vector& grid) const {
    const Index m1 = grid.size();
    const Index J = static_cast<Index>(basis_.size());
    Matrix values(m1, J);
    for (Index i = 0; i < m1; ++i) {
        double sum = 0.0;
        for (Index j = 0; j < J; ++j) {
            const double a = basis_[static_cast<std::size_t>(j)](grid[i]);
            require(a >= 0.0, ErrorCode::invalid_basis, "basis weights must be nonnegative");
            values(i, j) = a;
            sum += a;
        }
        require(std::abs(sum - 1.0) <= 1e-12, ErrorCode::invalid_basis,
                "basis weights must sum to 1 at every grid point");
    }
    return values;
}

Matrix GeneratorProcessSpec::sample(RngStream& rng, Index n) const {
    return sample_with_atoms(rng, n).first;
}

std::pair<Matrix, Matrix> GeneratorProcessSpec::sample_with_atoms(RngStream& rng,
                                                                  Index n) const {
    require(n >= 1, ErrorCode::invalid_parameter, "sample count must be >= 1");
    const Index J = basis_count();
    Matrix atoms(n, J);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < J; ++j) atoms(i, j) = atoms_.sample(rng);
    Matrix paths = atoms * basis_values_.transpose();
    return {std::move(paths), std::move(atoms)};
}

GeneratorSpec GeneratorProcessSpec::to_generator() const { return to_generator(grid_); }

GeneratorSpec GeneratorProcessSpec::to_generator(const Vector& grid) const {
    const bool same_grid =
        grid.size() == grid_.size() && (grid.array() == grid_.array()).all();
    Matrix basis_values = same_grid ? basis_values_ : evaluate_basis(grid);
    const Index J = basis_count();
    AtomSpec atoms = atoms_;
    auto row_sampler = [atoms, basis_values, J](RngStream& rng) -> Vector {
        Vector w(J);
        for (Index j = 0; j < J; ++j) w[j] = atoms.sample(rng);
        return basis_values * w;
    };
    return GeneratorSpec::custom(grid.size(), bound(), std::move(row_sampler),
                                 "process_projection");
}

}  // namespace ptcop
