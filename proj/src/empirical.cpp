#include "ptcop/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ptcop/pt.hpp"

namespace ptcop {

RankMatrix::RankMatrix(Matrix ranks) : ranks_(std::move(ranks)) {
    require(ranks_.rows() >= 1 && ranks_.cols() >= 1, ErrorCode::invalid_dimension,
            "rank matrix must be nonempty");
    for (Index i = 0; i < ranks_.rows(); ++i)
        for (Index j = 0; j < ranks_.cols(); ++j)
            require(ranks_(i, j) > 0.0 && ranks_(i, j) < 1.0, ErrorCode::domain_error,
                    "standardized ranks lie strictly inside (0,1)");
}

double RankMatrix::cdf(const Vector& v) const {
    require(v.size() == cols(), ErrorCode::dimension_mismatch,
            "empirical copula argument dimension");
    Index count = 0;
    for (Index i = 0; i < rows(); ++i) {
        bool dominated = true;
        for (Index j = 0; j < cols(); ++j)
            if (!(ranks_(i, j) <= v[j])) {
                dominated = false;
                break;
            }
        if (dominated) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(rows());
}

Vector RankMatrix::threshold_mass(const Vector& u) const {
    require(u.size() == cols(), ErrorCode::dimension_mismatch, "threshold dimension");
    Vector mass(cols());
    for (Index j = 0; j < cols(); ++j) {
        Index count = 0;
        for (Index i = 0; i < rows(); ++i)
            if (ranks_(i, j) <= u[j]) ++count;
        mass[j] = static_cast<double>(count) / static_cast<double>(rows());
    }
    return mass;
}

Index RankMatrix::joint_exceedances(const Vector& u) const {
    require(u.size() == cols(), ErrorCode::dimension_mismatch, "threshold dimension");
    Index count = 0;
    for (Index i = 0; i < rows(); ++i) {
        bool all = true;
        for (Index j = 0; j < cols(); ++j)
            if (!(ranks_(i, j) > u[j])) {
                all = false;
                break;
            }
        if (all) ++count;
    }
    return count;
}

RankMatrix standardized_ranks(const Matrix& data) {
    const Index n = data.rows();
    const Index d = data.cols();
    require(n >= 1 && d >= 1, ErrorCode::invalid_dimension, "data must be nonempty");
    Matrix ranks(n, d);
    std::vector<double> column(static_cast<std::size_t>(n));
    for (Index j = 0; j < d; ++j) {
        for (Index i = 0; i < n; ++i) {
            require(std::isfinite(data(i, j)), ErrorCode::ingestion,
                    "non-finite data value in rank transform");
            column[static_cast<std::size_t>(i)] = data(i, j);
        }
        std::sort(column.begin(), column.end());
        for (Index i = 0; i < n; ++i) {
            const auto count = std::upper_bound(column.begin(), column.end(), data(i, j)) -
                               column.begin();
            ranks(i, j) = static_cast<double>(count) / static_cast<double>(n + 1);
        }
    }
    return RankMatrix(std::move(ranks));
}

namespace {

class EmpiricalCopula final : public detail::CopulaImpl {
  public:
    explicit EmpiricalCopula(RankMatrix ranks)
        : ranks_(std::move(ranks)), name_("empirical") {}

    Index dim() const override { return ranks_.cols(); }
    const std::string& family() const override { return name_; }

    Matrix sample(RngStream& rng, Index n) const override {
        Matrix out(n, ranks_.cols());
        const auto rows = static_cast<std::uint64_t>(ranks_.rows());
        for (Index i = 0; i < n; ++i)
            out.row(i) = ranks_.values().row(static_cast<Index>(rng.uniform_index(rows)));
        return out;
    }

    std::optional<double> cdf(const Vector& u) const override { return ranks_.cdf(u); }

  private:
    RankMatrix ranks_;
    std::string name_;
};

}  // namespace

CopulaModel as_copula(const RankMatrix& ranks) {
    return CopulaModel(std::make_shared<EmpiricalCopula>(ranks));
}

Matrix empirical_pt_sample(const RankMatrix& ranks, const GpdCopulaModel& gpd,
                           const Vector& threshold, RngStream& rng, Index n_out) {
    const Index d = ranks.cols();
    require(gpd.dim() == d && threshold.size() == d, ErrorCode::dimension_mismatch,
            "empirical PT inputs disagree in dimension");
    for (Index j = 0; j < d; ++j)
        require(threshold[j] > 0.0 && threshold[j] < 1.0, ErrorCode::invalid_threshold,
                "threshold components must lie strictly inside (0,1)");
    require(ranks.joint_exceedances(threshold) > 0, ErrorCode::threshold_too_high,
            "no rank row exceeds the threshold in every component");
    require(n_out >= 1, ErrorCode::invalid_parameter, "sample count must be >= 1");

    const Vector u_star = ranks.threshold_mass(threshold);
    Matrix u = as_copula(ranks).sample(rng, n_out);
    Matrix v = gpd.sample(rng, n_out);
    Matrix y(n_out, d);
    for (Index j = 0; j < d; ++j) {
        const double uj = threshold[j];
        const double usj = u_star[j];
        y.col(j).array() = (u.col(j).array() <= uj)
                               .select(u.col(j).array(),
                                       usj + (1.0 - usj) * v.col(j).array());
    }
    return y;
}

MCEstimate empirical_thinned_dnorm(const GeneratorSpec& gen, const RankMatrix& ranks,
                                   const Vector& threshold, const Vector& x,
                                   Index n_samples, RngStream& rng) {
    const Vector u_star = ranks.threshold_mass(threshold);
    Vector exceed = (1.0 - u_star.array()).matrix();
    return thinned_dnorm_scaled(gen, as_copula(ranks), threshold, exceed, x, n_samples,
                                rng);
}

}  // namespace ptcop
