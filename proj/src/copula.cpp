#include "ptcop/copula.hpp"

#include <cmath>
#include <utility>

#include "ptcop/stats.hpp"

namespace ptcop {

namespace {

using detail::CopulaImpl;

void check_cdf_arg(const Vector& u, Index d) {
    require(u.size() == d, ErrorCode::dimension_mismatch, "copula cdf argument dimension");
    for (Index i = 0; i < d; ++i)
        require(u[i] >= 0.0 && u[i] <= 1.0, ErrorCode::domain_error,
                "copula cdf argument outside [0,1]^d");
}

class Independence final : public CopulaImpl {
  public:
    explicit Independence(Index d) : d_(d), name_("independence") {}

    Index dim() const override { return d_; }
    const std::string& family() const override { return name_; }

    Matrix sample(RngStream& rng, Index n) const override {
        Matrix out(n, d_);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < d_; ++j) out(i, j) = rng.u01();
        return out;
    }

    std::optional<double> cdf(const Vector& u) const override {
        check_cdf_arg(u, d_);
        return u.prod();
    }

    std::optional<double> survival(const Vector& v) const override {
        check_cdf_arg(v, d_);
        return (1.0 - v.array()).prod();
    }

  private:
    Index d_;
    std::string name_;
};

class Comonotone final : public CopulaImpl {
  public:
    explicit Comonotone(Index d) : d_(d), name_("comonotone") {}

    Index dim() const override { return d_; }
    const std::string& family() const override { return name_; }

    Matrix sample(RngStream& rng, Index n) const override {
        Matrix out(n, d_);
        for (Index i = 0; i < n; ++i) out.row(i).setConstant(rng.u01());
        return out;
    }

    std::optional<double> cdf(const Vector& u) const override {
        check_cdf_arg(u, d_);
        return u.minCoeff();
    }

    std::optional<double> survival(const Vector& v) const override {
        check_cdf_arg(v, d_);
        return 1.0 - v.maxCoeff();
    }

  private:
    Index d_;
    std::string name_;
};

// Clayton via the Marshall-Olkin frailty construction: U_i = (1 + E_i/G)^(-1/theta)
// with G ~ Gamma(1/theta, 1).
class Clayton final : public CopulaImpl {
  public:
    Clayton(Index d, double theta) : d_(d), theta_(theta), name_("clayton") {
        require(theta > 0.0, ErrorCode::invalid_parameter, "clayton requires theta > 0");
    }

    Index dim() const override { return d_; }
    const std::string& family() const override { return name_; }

    Matrix sample(RngStream& rng, Index n) const override {
        Matrix out(n, d_);
        for (Index i = 0; i < n; ++i) {
            const double g = rng.gamma(1.0 / theta_);
            for (Index j = 0; j < d_; ++j) {
                const double e = -std::log(rng.u01());
                out(i, j) = std::pow(1.0 + e / g, -1.0 / theta_);
            }
        }
        return out;
    }

    std::optional<double> cdf(const Vector& u) const override {
        check_cdf_arg(u, d_);
        double s = 0.0;
        for (Index i = 0; i < d_; ++i) {
            if (u[i] == 0.0) return 0.0;
            s += std::pow(u[i], -theta_);
        }
        s -= static_cast<double>(d_) - 1.0;
        return s <= 0.0 ? 1.0 : std::pow(s, -1.0 / theta_);
    }

  private:
    Index d_;
    double theta_;
    std::string name_;
};

// Gumbel via a positive stable frailty: U_i = exp(-(E_i/S)^(1/theta)).
class Gumbel final : public CopulaImpl {
  public:
    Gumbel(Index d, double theta) : d_(d), theta_(theta), name_("gumbel") {
        require(theta >= 1.0, ErrorCode::invalid_parameter, "gumbel requires theta >= 1");
    }

    Index dim() const override { return d_; }
    const std::string& family() const override { return name_; }

    Matrix sample(RngStream& rng, Index n) const override {
        Matrix out(n, d_);
        for (Index i = 0; i < n; ++i) {
            const double s = rng.positive_stable(1.0 / theta_);
            for (Index j = 0; j < d_; ++j) {
                const double e = -std::log(rng.u01());
                out(i, j) = std::exp(-std::pow(e / s, 1.0 / theta_));
            }
        }
        return out;
    }

    std::optional<double> cdf(const Vector& u) const override {
        check_cdf_arg(u, d_);
        double s = 0.0;
        for (Index i = 0; i < d_; ++i) {
            if (u[i] == 0.0) return 0.0;
            s += std::pow(-std::log(u[i]), theta_);
        }
        return std::exp(-std::pow(s, 1.0 / theta_));
    }

  private:
    Index d_;
    double theta_;
    std::string name_;
};

class GaussianCopula final : public CopulaImpl {
  public:
    explicit GaussianCopula(Matrix correlation) : name_("gaussian") {
        require(correlation.rows() == correlation.cols() && correlation.rows() >= 1,
                ErrorCode::invalid_parameter, "correlation matrix must be square");
        d_ = correlation.rows();
        for (Index i = 0; i < d_; ++i)
            require(std::abs(correlation(i, i) - 1.0) < 1e-12, ErrorCode::invalid_parameter,
                    "correlation matrix needs unit diagonal");
        // small jitter keeps kernel matrices on fine grids factorizable
        Matrix jittered = correlation;
        jittered.diagonal().array() += 1e-10;
        Eigen::LLT<Matrix> llt(jittered);
        require(llt.info() == Eigen::Success, ErrorCode::invalid_parameter,
                "correlation matrix is not positive definite");
        chol_ = llt.matrixL();
    }

    Index dim() const override { return d_; }
    const std::string& family() const override { return name_; }

    Matrix sample(RngStream& rng, Index n) const override {
        Matrix z(n, d_);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < d_; ++j) z(i, j) = rng.normal();
        Matrix x = z * chol_.transpose();
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < d_; ++j) x(i, j) = normal_cdf(x(i, j));
        return x;
    }

  private:
    Index d_;
    Matrix chol_;
    std::string name_;
};

}  // namespace

CopulaModel::CopulaModel(std::shared_ptr<const detail::CopulaImpl> impl)
    : impl_(std::move(impl)) {}

CopulaModel CopulaModel::independence(Index d) {
    require(d >= 1, ErrorCode::invalid_dimension, "copula dimension must be >= 1");
    return CopulaModel(std::make_shared<Independence>(d));
}

CopulaModel CopulaModel::comonotone(Index d) {
    require(d >= 1, ErrorCode::invalid_dimension, "copula dimension must be >= 1");
    return CopulaModel(std::make_shared<Comonotone>(d));
}

CopulaModel CopulaModel::clayton(Index d, double theta) {
    require(d >= 1, ErrorCode::invalid_dimension, "copula dimension must be >= 1");
    return CopulaModel(std::make_shared<Clayton>(d, theta));
}

CopulaModel CopulaModel::gumbel(Index d, double theta) {
    require(d >= 1, ErrorCode::invalid_dimension, "copula dimension must be >= 1");
    return CopulaModel(std::make_shared<Gumbel>(d, theta));
}

CopulaModel CopulaModel::gaussian(Matrix correlation) {
    return CopulaModel(std::make_shared<GaussianCopula>(std::move(correlation)));
}

CopulaModel CopulaModel::gaussian_exchangeable(Index d, double rho) {
    require(d >= 1, ErrorCode::invalid_dimension, "copula dimension must be >= 1");
    require(rho > -1.0 / (static_cast<double>(d) - 1.0 + 1e-300) && rho < 1.0,
            ErrorCode::invalid_parameter, "exchangeable rho out of range");
    Matrix c = Matrix::Constant(d, d, rho);
    c.diagonal().setOnes();
    return gaussian(std::move(c));
}

Index CopulaModel::dim() const { return impl_->dim(); }
const std::string& CopulaModel::family() const { return impl_->family(); }

Matrix CopulaModel::sample(RngStream& rng, Index n) const {
    require(n >= 1, ErrorCode::invalid_parameter, "sample count must be >= 1");
    return impl_->sample(rng, n);
}

std::optional<double> CopulaModel::cdf(const Vector& u) const { return impl_->cdf(u); }

std::optional<double> CopulaModel::survival(const Vector& v) const {
    return impl_->survival(v);
}

MCEstimate CopulaModel::survival_mc(const Vector& v, Index n, RngStream& rng) const {
    require(v.size() == dim(), ErrorCode::dimension_mismatch, "survival argument dimension");
    const Index chunk = 16384;
    double hits = 0.0;
    for (Index done = 0; done < n; done += chunk) {
        const Index m = std::min(chunk, n - done);
        Matrix u = impl_->sample(rng, m);
        for (Index i = 0; i < m; ++i) {
            bool all = true;
            for (Index j = 0; j < v.size(); ++j)
                if (!(u(i, j) > v[j])) {
                    all = false;
                    break;
                }
            if (all) hits += 1.0;
        }
    }
    MCEstimate e;
    e.n_samples = n;
    e.value = hits / static_cast<double>(n);
    e.std_error = binomial_se(e.value, n);
    return e;
}

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_dimension: return "E_INVALID_DIMENSION";
        case ErrorCode::dimension_mismatch: return "E_DIMENSION_MISMATCH";
        case ErrorCode::unsupported_model: return "E_UNSUPPORTED_MODEL";
        case ErrorCode::invalid_basis: return "E_INVALID_BASIS";
        case ErrorCode::invalid_atom: return "E_INVALID_ATOM";
        case ErrorCode::domain_error: return "E_DOMAIN";
        case ErrorCode::complexity_guard: return "E_COMPLEXITY_GUARD";
        case ErrorCode::outside_domain: return "E_OUTSIDE_DOMAIN";
        case ErrorCode::outside_upper_region: return "E_OUTSIDE_UPPER_REGION";
        case ErrorCode::invalid_config: return "E_INVALID_CONFIG";
        case ErrorCode::invalid_threshold: return "E_INVALID_THRESHOLD";
        case ErrorCode::threshold_too_high: return "E_THRESHOLD_TOO_HIGH";
        case ErrorCode::margin_domain: return "E_MARGIN_DOMAIN";
        case ErrorCode::invalid_parameter: return "E_INVALID_PARAMETER";
        case ErrorCode::insufficient_data: return "E_INSUFFICIENT_DATA";
        case ErrorCode::below_threshold_level: return "E_BELOW_THRESHOLD_LEVEL";
        case ErrorCode::increase_n: return "E_INCREASE_N";
        case ErrorCode::grid_mismatch: return "E_GRID_MISMATCH";
        case ErrorCode::ingestion: return "E_INGESTION";
        case ErrorCode::io_error: return "E_IO";
    }
    return "E_UNKNOWN";
}

}  // namespace ptcop
