#include "ptcop/gpd_copula.hpp"

#include <cmath>

namespace ptcop {

MCEstimate GPFunction::eval(const Vector& x, RngStream* rng) const {
    require(x.size() == norm_.dim(), ErrorCode::dimension_mismatch,
            "GP function argument has wrong dimension");
    for (Index i = 0; i < x.size(); ++i)
        require(x[i] <= 0.0, ErrorCode::outside_domain,
                "GP function is defined for nonpositive arguments");
    MCEstimate nx = eval_dnorm(norm_, x, rng);
    require(nx.value <= 1.0, ErrorCode::outside_domain,
            "GP function argument has norm > 1; H is not a distribution function there");
    nx.value = 1.0 - nx.value;
    return nx;
}

GpdCopulaModel::GpdCopulaModel(GeneratorSpec gen)
    : GpdCopulaModel(std::move(gen), 0.0) {}

GpdCopulaModel::GpdCopulaModel(GeneratorSpec gen, double clip_m)
    : gen_(std::move(gen)), m_(clip_m), norm_(natural_dnorm(gen_)) {
    if (m_ == 0.0) m_ = -1.0 / gen_.bound();
    require(m_ < 0.0, ErrorCode::invalid_config, "clipping constant M must be negative");
    k_ = std::max(m_, -1.0 / gen_.bound());
    // K = -1 (possible only when c = 1 and M <= -1) means no fill-in is ever
    // needed: V = -U already has uniform margins. For c > 1 the interval
    // (-1, K) must be nonempty.
    require(k_ > -1.0 || gen_.bound() <= 1.0, ErrorCode::invalid_config,
            "need M > -1/c so that K lies in (-1, 0)");
    require(k_ < 0.0, ErrorCode::invalid_config, "K must be negative");
}

Vector GpdCopulaModel::exact_region_lower() const {
    return Vector::Constant(dim(), 1.0 + k_);
}

MCEstimate GpdCopulaModel::cdf_upper(const Vector& u, RngStream* rng,
                                     Index n_samples) const {
    require(u.size() == dim(), ErrorCode::dimension_mismatch,
            "cdf argument has wrong dimension");
    for (Index i = 0; i < u.size(); ++i) {
        require(u[i] <= 1.0, ErrorCode::domain_error, "copula argument above 1");
        require(u[i] >= 1.0 + k_, ErrorCode::outside_upper_region,
                "argument below the exact-CDF region; the law there is "
                "construction-defined");
    }
    DNorm norm = norm_;
    if (!norm.closed_form() && n_samples != norm.mc_samples())
        norm = DNorm::monte_carlo(gen_, n_samples);
    MCEstimate nx = eval_dnorm(norm, u - Vector::Ones(dim()), rng);
    nx.value = 1.0 - nx.value;
    return nx;
}

Matrix GpdCopulaModel::sample(RngStream& rng, Index n) const {
    require(n >= 1, ErrorCode::invalid_parameter, "sample count must be >= 1");
    const Index d = dim();
    Matrix z = gen_.sample(rng, n);
    Matrix out(n, d);
    const bool fill_in = k_ > -1.0;
    for (Index i = 0; i < n; ++i) {
        const double u = rng.u01();
        double xi = 0.0;
        if (fill_in) xi = rng.uniform(-1.0, k_);
        for (Index j = 0; j < d; ++j) {
            const double zij = z(i, j);
            double v = zij > 0.0 ? std::max(m_, -u / zij) : m_;
            if (fill_in && v <= k_) v = xi;
            out(i, j) = v + 1.0;
        }
    }
    return out;
}

namespace {

class GpdCopulaAsCopula final : public detail::CopulaImpl {
  public:
    explicit GpdCopulaAsCopula(GpdCopulaModel model)
        : model_(std::move(model)), name_("gpd_copula(" + model_.generator().label() + ")") {}

    Index dim() const override { return model_.dim(); }
    const std::string& family() const override { return name_; }

    Matrix sample(RngStream& rng, Index n) const override { return model_.sample(rng, n); }

    // Exact only on the upper region, and only when the generator's norm has
    // a closed form; elsewhere callers must fall back to Monte Carlo.
    std::optional<double> cdf(const Vector& u) const override {
        if (u.size() != model_.dim()) return std::nullopt;
        for (Index i = 0; i < u.size(); ++i)
            if (!(u[i] >= 1.0 + model_.clip_k() && u[i] <= 1.0)) return std::nullopt;
        DNorm norm = natural_dnorm(model_.generator());
        if (!norm.closed_form()) return std::nullopt;
        return 1.0 - eval_dnorm(norm, u - Vector::Ones(u.size())).value;
    }

  private:
    GpdCopulaModel model_;
    std::string name_;
};

}  // namespace

CopulaModel as_copula(const GpdCopulaModel& model) {
    return CopulaModel(std::make_shared<GpdCopulaAsCopula>(model));
}

}  // namespace ptcop
