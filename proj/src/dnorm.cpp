#include "ptcop/dnorm.hpp"

#include <cmath>

namespace ptcop {

namespace {

constexpr Index kSubsetEnumerationCap = 20;
constexpr Index kMcChunk = 16384;

}  // namespace

DNorm DNorm::sup(Index d) {
    require(d >= 1, ErrorCode::invalid_dimension, "norm dimension must be >= 1");
    DNorm n;
    n.backend_ = Backend::sup;
    n.dim_ = d;
    return n;
}

DNorm DNorm::one(Index d) {
    require(d >= 1, ErrorCode::invalid_dimension, "norm dimension must be >= 1");
    DNorm n;
    n.backend_ = Backend::one;
    n.dim_ = d;
    return n;
}

DNorm DNorm::theta(Index d, double exponent) {
    require(d >= 1, ErrorCode::invalid_dimension, "norm dimension must be >= 1");
    require(exponent >= 1.0, ErrorCode::invalid_parameter, "theta-norm needs exponent >= 1");
    DNorm n;
    n.backend_ = Backend::theta;
    n.dim_ = d;
    n.theta_ = exponent;
    return n;
}

DNorm DNorm::monte_carlo(GeneratorSpec gen, Index n_samples) {
    require(n_samples >= 1, ErrorCode::invalid_parameter, "MC norm needs n_samples >= 1");
    DNorm n;
    n.backend_ = Backend::monte_carlo;
    n.dim_ = gen.dim();
    n.mc_samples_ = n_samples;
    n.gen_ = std::move(gen);
    return n;
}

double DNorm::theta_exponent() const {
    require(backend_ == Backend::theta, ErrorCode::unsupported_model,
            "not a theta-norm backend");
    return theta_;
}

const GeneratorSpec& DNorm::generator() const {
    require(gen_.has_value(), ErrorCode::unsupported_model, "not a Monte Carlo backend");
    return *gen_;
}

DNorm natural_dnorm(const GeneratorSpec& gen, Index n_samples) {
    switch (gen.family()) {
        case GeneratorSpec::Family::constant: return DNorm::sup(gen.dim());
        case GeneratorSpec::Family::unit_vector: return DNorm::one(gen.dim());
        case GeneratorSpec::Family::bernoulli_mixture: return DNorm::one(gen.dim());
        default: return DNorm::monte_carlo(gen, n_samples);
    }
}

MCEstimate eval_dnorm(const DNorm& norm, const Vector& x, RngStream* rng) {
    require(x.size() == norm.dim(), ErrorCode::dimension_mismatch,
            "norm argument has wrong dimension");
    switch (norm.backend()) {
        case DNorm::Backend::sup:
            return MCEstimate::exact(x.array().abs().maxCoeff());
        case DNorm::Backend::one:
            return MCEstimate::exact(x.array().abs().sum());
        case DNorm::Backend::theta: {
            const double th = norm.theta_exponent();
            const double s = x.array().abs().pow(th).sum();
            return MCEstimate::exact(std::pow(s, 1.0 / th));
        }
        case DNorm::Backend::monte_carlo: {
            require(rng != nullptr, ErrorCode::invalid_parameter,
                    "Monte Carlo norm evaluation needs an RNG stream");
            const Array ax = x.array().abs();
            const Index total = norm.mc_samples();
            double sum = 0.0, sum_sq = 0.0;
            for (Index done = 0; done < total; done += kMcChunk) {
                const Index m = std::min(kMcChunk, total - done);
                Matrix z = norm.generator().sample(*rng, m);
                Array vals =
                    (z.array().rowwise() * ax.transpose()).rowwise().maxCoeff();
                sum += vals.sum();
                sum_sq += (vals * vals).sum();
            }
            return MCEstimate::from_sample_moments(sum, sum_sq, total);
        }
    }
    throw Error(ErrorCode::unsupported_model, "unknown norm backend");
}

MCEstimate pickands(const DNorm& norm, const Vector& t, RngStream* rng) {
    require(t.size() == norm.dim() - 1, ErrorCode::dimension_mismatch,
            "pickands argument must have dimension d - 1");
    double sum = 0.0;
    for (Index i = 0; i < t.size(); ++i) {
        require(t[i] >= 0.0, ErrorCode::domain_error, "pickands argument outside simplex");
        sum += t[i];
    }
    require(sum <= 1.0, ErrorCode::domain_error, "pickands argument outside simplex");
    Vector x(norm.dim());
    x.head(t.size()) = t;
    x[norm.dim() - 1] = 1.0 - sum;
    return eval_dnorm(norm, x, rng);
}

MCEstimate tail_copula(const GeneratorSpec& gen, const Vector& x, Index n_samples,
                       RngStream& rng) {
    require(x.size() == gen.dim(), ErrorCode::dimension_mismatch,
            "tail copula argument has wrong dimension");
    for (Index i = 0; i < x.size(); ++i)
        require(x[i] <= 0.0, ErrorCode::domain_error,
                "tail copula is defined for nonpositive arguments");
    require(n_samples >= 1, ErrorCode::invalid_parameter, "need n_samples >= 1");
    const Array ax = x.array().abs();
    double sum = 0.0, sum_sq = 0.0;
    for (Index done = 0; done < n_samples; done += kMcChunk) {
        const Index m = std::min(kMcChunk, n_samples - done);
        Matrix z = gen.sample(rng, m);
        Array vals = (z.array().rowwise() * ax.transpose()).rowwise().minCoeff();
        sum += vals.sum();
        sum_sq += (vals * vals).sum();
    }
    return MCEstimate::from_sample_moments(sum, sum_sq, n_samples);
}

MCEstimate tail_copula_via_inclusion_exclusion(const DNorm& norm, const Vector& x,
                                               RngStream* rng) {
    const Index d = norm.dim();
    require(x.size() == d, ErrorCode::dimension_mismatch,
            "tail copula argument has wrong dimension");
    for (Index i = 0; i < d; ++i)
        require(x[i] <= 0.0, ErrorCode::domain_error,
                "tail copula is defined for nonpositive arguments");
    require(d <= kSubsetEnumerationCap, ErrorCode::complexity_guard,
            "subset enumeration is capped at d = 20");

    double value = 0.0;
    double var = 0.0;
    Index n_used = 0;
    const std::uint64_t n_subsets = (std::uint64_t{1} << d) - 1;
    for (std::uint64_t mask = 1; mask <= n_subsets; ++mask) {
        Vector restricted = Vector::Zero(d);
        int bits = 0;
        for (Index k = 0; k < d; ++k)
            if (mask & (std::uint64_t{1} << k)) {
                restricted[k] = x[k];
                ++bits;
            }
        const MCEstimate term = eval_dnorm(norm, restricted, rng);
        const double sign = (bits % 2 == 1) ? 1.0 : -1.0;
        value += sign * term.value;
        var += term.std_error * term.std_error;
        n_used += term.n_samples;
    }
    MCEstimate out;
    out.value = value;
    out.std_error = std::sqrt(var);
    out.n_samples = n_used;
    return out;
}

}  // namespace ptcop
