#include "ptcop/pt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ptcop {

namespace {
constexpr Index kMcChunk = 16384;
}

PTConfig::PTConfig(Vector threshold_, CopulaModel copula_, GpdCopulaModel gpd_)
    : threshold(std::move(threshold_)), copula(std::move(copula_)), gpd(std::move(gpd_)) {
    const Index d = threshold.size();
    require(d >= 1, ErrorCode::invalid_dimension, "threshold must be nonempty");
    require(copula.dim() == d, ErrorCode::dimension_mismatch,
            "copula dimension does not match threshold");
    require(gpd.dim() == d, ErrorCode::dimension_mismatch,
            "GPD-copula dimension does not match threshold");
    for (Index i = 0; i < d; ++i)
        require(threshold[i] > 0.0 && threshold[i] < 1.0, ErrorCode::invalid_threshold,
                "threshold components must lie strictly inside (0,1)");
}

Vector PTConfig::exact_region_lower() const {
    return Vector::Ones(dim()) + (1.0 - threshold.array()).matrix() * gpd.clip_k();
}

void PTConfig::check_threshold_mass(RngStream& rng, Index pilot_n) const {
    if (auto s = copula.survival(threshold)) {
        require(*s > 0.0, ErrorCode::invalid_threshold,
                "P(U > u) = 0 under the given copula");
        return;
    }
    const MCEstimate s = copula.survival_mc(threshold, pilot_n, rng);
    require(s.value > 0.0, ErrorCode::invalid_threshold,
            "no joint exceedances of the threshold observed in a pilot sample; "
            "lower the threshold or increase the pilot size");
}

Matrix pt_sample(const PTConfig& config, RngStream& rng, Index n) {
    require(n >= 1, ErrorCode::invalid_parameter, "sample count must be >= 1");
    const Index d = config.dim();
    Matrix u = config.copula.sample(rng, n);
    Matrix v = config.gpd.sample(rng, n);
    Matrix y(n, d);
    for (Index j = 0; j < d; ++j) {
        const double uj = config.threshold[j];
        y.col(j).array() = (u.col(j).array() <= uj)
                               .select(u.col(j).array(), uj + (1.0 - uj) * v.col(j).array());
    }
    return y;
}

MCEstimate thinned_dnorm_scaled(const GeneratorSpec& gen, const CopulaModel& copula,
                                const Vector& threshold, const Vector& exceed_prob,
                                const Vector& x, Index n_samples, RngStream& rng) {
    const Index d = gen.dim();
    require(copula.dim() == d && threshold.size() == d && x.size() == d &&
                exceed_prob.size() == d,
            ErrorCode::dimension_mismatch, "thinned norm inputs disagree in dimension");
    for (Index j = 0; j < d; ++j) {
        require(threshold[j] > 0.0 && threshold[j] < 1.0, ErrorCode::invalid_threshold,
                "threshold components must lie strictly inside (0,1)");
        require(exceed_prob[j] > 0.0, ErrorCode::invalid_threshold,
                "exceedance probability must be positive");
    }
    require(n_samples >= 1, ErrorCode::invalid_parameter, "need n_samples >= 1");

    const Array scale = x.array().abs() / exceed_prob.array();
    double sum = 0.0, sum_sq = 0.0;
    for (Index done = 0; done < n_samples; done += kMcChunk) {
        const Index m = std::min(kMcChunk, n_samples - done);
        Matrix z = gen.sample(rng, m);
        Matrix u = copula.sample(rng, m);
        for (Index i = 0; i < m; ++i) {
            double best = 0.0;
            for (Index j = 0; j < d; ++j)
                if (u(i, j) > threshold[j]) best = std::max(best, scale[j] * z(i, j));
            sum += best;
            sum_sq += best * best;
        }
    }
    return MCEstimate::from_sample_moments(sum, sum_sq, n_samples);
}

MCEstimate thinned_dnorm(const GeneratorSpec& gen, const CopulaModel& copula,
                         const Vector& threshold, const Vector& x, Index n_samples,
                         RngStream& rng) {
    const Vector exceed = (1.0 - threshold.array()).matrix();
    return thinned_dnorm_scaled(gen, copula, threshold, exceed, x, n_samples, rng);
}

Matrix inject_margins(const Matrix& copula_samples,
                      const std::vector<QuantileFunction>& quantiles) {
    require(static_cast<Index>(quantiles.size()) == copula_samples.cols(),
            ErrorCode::dimension_mismatch, "one quantile function per column required");
    Matrix out(copula_samples.rows(), copula_samples.cols());
    for (Index j = 0; j < copula_samples.cols(); ++j) {
        const auto& q = quantiles[static_cast<std::size_t>(j)];
        require(static_cast<bool>(q), ErrorCode::margin_domain, "missing quantile function");
        for (Index i = 0; i < copula_samples.rows(); ++i) {
            const double v = q(copula_samples(i, j));
            require(std::isfinite(v), ErrorCode::margin_domain,
                    "quantile function undefined at a sampled level");
            out(i, j) = v;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

double gpd_cdf(const GpdTail& tail, double x) {
    require(tail.sigma > 0.0, ErrorCode::invalid_parameter, "GPD scale must be positive");
    const double z = (x - tail.mu) / tail.sigma;
    if (z <= 0.0) return 0.0;
    if (tail.gamma == 0.0) return 1.0 - std::exp(-z);
    const double t = 1.0 + tail.gamma * z;
    if (t <= 0.0) return tail.gamma < 0.0 ? 1.0 : 0.0;  // beyond the upper endpoint
    return 1.0 - std::pow(t, -1.0 / tail.gamma);
}

double gpd_quantile(const GpdTail& tail, double p) {
    require(tail.sigma > 0.0, ErrorCode::invalid_parameter, "GPD scale must be positive");
    require(p >= 0.0 && p < 1.0, ErrorCode::domain_error, "GPD quantile level in [0,1)");
    if (tail.gamma == 0.0) return tail.mu - tail.sigma * std::log1p(-p);
    return tail.mu + tail.sigma * std::expm1(-tail.gamma * std::log1p(-p)) / tail.gamma;
}

UnivariatePT::UnivariatePT(std::function<double(double)> base_cdf, double x0, GpdTail tail)
    : base_cdf_(std::move(base_cdf)), x0_(x0), tail_(tail) {
    require(static_cast<bool>(base_cdf_), ErrorCode::invalid_parameter, "missing base CDF");
    require(tail_.sigma > 0.0, ErrorCode::invalid_parameter, "GPD scale must be positive");
    f0_ = base_cdf_(x0_);
    require(f0_ >= 0.0 && f0_ < 1.0, ErrorCode::invalid_threshold,
            "base CDF must satisfy F(x0) < 1");
}

double UnivariatePT::cdf(double x) const {
    if (x < x0_) return base_cdf_(x);
    return f0_ + (1.0 - f0_) * gpd_cdf(tail_, x);
}

double UnivariatePT::high_quantile(double p) const {
    require(p < 1.0, ErrorCode::domain_error, "quantile level must be below 1");
    require(p > f0_, ErrorCode::below_threshold_level,
            "level at or below F(x0); use the base distribution's quantile");
    const double t = (p - f0_) / (1.0 - f0_);
    return gpd_quantile(tail_, t);
}

double univariate_pt(const UnivariatePT& pt, double x) { return pt.cdf(x); }
double high_quantile(const UnivariatePT& pt, double p) { return pt.high_quantile(p); }

namespace {

// Profile log-likelihood of the GPD over eta = gamma/sigma; gamma(eta) is the
// mean of log1p(eta * e_i). Grimshaw-style reduction to one dimension.
double gpd_profile_loglik(const std::vector<double>& excess, double eta) {
    const double n = static_cast<double>(excess.size());
    if (eta == 0.0) {
        double mean = 0.0;
        for (double e : excess) mean += e;
        mean /= n;
        return -n * (std::log(mean) + 1.0);
    }
    double gamma = 0.0;
    for (double e : excess) {
        const double t = 1.0 + eta * e;
        if (t <= 0.0) return -std::numeric_limits<double>::infinity();
        gamma += std::log(t);
    }
    gamma /= n;
    if (gamma == 0.0) return -std::numeric_limits<double>::infinity();
    return -n * (std::log(gamma / eta) + gamma + 1.0);
}

struct MlSearchResult {
    double eta = 0.0;
    double loglik = -std::numeric_limits<double>::infinity();
    bool converged = false;
};

MlSearchResult gpd_ml_search(const std::vector<double>& excess) {
    double max_e = 0.0, mean_e = 0.0;
    for (double e : excess) {
        max_e = std::max(max_e, e);
        mean_e += e;
    }
    mean_e /= static_cast<double>(excess.size());

    // Coarse grid over eta, spanning shapes from strongly negative to heavy.
    const double lo = -1.0 / max_e * (1.0 - 1e-9);
    const double hi = 50.0 / mean_e;
    const int grid_n = 400;
    MlSearchResult best;
    for (int i = 0; i <= grid_n; ++i) {
        const double frac = static_cast<double>(i) / grid_n;
        const double eta = lo + (hi - lo) * frac * frac * (3.0 - 2.0 * frac);
        const double ll = gpd_profile_loglik(excess, eta);
        if (ll > best.loglik) {
            best.loglik = ll;
            best.eta = eta;
        }
    }
    if (!std::isfinite(best.loglik)) return best;

    // Golden-section refinement around the grid optimum.
    const double span = (hi - lo) / grid_n * 4.0;
    double a = best.eta - span, b = best.eta + span;
    if (a <= lo) a = lo;
    const double gr = 0.6180339887498949;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = gpd_profile_loglik(excess, c), fd = gpd_profile_loglik(excess, d);
    for (int it = 0; it < 120; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = gpd_profile_loglik(excess, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = gpd_profile_loglik(excess, d);
        }
    }
    best.eta = 0.5 * (a + b);
    best.loglik = gpd_profile_loglik(excess, best.eta);
    best.converged = std::isfinite(best.loglik);
    return best;
}

GpdTail gpd_pwm_fit(std::vector<double> excess, double x0) {
    std::sort(excess.begin(), excess.end());
    const double n = static_cast<double>(excess.size());
    double b0 = 0.0, b1 = 0.0;
    for (std::size_t i = 0; i < excess.size(); ++i) {
        b0 += excess[i];
        // estimator of E[X (1-F(X))]: descending plotting positions
        b1 += excess[i] * (n - 1.0 - static_cast<double>(i)) / (n - 1.0);
    }
    b0 /= n;
    b1 /= n;
    const double denom = b0 - 2.0 * b1;
    require(denom > 0.0, ErrorCode::invalid_parameter,
            "probability-weighted-moments fit degenerate");
    GpdTail tail;
    tail.gamma = 2.0 - b0 / denom;
    tail.sigma = 2.0 * b0 * b1 / denom;
    tail.mu = x0;
    require(tail.sigma > 0.0, ErrorCode::invalid_parameter,
            "probability-weighted-moments fit gave nonpositive scale");
    return tail;
}

}  // namespace

GpdFitResult fit_gpd_tail(const Vector& data, double x0) {
    std::vector<double> excess;
    excess.reserve(static_cast<std::size_t>(data.size()));
    for (Index i = 0; i < data.size(); ++i) {
        require(std::isfinite(data[i]), ErrorCode::ingestion, "non-finite data value");
        if (data[i] > x0) excess.push_back(data[i] - x0);
    }
    GpdFitResult result;
    result.n_exceedances = static_cast<Index>(excess.size());
    require(result.n_exceedances >= 30, ErrorCode::insufficient_data,
            "need at least 30 exceedances above the threshold");

    const MlSearchResult ml = gpd_ml_search(excess);
    bool ok = ml.converged;
    if (ok) {
        double gamma, sigma;
        if (ml.eta == 0.0) {
            gamma = 0.0;
            sigma = 0.0;
            for (double e : excess) sigma += e;
            sigma /= static_cast<double>(excess.size());
        } else {
            gamma = 0.0;
            for (double e : excess) gamma += std::log1p(ml.eta * e);
            gamma /= static_cast<double>(excess.size());
            sigma = gamma / ml.eta;
        }
        // gamma <= -1 puts the MLE on the boundary; treat as non-convergence.
        ok = std::isfinite(gamma) && std::isfinite(sigma) && sigma > 0.0 && gamma > -1.0;
        if (ok) {
            result.tail = GpdTail{gamma, x0, sigma};
        }
    }
    if (!ok) {
        result.tail = gpd_pwm_fit(excess, x0);
        result.used_pwm = true;
    }
    return result;
}

UnivariatePT make_empirical_pt(const Vector& data, double x0) {
    GpdFitResult fit = fit_gpd_tail(data, x0);
    auto ecdf = std::make_shared<EmpiricalCdf>(data);
    return UnivariatePT([ecdf](double x) { return ecdf->cdf(x); }, x0, fit.tail);
}

}  // namespace ptcop
