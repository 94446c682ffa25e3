#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ptcop/pt.hpp"
#include "ptcop/verify.hpp"
#include "support.hpp"

using namespace ptcop;

namespace {

PTConfig basic_config() {
    Vector u(2);
    u << 0.5, 0.5;
    return PTConfig(u, CopulaModel::independence(2),
                    GpdCopulaModel(GeneratorSpec::constant(2)));
}

}  // namespace

TEST_CASE("pt_sample realizes the two-branch formula draw for draw") {
    PTConfig config = basic_config();
    const Index n = 500;

    // replay the exact same draws and combine by hand
    RngStream replay(1234, 0);
    Matrix u = config.copula.sample(replay, n);
    Matrix v = config.gpd.sample(replay, n);

    RngStream rng(1234, 0);
    Matrix y = pt_sample(config, rng, n);

    bool upper_branch_seen = false, lower_branch_seen = false;
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < 2; ++j) {
            const double uj = config.threshold[j];
            double expected;
            if (u(i, j) <= uj) {
                expected = u(i, j);
                lower_branch_seen = true;
            } else {
                expected = uj + (1.0 - uj) * v(i, j);
                upper_branch_seen = true;
            }
            CHECK(y(i, j) == expected);
        }
    CHECK(lower_branch_seen);
    CHECK(upper_branch_seen);
}

TEST_CASE("thresholds on the boundary are rejected") {
    Vector u(2);
    u << 0.5, 1.0;
    CHECK_THROWS_AS(PTConfig(u, CopulaModel::independence(2),
                             GpdCopulaModel(GeneratorSpec::constant(2))),
                    Error);
}

TEST_CASE("pt margins are uniform and the lower region reproduces C") {
    PTConfig config = basic_config();
    const Index n = 100000;
    RngStream rng(7, 1);
    Matrix y = pt_sample(config, rng, n);

    for (auto& report : margin_uniformity(y, 7)) CHECK(report.pass);

    // coincidence with the independence copula below the threshold
    Vector x(2);
    x << 0.3, 0.4;
    const double p_hat = oracle::empirical_cdf(y, x);
    CHECK(std::abs(p_hat - 0.12) <=
          4.0 * std::sqrt(0.12 * 0.88 / static_cast<double>(n)));
}

TEST_CASE("thinned norm reproduces the enumeration oracles") {
    Vector u(2), x(2);
    u << 0.5, 0.5;

    RngStream rng(11, 0);
    auto gen = GeneratorSpec::constant(2);
    auto indep = CopulaModel::independence(2);

    x << 1.0, 1.0;
    CHECK(oracle::thinned_norm_indep_constant(u, x) == doctest::Approx(1.5));
    MCEstimate est = thinned_dnorm(gen, indep, u, x, 100000, rng);
    CHECK(std::abs(est.value - 1.5) <= 4.0 * est.std_error);

    x << 1.0, 0.0;
    CHECK(oracle::thinned_norm_indep_constant(u, x) == doctest::Approx(1.0));
    est = thinned_dnorm(gen, indep, u, x, 100000, rng);
    CHECK(std::abs(est.value - 1.0) <= 4.0 * est.std_error);

    // comonotone U: a single Bernoulli outcome
    x << 1.0, 1.0;
    CHECK(oracle::thinned_norm_comonotone_constant(0.5, x) == doctest::Approx(1.0));
    est = thinned_dnorm(gen, CopulaModel::comonotone(2), u, x, 100000, rng);
    CHECK(std::abs(est.value - 1.0) <= 4.0 * est.std_error);
}

TEST_CASE("thinned generator components keep unit means") {
    Vector u(2);
    u << 0.4, 0.6;
    auto gen = GeneratorSpec::unit_vector(2);
    auto copula = CopulaModel::independence(2);
    const Index n = 100000;
    RngStream rng(13, 0);
    Matrix z = gen.sample(rng, n);
    Matrix uu = copula.sample(rng, n);
    for (Index j = 0; j < 2; ++j) {
        double mean = 0.0;
        for (Index i = 0; i < n; ++i)
            if (uu(i, j) > u[j]) mean += z(i, j);
        mean /= static_cast<double>(n) * (1.0 - u[j]);
        const double band = 4.0 * gen.bound() /
                            ((1.0 - u[j]) * std::sqrt(static_cast<double>(n)));
        CHECK(std::abs(mean - 1.0) <= band);
    }
}

TEST_CASE("upper tail of the PT copula matches the thinned norm") {
    // generator with c > 1 so the fill-in path is exercised
    Vector u(2);
    u << 0.5, 0.5;
    auto gen = GeneratorSpec::unit_vector(2);
    auto copula = CopulaModel::independence(2);
    PTConfig config(u, copula, GpdCopulaModel(gen));

    const Vector lower = config.exact_region_lower();
    CHECK(lower[0] == doctest::Approx(0.75));

    const Index n = 100000;
    RngStream rng(17, 1);
    Matrix y = pt_sample(config, rng, n);
    RngStream norm_rng(17, 2);
    for (double a : {0.8, 0.9, 0.97}) {
        Vector x(2);
        x << a, 0.95;
        MCEstimate norm_est =
            thinned_dnorm(gen, copula, u, x - Vector::Ones(2), n, norm_rng);
        const double p_hat = oracle::empirical_cdf(y, x);
        const double band =
            4.0 * std::hypot(binomial_se(p_hat, n), norm_est.std_error);
        CHECK(std::abs(p_hat - (1.0 - norm_est.value)) <= band);
    }
}

TEST_CASE("inject_margins applies quantile functions columnwise") {
    Matrix samples(3, 2);
    samples << 0.2, 0.6321205588285577, 0.5, 0.5, 0.9, 0.1;

    std::vector<QuantileFunction> qs;
    qs.emplace_back([](double p) { return p; });
    qs.emplace_back([](double p) { return -std::log1p(-p); });
    Matrix out = inject_margins(samples, qs);
    CHECK(out(0, 0) == 0.2);
    CHECK(out(0, 1) == doctest::Approx(1.0).epsilon(1e-12));

    // monotonicity is preserved per column
    Matrix sorted(4, 1);
    sorted << 0.1, 0.2, 0.7, 0.9;
    std::vector<QuantileFunction> exp_q;
    exp_q.emplace_back([](double p) { return -std::log1p(-p); });
    Matrix tx = inject_margins(sorted, exp_q);
    for (Index i = 1; i < 4; ++i) CHECK(tx(i, 0) > tx(i - 1, 0));

    std::vector<QuantileFunction> bad;
    bad.emplace_back([](double) { return std::nan(""); });
    CHECK_THROWS_AS(inject_margins(sorted, bad), Error);
    CHECK_THROWS_AS(inject_margins(samples, bad), Error);  // count mismatch
}

TEST_CASE("univariate piecing together with an exponential tail") {
    const double x0 = 2.0;
    auto base = [](double x) { return x < 2.0 ? 0.45 * x : 0.9; };
    UnivariatePT pt(base, x0, GpdTail{0.0, x0, 1.0});

    CHECK(pt.cdf(x0) == doctest::Approx(0.9));
    CHECK(pt.cdf(1.0) == doctest::Approx(0.45));
    CHECK(pt.cdf(x0 + std::log(10.0)) == doctest::Approx(0.99).epsilon(1e-12));

    CHECK(high_quantile(pt, 0.99) == doctest::Approx(x0 + std::log(10.0)).epsilon(1e-12));
    CHECK(high_quantile(pt, 0.9 + 1e-9) == doctest::Approx(x0).epsilon(1e-4));
    CHECK_THROWS_AS(high_quantile(pt, 0.9), Error);
    CHECK_THROWS_AS(high_quantile(pt, 0.5), Error);

    CHECK_THROWS_AS(UnivariatePT(base, x0, GpdTail{0.0, x0, -1.0}), Error);
}

TEST_CASE("gpd cdf and quantile are inverse to each other") {
    RngStream rng(19);
    for (double gamma : {-0.4, -0.1, 0.0, 0.3, 1.0}) {
        GpdTail tail{gamma, 1.5, 0.8};
        for (int k = 0; k < 200; ++k) {
            const double p = rng.u01() * 0.999;
            const double x = gpd_quantile(tail, p);
            CHECK(gpd_cdf(tail, x) == doctest::Approx(p).epsilon(1e-9));
        }
    }
}

TEST_CASE("tail fitting recovers exponential and Pareto shapes") {
    const Index n = 100000;

    SUBCASE("exponential excesses") {
        RngStream rng(23);
        const double sigma = 1.7, x0 = 4.0;
        Vector data(n);
        for (Index i = 0; i < n; ++i) data[i] = x0 - sigma * std::log(rng.u01());
        GpdFitResult fit = fit_gpd_tail(data, x0);
        CHECK(fit.n_exceedances == n);
        CHECK(fit.tail.mu == x0);
        CHECK(std::abs(fit.tail.gamma) <= 0.05);
        CHECK(std::abs(fit.tail.sigma / sigma - 1.0) <= 0.05);
    }

    SUBCASE("Pareto alpha=2 excesses: gamma = 1/2") {
        RngStream rng(29);
        Vector data(n);
        for (Index i = 0; i < n; ++i) data[i] = std::pow(rng.u01(), -0.5);
        GpdFitResult fit = fit_gpd_tail(data, 1.0);
        CHECK(std::abs(fit.tail.gamma - 0.5) <= 0.05);
    }

    SUBCASE("too few exceedances") {
        Vector data(10);
        for (Index i = 0; i < 10; ++i) data[i] = 2.0 + static_cast<double>(i);
        CHECK_THROWS_AS(fit_gpd_tail(data, 1.5), Error);
    }
}

TEST_CASE("exceedance conditioning agrees exactly for a GPD-copula base") {
    // C itself is the GPD-copula with the same generator
    for (auto gen : {GeneratorSpec::constant(2),
                     GeneratorSpec::scaled_copula(CopulaModel::comonotone(2))}) {
        Vector u(2);
        u << 0.6, 0.6;
        std::vector<Vector> v_grid;
        for (double t : {0.9, 0.95, 0.99}) v_grid.push_back(Vector::Constant(2, t));
        CheckReport r = pot_conditional_agreement(as_copula(GpdCopulaModel(gen)), gen, u,
                                                  v_grid, 100000, 31, 0, true);
        CHECK(r.pass);
    }
}

TEST_CASE("empirical base with fitted tail composes") {
    RngStream rng(37);
    Vector data(5000);
    for (Index i = 0; i < data.size(); ++i) data[i] = -std::log(rng.u01());
    UnivariatePT pt = make_empirical_pt(data, 2.0);
    CHECK(pt.base_at_threshold() == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(0.05));
    const double q = pt.high_quantile(0.999);
    CHECK(q == doctest::Approx(-std::log(0.001)).epsilon(0.15));
}
