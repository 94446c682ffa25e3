#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ptcop/empirical.hpp"
#include "ptcop/pt.hpp"
#include "support.hpp"

using namespace ptcop;

TEST_CASE("standardized ranks follow the counting definition") {
    Matrix data(3, 1);
    data << 5.0, 1.0, 9.0;
    RankMatrix ranks = standardized_ranks(data);
    CHECK(ranks.values()(0, 0) == doctest::Approx(0.5));
    CHECK(ranks.values()(1, 0) == doctest::Approx(0.25));
    CHECK(ranks.values()(2, 0) == doctest::Approx(0.75));

    // ties share the literal counting value
    Matrix tied(2, 1);
    tied << 3.0, 3.0;
    RankMatrix tr = standardized_ranks(tied);
    CHECK(tr.values()(0, 0) == doctest::Approx(2.0 / 3.0));
    CHECK(tr.values()(1, 0) == doctest::Approx(2.0 / 3.0));

    Matrix single(1, 1);
    single << 42.0;
    CHECK(standardized_ranks(single).values()(0, 0) == doctest::Approx(0.5));

    Matrix bad(2, 1);
    bad << 1.0, std::nan("");
    CHECK_THROWS_AS(standardized_ranks(bad), Error);
}

TEST_CASE("empirical copula cdf") {
    Matrix data(3, 1);
    data << 5.0, 1.0, 9.0;
    RankMatrix ranks = standardized_ranks(data);

    Vector v(1);
    v << 1.0;
    CHECK(ranks.cdf(v) == 1.0);
    v << 0.0;
    CHECK(ranks.cdf(v) == 0.0);
    v << 0.6;
    CHECK(ranks.cdf(v) == doctest::Approx(2.0 / 3.0));

    // nondecreasing in each argument, values on the 1/n lattice
    RngStream rng(3);
    Matrix data2(40, 2);
    for (Index i = 0; i < 40; ++i)
        for (Index j = 0; j < 2; ++j) data2(i, j) = rng.normal();
    RankMatrix r2 = standardized_ranks(data2);
    for (int k = 0; k < 200; ++k) {
        Vector a(2), b(2);
        for (Index j = 0; j < 2; ++j) {
            a[j] = rng.u01();
            b[j] = std::min(1.0, a[j] + rng.u01() * 0.3);
        }
        const double ca = r2.cdf(a), cb = r2.cdf(b);
        CHECK(ca <= cb);
        CHECK(std::round(ca * 40.0) == doctest::Approx(ca * 40.0).epsilon(1e-12));
    }
}

TEST_CASE("threshold mass matches the d=1 oracle") {
    Matrix data(3, 1);
    data << 5.0, 1.0, 9.0;
    RankMatrix ranks = standardized_ranks(data);
    Vector u(1);
    u << 0.5;
    CHECK(ranks.threshold_mass(u)[0] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("empirical PT realizes the formula with u* in the upper branch") {
    RngStream data_rng(5);
    Matrix data(50, 2);
    for (Index i = 0; i < 50; ++i)
        for (Index j = 0; j < 2; ++j) data(i, j) = data_rng.normal();
    RankMatrix ranks = standardized_ranks(data);

    Vector u(2);
    u << 0.5, 0.5;
    GpdCopulaModel gpd(GeneratorSpec::unit_vector(2));
    const Vector u_star = ranks.threshold_mass(u);

    const Index n = 400;
    RngStream replay(777, 0);
    Matrix u_resampled = as_copula(ranks).sample(replay, n);
    Matrix v = gpd.sample(replay, n);

    RngStream rng(777, 0);
    Matrix y = empirical_pt_sample(ranks, gpd, u, rng, n);

    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < 2; ++j) {
            double expected;
            if (u_resampled(i, j) <= u[j]) expected = u_resampled(i, j);
            else expected = u_star[j] + (1.0 - u_star[j]) * v(i, j);
            CHECK(y(i, j) == expected);
        }

    // spot value: rank row 0.75, u* = 2/3, V = 0.9 -> 2/3 + 0.3 = 0.9666...
    CHECK(2.0 / 3.0 + (1.0 / 3.0) * 0.9 == doctest::Approx(0.96667).epsilon(1e-4));
}

TEST_CASE("a threshold above all ranks is rejected") {
    Matrix data(4, 2);
    data << 1.0, 2.0, 2.0, 1.0, 3.0, 4.0, 4.0, 3.0;
    RankMatrix ranks = standardized_ranks(data);
    GpdCopulaModel gpd(GeneratorSpec::constant(2));
    RngStream rng(1);
    CHECK_THROWS_AS(
        empirical_pt_sample(ranks, gpd, Vector::Constant(2, 0.9), rng, 10), Error);
}

TEST_CASE("empirical PT reproduces C_n below min(u, u*)") {
    RngStream data_rng(9);
    const Index n_data = 2000;
    Matrix data(n_data, 2);
    for (Index i = 0; i < n_data; ++i) {
        const double a = data_rng.normal();
        data(i, 0) = a;
        data(i, 1) = 0.5 * a + data_rng.normal();
    }
    RankMatrix ranks = standardized_ranks(data);
    Vector u = Vector::Constant(2, 0.8);
    const Vector u_star = ranks.threshold_mass(u);
    const Vector cap = u.cwiseMin(u_star);

    GpdCopulaModel gpd(GeneratorSpec::unit_vector(2));
    RngStream rng(11, 0);
    const Index n_out = 20000;
    Matrix y = empirical_pt_sample(ranks, gpd, u, rng, n_out);

    const double band = 4.0 * std::sqrt(1.0 / (4.0 * static_cast<double>(n_out)));
    for (double fa : {0.25, 0.5, 0.75, 1.0}) {
        for (double fb : {0.5, 1.0}) {
            Vector x(2);
            x << fa * cap[0], fb * cap[1];
            const double fy = oracle::empirical_cdf(y, x);
            CHECK(std::abs(fy - ranks.cdf(x)) <= band);
        }
    }
}

TEST_CASE("empirical upper tail matches the empirically thinned norm") {
    RngStream data_rng(13);
    const Index n_data = 3000;
    Matrix data(n_data, 2);
    for (Index i = 0; i < n_data; ++i) {
        const double a = data_rng.normal();
        data(i, 0) = a + 0.3 * data_rng.normal();
        data(i, 1) = a + 0.3 * data_rng.normal();
    }
    RankMatrix ranks = standardized_ranks(data);
    Vector u = Vector::Constant(2, 0.7);
    auto gen = GeneratorSpec::scaled_copula(CopulaModel::comonotone(2));
    GpdCopulaModel gpd(gen);

    RngStream rng(17, 0);
    const Index n_out = 100000;
    Matrix y = empirical_pt_sample(ranks, gpd, u, rng, n_out);

    // exact region: x_j >= 1 + (1 - u*_j) K
    const Vector u_star = ranks.threshold_mass(u);
    RngStream norm_rng(17, 1);
    for (double t : {0.93, 0.96, 0.99}) {
        Vector x = Vector::Constant(2, t);
        bool inside = true;
        for (Index j = 0; j < 2; ++j)
            if (x[j] < 1.0 + (1.0 - u_star[j]) * gpd.clip_k()) inside = false;
        REQUIRE(inside);
        MCEstimate norm_est = empirical_thinned_dnorm(
            gen, ranks, u, x - Vector::Ones(2), 100000, norm_rng);
        const double p_hat = oracle::empirical_cdf(y, x);
        const double band = 4.0 * std::hypot(std::sqrt(p_hat * (1 - p_hat) / n_out),
                                             norm_est.std_error);
        CHECK(std::abs(p_hat - (1.0 - norm_est.value)) <= band);
    }
}
