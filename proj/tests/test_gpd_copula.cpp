#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ptcop/gpd_copula.hpp"
#include "ptcop/stats.hpp"
#include "ptcop/verify.hpp"
#include "support.hpp"

using namespace ptcop;

TEST_CASE("GP function evaluation and domain guard") {
    GPFunction h1(DNorm::sup(1));
    Vector x1(1);
    x1 << -0.25;
    CHECK(h1.eval(x1).value == doctest::Approx(0.75));

    GPFunction hsup(DNorm::sup(2));
    Vector x(2);
    x << -0.2, -0.5;
    CHECK(hsup.eval(x).value == doctest::Approx(0.5));

    GPFunction hone(DNorm::one(2));
    x << -0.6, -0.7;
    CHECK_THROWS_AS(hone.eval(x), Error);  // norm 1.3 > 1

    x << 0.1, -0.5;
    CHECK_THROWS_AS(hsup.eval(x), Error);  // positive component
}

TEST_CASE("upper-region cdf in closed form") {
    GpdCopulaModel sup_model(GeneratorSpec::constant(2));
    Vector u(2);
    u << 0.9, 0.95;
    CHECK(sup_model.cdf_upper(u).value == doctest::Approx(0.9));

    GpdCopulaModel one_model(GeneratorSpec::unit_vector(2));
    CHECK(one_model.clip_k() == doctest::Approx(-0.5));
    CHECK(one_model.cdf_upper(u).value == doctest::Approx(0.85));

    u << 1.0, 1.0;
    CHECK(one_model.cdf_upper(u).value == doctest::Approx(1.0));

    u << 0.3, 0.95;  // below 1 + K = 0.5
    CHECK_THROWS_AS(one_model.cdf_upper(u), Error);
}

TEST_CASE("constant generator gives the comonotone copula") {
    GpdCopulaModel model(GeneratorSpec::constant(3));
    CHECK(model.clip_k() == doctest::Approx(-1.0));
    RngStream rng(5);
    Matrix y = model.sample(rng, 2000);
    for (Index i = 0; i < y.rows(); ++i) {
        CHECK(y(i, 0) == y(i, 1));
        CHECK(y(i, 1) == y(i, 2));
        CHECK(y(i, 0) > 0.0);
        CHECK(y(i, 0) < 1.0);
    }
    // P(component <= 0.7) = 0.7
    const Index n = 100000;
    RngStream rng2(6);
    Matrix big = model.sample(rng2, n);
    const double p = (big.col(0).array() <= 0.7).cast<double>().mean();
    CHECK(std::abs(p - 0.7) <= 4.0 * std::sqrt(0.7 * 0.3 / static_cast<double>(n)));
}

TEST_CASE("margins are uniform and the upper tail matches the norm") {
    const Index n = 100000;
    std::uint64_t stream = 0;
    for (auto gen : {GeneratorSpec::unit_vector(2),
                     GeneratorSpec::scaled_copula(CopulaModel::independence(2))}) {
        GpdCopulaModel model(gen);
        RngStream rng(42, ++stream);
        Matrix y = model.sample(rng, n);

        for (auto& report : margin_uniformity(y, 42)) CHECK(report.pass);

        // empirical CDF against 1 - ||u - 1|| on the exact region
        RngStream norm_rng(43, stream);
        for (double a : {0.80, 0.90, 0.97}) {
            for (double b : {0.85, 0.99}) {
                Vector u(2);
                u << a, b;
                const double p_hat = oracle::empirical_cdf(y, u);
                MCEstimate expected = model.cdf_upper(u, &norm_rng);
                const double band =
                    4.0 * std::hypot(binomial_se(p_hat, n), expected.std_error);
                CHECK(std::abs(p_hat - expected.value) <= band);
            }
        }
    }
}

TEST_CASE("clipped components share a single fill-in value") {
    // scaled independence copula: both components can clip at once
    GpdCopulaModel model(GeneratorSpec::scaled_copula(CopulaModel::independence(2)));
    const double k = model.clip_k();
    CHECK(k == doctest::Approx(-0.5));
    RngStream rng(7);
    Matrix y = model.sample(rng, 50000);
    Index multi_clipped_rows = 0;
    for (Index i = 0; i < y.rows(); ++i) {
        double fill = 0.0;
        Index clipped = 0;
        for (Index j = 0; j < y.cols(); ++j) {
            if (y(i, j) < 1.0 + k) {
                if (clipped == 0) fill = y(i, j);
                else CHECK(y(i, j) == fill);  // bitwise shared
                ++clipped;
            }
        }
        if (clipped > 1) ++multi_clipped_rows;
    }
    CHECK(multi_clipped_rows > 0);
}

TEST_CASE("unit-vector generator produces exact tail independence") {
    GpdCopulaModel model(GeneratorSpec::unit_vector(2));
    RngStream rng(9);
    Matrix y = model.sample(rng, 100000);
    Vector v(2);
    v << 0.95, 0.95;
    // one component is always a fill-in below 1 + K = 0.5
    CHECK(oracle::empirical_survival(y, v) == 0.0);
}

TEST_CASE("configuration guards") {
    CHECK_THROWS_AS(GpdCopulaModel(GeneratorSpec::constant(2), 0.5), Error);
    // c = 1 with M <= -1: no fill-in needed, V = -U
    GpdCopulaModel no_clip(GeneratorSpec::constant(2), -2.0);
    CHECK(no_clip.clip_k() == doctest::Approx(-1.0));
    RngStream rng(3);
    Matrix y = no_clip.sample(rng, 100);
    CHECK((y.array() > 0.0).all());
    CHECK((y.array() < 1.0).all());

    // c = 1 with M > -1 clips against M and stays uniform
    GpdCopulaModel shallow(GeneratorSpec::constant(1), -0.25);
    RngStream rng2(4);
    Matrix z = shallow.sample(rng2, 100000);
    for (auto& report : margin_uniformity(z, 4)) CHECK(report.pass);
}
