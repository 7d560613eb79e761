#include <doctest.h>

#include <cmath>
#include <random>

#include "basket/io.hpp"
#include "basket/model.hpp"

using namespace basket;

namespace {

Matrix random_correlation(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Matrix a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = gauss(rng);
    Matrix c = a * a.transpose() + 0.1 * Matrix::Identity(d, d);
    Vector s = c.diagonal().array().sqrt().inverse();
    return s.asDiagonal() * c * s.asDiagonal();
}

BasketSpec two_asset(double rho_off) {
    Matrix corr(2, 2);
    corr << 1.0, rho_off, rho_off, 1.0;
    return BasketSpec(Vector::Ones(2), Vector::Ones(2), corr);
}

}  // namespace

TEST_CASE("cholesky of the identity is the identity") {
    Matrix L = cholesky_lower(Matrix::Identity(2, 2));
    CHECK((L - Matrix::Identity(2, 2)).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("cholesky of a 2x2 with off-diagonal 0.5") {
    Matrix corr(2, 2);
    corr << 1.0, 0.5, 0.5, 1.0;
    Matrix L = cholesky_lower(corr);
    CHECK(L(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(L(0, 1) == 0.0);
    CHECK(L(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(L(1, 1) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
}

TEST_CASE("cholesky rejects a singular matrix naming the minor") {
    Matrix corr(2, 2);
    corr << 1.0, 1.0, 1.0, 1.0;
    try {
        cholesky_lower(corr);
        FAIL("expected DefinitenessError");
    } catch (const DefinitenessError& e) {
        CHECK(e.minor_order == 2);
    }
}

TEST_CASE("cholesky reconstruction for random correlations up to d=10") {
    std::mt19937_64 rng(12345);
    for (int d = 2; d <= 10; ++d) {
        for (int rep = 0; rep < 5; ++rep) {
            Matrix corr = random_correlation(d, rng);
            Matrix L = cholesky_lower(corr);
            CHECK((L * L.transpose() - corr).lpNorm<Eigen::Infinity>() <= 1e-12);
            for (int i = 0; i < d; ++i)
                for (int j = i + 1; j < d; ++j) CHECK(L(i, j) == 0.0);
        }
    }
}

TEST_CASE("chart maps the spot to the origin") {
    BasketSpec spec = two_asset(0.3);
    ChartPoint cp = to_chart(spec, spec.spots());
    CHECK(cp.x_chart.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("chart of (e, 1) in the uncorrelated unit basket") {
    BasketSpec spec = two_asset(0.0);
    Vector s(2);
    s << std::exp(1.0), 1.0;
    ChartPoint cp = to_chart(spec, s);
    CHECK(cp.x_chart[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cp.x_chart[1] == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("chart of (e, e) with correlation 0.5 applies the inverse factor") {
    BasketSpec spec = two_asset(0.5);
    Vector s = Vector::Constant(2, std::exp(1.0));
    ChartPoint cp = to_chart(spec, s);
    // y = (1,1); x = L^{-1} y with L = [[1,0],[1/2, sqrt(3)/2]]
    CHECK(cp.x_chart[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cp.x_chart[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("chart rejects non-positive prices") {
    BasketSpec spec = two_asset(0.0);
    Vector s(2);
    s << 1.0, -0.5;
    CHECK_THROWS_AS(to_chart(spec, s), DomainError);
}

TEST_CASE("from_chart at the origin returns the spots") {
    BasketSpec spec = two_asset(0.25);
    Vector s = from_chart(spec, Vector::Zero(2));
    CHECK((s - spec.spots()).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("uncorrelated unit from_chart of (1,1) gives (e,e)") {
    BasketSpec spec = two_asset(0.0);
    Vector s = from_chart(spec, Vector::Ones(2));
    CHECK(s[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
    CHECK(s[1] == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
}

TEST_CASE("chart round-trip is the identity on random positive prices") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> uni(0.2, 5.0);
    for (int d : {2, 3, 5}) {
        Matrix corr = random_correlation(d, rng);
        Vector spots(d), vols(d);
        for (int i = 0; i < d; ++i) {
            spots[i] = uni(rng);
            vols[i] = 0.1 + 0.4 * uni(rng);
        }
        BasketSpec spec(spots, vols, corr);
        for (int rep = 0; rep < 100; ++rep) {
            Vector s(d);
            for (int i = 0; i < d; ++i) s[i] = uni(rng);
            Vector back = from_chart(spec, to_chart(spec, s).x_chart);
            CHECK(((back - s).array().abs() / s.array()).maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("asian reduction with a single fixing is the lognormal itself") {
    BasketSpec spec = asian_to_basket(1.0, 0.3, 1, 0.25);
    CHECK(spec.d() == 1);
    CHECK(spec.vols()[0] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(spec.corr()(0, 0) == 1.0);
    CHECK(spec.weights()[0] == 1.0);
    CHECK(spec.maturity() == 0.25);
}

TEST_CASE("asian reduction with two fixings") {
    BasketSpec spec = asian_to_basket(1.0, 0.2, 2, 0.5);
    CHECK(spec.vols()[0] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(spec.vols()[1] == doctest::Approx(0.2 * std::sqrt(2.0)).epsilon(1e-15));
    CHECK(spec.corr()(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(spec.weights()[0] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("asian reduction with three fixings") {
    BasketSpec spec = asian_to_basket(2.0, 0.4, 3, 0.1);
    CHECK(spec.corr()(0, 2) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(spec.corr()(1, 2) == doctest::Approx(2.0 / std::sqrt(6.0)).epsilon(1e-15));
    CHECK(spec.spots()[2] == 2.0);
}

TEST_CASE("asian reduction rejects zero fixings") {
    CHECK_THROWS_AS(asian_to_basket(1.0, 0.2, 0, 0.1), DomainError);
}

TEST_CASE("asian correlation stays positive definite up to 64 fixings") {
    for (int n : {8, 16, 32, 64}) {
        BasketSpec spec = asian_to_basket(1.0, 0.2, n, 0.05);
        CHECK((spec.chol() * spec.chol().transpose() - spec.corr()).lpNorm<Eigen::Infinity>() <=
              1e-12);
    }
}

TEST_CASE("spec json round-trip preserves every field") {
    Matrix corr(2, 2);
    corr << 1.0, 0.4, 0.4, 1.0;
    Vector spots(2), vols(2), w(2);
    spots << 1.0, 2.0;
    vols << 0.3, 0.5;
    w << 1.0, 1.5;
    BasketSpec spec(spots, vols, corr, 0.01, w, 2.0);
    BasketSpec back = spec_from_json(spec_to_json(spec));
    CHECK((back.spots() - spec.spots()).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((back.vols() - spec.vols()).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((back.corr() - spec.corr()).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((back.weights() - spec.weights()).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(back.rate() == spec.rate());
    CHECK(back.maturity() == spec.maturity());
}

TEST_CASE("spec json errors carry the field name") {
    try {
        spec_from_json(json::parse(R"({"vols":[0.2,0.2]})"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field == "spots");
    }
    try {
        spec_from_json(json::parse(R"({"spots":[1,1],"vols":[0.2,0.2],"corr":[[1,2],[2,1]]})"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field == "corr");
    }
}

TEST_CASE("near-singular correlation is rejected") {
    Matrix corr(2, 2);
    corr << 1.0, 1.0 - 1e-13, 1.0 - 1e-13, 1.0;
    CHECK_THROWS_AS(BasketSpec(Vector::Ones(2), Vector::Ones(2), corr), DefinitenessError);
}
