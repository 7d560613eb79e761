#include <doctest.h>

#include <cmath>

#include "basket/oracle.hpp"
#include "oracle_helpers.hpp"

using namespace basket;

namespace {

BasketSpec unit2() { return BasketSpec::symmetric(2); }

BasketSpec two_asset(double s1, double s2, double v1, double v2) {
    Vector spots(2), vols(2);
    spots << s1, s2;
    vols << v1, v2;
    return BasketSpec(spots, vols, Matrix::Identity(2, 2));
}

}  // namespace

TEST_CASE("lognormal density at the log-mean and at one") {
    double mu = 0.3, xi = 0.5;
    CHECK(lognormal_pdf(std::exp(mu), mu, xi) ==
          doctest::Approx(1.0 / (std::sqrt(2.0 * M_PI) * xi * std::exp(mu))).epsilon(1e-15));
    CHECK(lognormal_pdf(1.0, 0.0, 1.0) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-15));
    CHECK(lognormal_pdf(0.0, 0.0, 1.0) == 0.0);
    CHECK(lognormal_pdf(-1.0, 0.0, 1.0) == 0.0);
}

TEST_CASE("lognormal density integrates to one") {
    double mu = -0.2, xi = 0.7;
    double mass = testoracle::adaptive_simpson(
        [mu, xi](double u) {  // x = e^u
            double x = std::exp(u);
            return lognormal_pdf(x, mu, xi) * x;
        },
        mu - 12.0 * xi, mu + 12.0 * xi, 1e-13);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("h function: stationarity and curvature at the midpoint") {
    double K = 4.0, T = 0.02;
    HDerivatives d = h_function(K, T, K / 2.0);
    CHECK(std::abs(d.h1) <= 1e-14);
    CHECK(d.h2 ==
          doctest::Approx(16.0 * (1.0 - std::log(K / 2.0) - T / 2.0) / (K * K)).epsilon(1e-13));
}

TEST_CASE("h function: exact degeneracy on the strike family 2 e^{1-T/2}") {
    for (double T : {0.5, 0.1, 0.01}) {
        double K = 2.0 * std::exp(1.0 - 0.5 * T);
        HDerivatives d = h_function(K, T, K / 2.0);
        CHECK(std::abs(d.h2) <= 1e-14);
        CHECK(d.h == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(d.h4 == doctest::Approx(20.0 * std::exp(2.0 * T - 4.0)).epsilon(1e-13));
    }
}

TEST_CASE("h function rejects arguments outside (0, K)") {
    CHECK_THROWS_AS(h_function(4.0, 0.1, 0.0), DomainError);
    CHECK_THROWS_AS(h_function(4.0, 0.1, 4.0), DomainError);
    CHECK_THROWS_AS(h_function(4.0, 0.1, -1.0), DomainError);
}

TEST_CASE("the minimizer of h sits at the midpoint below the critical strike") {
    double K = 4.0, T = 0.02;
    // bisection on h'
    double lo = 1.0, hi = 3.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (h_function(K, T, mid).h1 < 0.0) lo = mid; else hi = mid;
    }
    CHECK(std::abs(0.5 * (lo + hi) - K / 2.0) <= 1e-12);
}

TEST_CASE("convolution density is symmetric under swapping the assets") {
    BasketSpec a = two_asset(1.0, 1.4, 0.5, 0.9);
    BasketSpec b = two_asset(1.4, 1.0, 0.9, 0.5);
    for (double K : {1.8, 2.4, 3.2}) {
        double fa = convolution_density(a, K, 0.5);
        double fb = convolution_density(b, K, 0.5);
        CHECK(fa == doctest::Approx(fb).epsilon(1e-11));
    }
}

TEST_CASE("convolution density integrates to one in the strike") {
    BasketSpec spec = unit2();
    for (double T : {0.01, 0.1, 1.0}) {
        double mass = testoracle::adaptive_simpson(
            [&spec, T](double u) {  // K = e^u
                double K = std::exp(u);
                return convolution_density(spec, K, T, 1e-10) * K;
            },
            std::log(2.0) - 0.6 * T - 14.0 * std::sqrt(T),
            std::log(2.0) + 14.0 * std::sqrt(T) + T, 1e-9);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("convolution density agrees with an independent quadrature") {
    BasketSpec spec = two_asset(1.0, 1.2, 0.4, 0.7);
    for (double K : {1.5, 2.2, 3.0}) {
        for (double T : {0.05, 0.5}) {
            double mine = log_convolution_density(spec, K, T);
            double mu1 = std::log(1.0) - 0.5 * 0.4 * 0.4 * T;
            double mu2 = std::log(1.2) - 0.5 * 0.7 * 0.7 * T;
            double ref = testoracle::log_lognormal_convolution(K, mu1, 0.4 * std::sqrt(T), mu2,
                                                               0.7 * std::sqrt(T));
            CHECK(mine == doctest::Approx(ref).epsilon(1e-9));
        }
    }
}

TEST_CASE("short-maturity exponent of the convolution density") {
    // -T log f(4, T) -> log(2)^2 under {1, T, T log T} extrapolation.
    BasketSpec spec = unit2();
    Eigen::Matrix3d A;
    Eigen::Vector3d b;
    std::vector<double> Ts{0.05, 0.02, 0.01};
    for (int i = 0; i < 3; ++i) {
        A.row(i) << 1.0, Ts[i], Ts[i] * std::log(Ts[i]);
        b[i] = -Ts[i] * log_convolution_density(spec, 4.0, Ts[i]);
    }
    double lambda = A.fullPivLu().solve(b)[0];
    CHECK(std::abs(lambda - std::pow(std::log(2.0), 2)) <= 1e-3);
}

TEST_CASE("convolution rejects unsupported baskets") {
    CHECK_THROWS_AS(convolution_density(BasketSpec::symmetric(3), 3.0, 0.5), PreconditionError);
    Matrix corr(2, 2);
    corr << 1.0, 0.4, 0.4, 1.0;
    BasketSpec correlated(Vector::Ones(2), Vector::Ones(2), corr);
    CHECK_THROWS_AS(convolution_density(correlated, 2.0, 0.5), PreconditionError);
}

TEST_CASE("laplace approximation: quartic branch on the degenerate family") {
    double T = 0.01;
    double K = 2.0 * std::exp(1.0 - 0.5 * T);
    LaplaceDensity l = laplace_density(K, T);
    CHECK(l.branch == LaplaceBranch::quartic);
    CHECK(!l.mixed_regime_warning);
    double c0 = std::pow(3.0, 0.25) * std::tgamma(0.25) /
                (std::pow(5.0, 0.25) * 2.0 * std::sqrt(2.0) * M_PI * std::exp(1.0));
    CHECK(l.value == doctest::Approx(c0 * std::exp(-1.0 / T) * std::pow(T, -0.75)).epsilon(1e-12));
}

TEST_CASE("laplace approximation tracks the quadrature oracle at K=4") {
    BasketSpec spec = unit2();
    LaplaceDensity l = laplace_density(4.0, 0.01);
    CHECK(l.branch == LaplaceBranch::quadratic);
    double ref = convolution_density(spec, 4.0, 0.01);
    CHECK(std::abs(l.value / ref - 1.0) <= 0.03);
}

TEST_CASE("laplace over quadrature tends to one as maturity shrinks") {
    BasketSpec spec = unit2();
    double prev = 1e9;
    for (double T : {0.05, 0.02, 0.01, 0.005}) {
        double ratio = laplace_density(4.0, T).value / convolution_density(spec, 4.0, T);
        CHECK(std::abs(ratio - 1.0) < std::abs(prev - 1.0) + 1e-12);
        prev = ratio;
    }
    CHECK(std::abs(prev - 1.0) <= 0.015);
}

TEST_CASE("laplace approximation above the critical strike uses both wells") {
    BasketSpec spec = unit2();
    double T = 0.005;
    for (double K : {6.0, 7.0}) {
        LaplaceDensity l = laplace_density(K, T);
        CHECK(l.branch == LaplaceBranch::quadratic);
        double ref = convolution_density(spec, K, T);
        CHECK(std::abs(l.value / ref - 1.0) <= 0.05);
    }
}

TEST_CASE("laplace approximation warns between the regimes") {
    double T = 0.01;
    double K = 2.0 * std::exp(1.0 - 0.5 * T) + 2e-4;
    LaplaceDensity l = laplace_density(K, T);
    CHECK(l.mixed_regime_warning);
    CHECK(l.value > 0.0);
}

TEST_CASE("monte carlo density of one asset follows the lognormal") {
    Vector spots(1), vols(1);
    spots << 1.0;
    vols << 0.4;
    BasketSpec spec(spots, vols, Matrix::Identity(1, 1));
    double T = 0.5;
    Vector grid = Vector::LinSpaced(25, 0.5, 1.9);
    DensityCurve mc = mc_density(spec, grid, T, 200000, 7, 0.012);
    double mu = -0.5 * 0.4 * 0.4 * T, xi = 0.4 * std::sqrt(T);
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        CHECK(mc.values[i] >= 0.0);
        CHECK(std::abs(mc.values[i] - lognormal_pdf(grid[i], mu, xi)) <= 3.0 * mc.stderrs[i]);
    }
}

TEST_CASE("monte carlo density agrees with the convolution at K=4") {
    BasketSpec spec = unit2();
    Vector grid(1);
    grid << 4.0;
    DensityCurve mc = mc_density(spec, grid, 0.5, 400000, 11, 0.02);
    double ref = convolution_density(spec, 4.0, 0.5);
    CHECK(std::abs(mc.values[0] - ref) <= 3.0 * mc.stderrs[0]);
}

TEST_CASE("monte carlo curves are reproducible bit for bit") {
    BasketSpec spec = unit2();
    Vector grid = Vector::LinSpaced(10, 1.0, 4.0);
    DensityCurve a = mc_density(spec, grid, 0.25, 20000, 123);
    DensityCurve b = mc_density(spec, grid, 0.25, 20000, 123);
    DensityCurve c = mc_density(spec, grid, 0.25, 20000, 124);
    CHECK((a.values - b.values).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((a.stderrs - b.stderrs).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((a.values - c.values).lpNorm<Eigen::Infinity>() != 0.0);
}

TEST_CASE("monte carlo validates its inputs") {
    BasketSpec spec = unit2();
    Vector grid(1);
    grid << 2.0;
    CHECK_THROWS_AS(mc_density(spec, grid, 0.5, 5000, 1), PreconditionError);
    CHECK_THROWS_AS(mc_density(spec, grid, 0.0, 20000, 1), PreconditionError);
}
