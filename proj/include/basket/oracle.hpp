#pragma once

#include <cstdint>

#include "basket/model.hpp"

namespace basket {

// Density of the lognormal distribution with log-mean mu and log-stddev xi.
// Returns 0 for x <= 0 (support convention).
double lognormal_pdf(double x, double mu, double xi);

/// Exponent h_K of the two-asset unit-parameter convolution integrand,
///   h_K(x) = (log x + T/2)^2 + (log(K-x) + T/2)^2,
/// with its first, second and fourth derivatives.
struct HDerivatives {
    double h = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;
    double h4 = 0.0;
};

HDerivatives h_function(double K, double T, double x);

// Exact density of a two-asset uncorrelated basket at strike K and maturity
// T by adaptive Gauss--Kronrod quadrature of the lognormal convolution
//   f_T(K) = int_0^K f_{mu1,xi1}(K - x) f_{mu2,xi2}(x) dx,
// with mu_i = log S0_i - sigma_i^2 T / 2 and xi_i = sigma_i sqrt(T). The
// integration variable is mapped through x = K / (1 + e^{-u}) so nodes
// concentrate at the sharp interior peak for small T.
double convolution_density(const BasketSpec& spec, double K, double T,
                           double rel_tol = 1e-9);

// log f_T(K), stable for maturities where f itself would underflow.
double log_convolution_density(const BasketSpec& spec, double K, double T,
                               double rel_tol = 1e-9);

enum class LaplaceBranch { quadratic, quartic };

/// Laplace approximation of the unit two-asset convolution density.
struct LaplaceDensity {
    double value = 0.0;
    LaplaceBranch branch = LaplaceBranch::quadratic;
    bool mixed_regime_warning = false;  // h''(x*) nearly zero off the degenerate family
};

// Quadratic branch when the saddle is non-degenerate; at the degenerate
// strike family K = 2 e^{1 - T/2} the minimum is quartic and the value is
//   [3^{1/4} Gamma(1/4) / (5^{1/4} 2 sqrt(2) pi e)] exp(-1/T) T^{-3/4}.
// When h''(K/2) < 0 the interior minima of h are used instead of the
// midpoint (both contribute).
LaplaceDensity laplace_density(double K, double T);

enum class DensityMethod { quadrature, laplace, monte_carlo };

struct DensityCurve {
    Vector strikes;
    Vector values;
    Vector stderrs;  // per-point statistical error; zero unless monte_carlo
    DensityMethod method = DensityMethod::quadrature;
};

// Seeded Monte Carlo density estimate of the basket value at maturity T on
// K_grid: Gaussian-kernel estimate over n_paths samples
//   B_T = sum_i w_i S0_i exp((r - sigma_i^2/2) T + sigma_i sqrt(T) (L Z)_i),
// standard errors by batch means over 20 batches. bandwidth <= 0 selects
// Silverman's rule on the pooled sample. Identical seeds give identical
// curves regardless of scheduling.
DensityCurve mc_density(const BasketSpec& spec, const Vector& K_grid, double T,
                        long n_paths, std::uint64_t seed, double bandwidth = 0.0);

}  // namespace basket
