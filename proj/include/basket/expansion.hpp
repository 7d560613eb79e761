#pragma once

#include <optional>

#include "basket/focality.hpp"

namespace basket {

enum class Regime { generic, degenerate };

/// Assembled density asymptotics at one strike:
///   short time  f(K, T)   ~ c * T^power   * exp(-lambda / T)
///   small noise f(K, eps) ~ c * eps^power * exp(-lambda / eps^2) * exp(c2 / eps)
/// regime is degenerate exactly when the start point is focal for the strike
/// surface; power is NaN for degenerate configurations outside the fully
/// symmetric two-asset family, where no power law is established here.
struct ExpansionResult {
    double lambda = 0.0;
    double c2 = 0.0;                  // second-order exponential coefficient, 0 for zero rate
    double power = 0.0;
    Regime regime = Regime::generic;
    std::optional<double> c0;         // leading constant when known in closed form
    bool low_confidence = false;      // near-focal: both candidate powers reported
    std::optional<double> alt_power;  // the competing power when low_confidence
    double f_value = 0.0;             // asymptotic density evaluated at the given T or eps
    int n_minimizers = 0;
    double residual = 0.0;            // worst boundary defect among minimizers
};

// Leading-order short-time density expansion at strike K, maturity T.
ExpansionResult short_time_density(const HamiltonianSystem& sys, double K, double T);

/// First-order correction process along a minimizing trajectory phi^{h0}:
/// solution of
///   dXhat = (d_x b(0, phi_t) + d_x sigma(phi_t) hdot_0(t)) Xhat dt
///           + d_eps b(0, phi_t) dt,   Xhat_0 = xhat_0,
/// sampled on a uniform grid over [0,1]. Y1 is the basket projection
/// <w, Xhat(1)> feeding the second-order exponential coefficient.
struct SecondOrderODE {
    Vector times;
    Matrix phi;   // d x n controlled trajectory
    Matrix xhat;  // d x n
    double Y1 = 0.0;
};

SecondOrderODE xhat_solve(const HamiltonianSystem& sys, const MinimizerCandidate& candidate,
                          const Vector& xhat0);

// Small-noise density expansion with second-order term
// c2 = max over minimal candidates of Lambda'(K) * Y1(h0).
ExpansionResult small_noise_density(const HamiltonianSystem& sys, double K, double eps);

// dLambda/dK: closed form d log(K/(d w s)) / (sigma^2 K) in the fully
// symmetric case, central differences of the shooting energy otherwise.
double lambda_derivative(const HamiltonianSystem& sys, double K);

}  // namespace basket
