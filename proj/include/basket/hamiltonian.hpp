#pragma once

#include "basket/model.hpp"

namespace basket {

// Drift regime of the small-noise family. The leading-order drift is zero in
// both modes; scaled_rate adds the order-epsilon drift r*x, which feeds the
// second-order expansion term but leaves the Hamiltonian flow unchanged.
enum class DriftMode { zero, scaled_rate };

/// The Hamiltonian H(x,p) = <p, sigma0(x)> + 1/2 <p, sigma(x) rho sigma(x)^T p>
/// of the basket model, with sigma(x) = diag(sigma^i x^i) and sigma0 = 0.
/// Energy is conserved along the flow; x^l(t) p^l(t) is conserved
/// componentwise, which makes the flow available in closed form.
struct HamiltonianSystem {
    BasketSpec spec;
    DriftMode drift_mode = DriftMode::zero;

    int dim() const { return spec.d(); }
};

double hamiltonian_value(const HamiltonianSystem& sys, const Vector& x, const Vector& p);

// Closed-form flow: x^l(t) = x^l_0 exp(u_l t), p^l(t) = p^l_0 exp(-u_l t)
// with u_l = sigma^l sum_i rho_li sigma^i p^i_0 x^i_0.
PhaseState flow(const HamiltonianSystem& sys, const PhaseState& s0, double t);

// Closed-form inverse flow from terminal data at time t back to time 0.
PhaseState inverse_flow(const HamiltonianSystem& sys, const PhaseState& st, double t);

// Adaptive Runge--Kutta integration of the Hamiltonian ODEs; the designed
// extension point for dynamics without a closed-form flow.
// tol must lie in [1e-13, 1e-6].
PhaseState flow_numeric(const HamiltonianSystem& sys, const PhaseState& s0, double t,
                        double tol);

/// Sampled candidate minimizing control hdot_0 on a uniform grid over [0,1].
/// Component i is <sigma_i(x(t)), p(t)> for the Cholesky-whitened diffusion
/// fields; for Black--Scholes each component is constant in time.
struct ControlPath {
    Matrix samples;  // m x n, row i = component i over the grid
    Vector times;    // n uniform times spanning [0, 1]

    // 1/2 times the squared L2 norm of the path, by trapezoidal quadrature.
    double energy() const;
};

ControlPath control_from_trajectory(const HamiltonianSystem& sys, const PhaseState& s0,
                                    int grid_size);

}  // namespace basket
