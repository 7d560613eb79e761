#pragma once

#include <vector>

#include "basket/hamiltonian.hpp"

namespace basket {

/// One root of the Hamiltonian boundary value problem: a candidate
/// most-likely path reaching the strike manifold {sum_l w_l x^l(1) = K}
/// with terminal momentum parallel to w.
struct MinimizerCandidate {
    Vector p0;              // initial momentum
    PhaseState terminal;    // state at T = 1
    ControlPath control;
    double energy = 0.0;    // 1/2 ||h0||^2 = H(x0, p0)
    double residual = 0.0;  // max-norm boundary defect
};

/// Minimal-energy solution set of the boundary value problem.
struct EnergySolution {
    double lambda = 0.0;                        // minimal energy Lambda(K)
    std::vector<MinimizerCandidate> candidates; // ties within tol_tie of lambda
    int n_solutions_found = 0;                  // all distinct roots found
    std::vector<MinimizerCandidate> all_roots;  // every distinct root, sorted
};

// Boundary defect of the shooting problem: first component
// sum_l w_l x^l(1) - K, then the transversality defects
// p^1(1)/w_1 - p^l(1)/w_l for l = 2..d.
Vector boundary_residual(const HamiltonianSystem& sys, const Vector& p0, double K);

// Damped Newton iteration on boundary_residual with a finite-difference
// Jacobian, started from a deterministic low-discrepancy grid of initial
// momenta (plus the symmetric closed-form seed when applicable). Distinct
// roots are deduplicated at 1e-6 in max norm; the minimal-energy set is
// retained with an energy tie tolerance of 1e-9. Throws ConvergenceError
// carrying the best residual if no start converges.
EnergySolution solve_bvp(const HamiltonianSystem& sys, double K, int multistart = 48,
                         double tol = 1e-12);

// Explicit solution in the fully symmetric case (equal spots s, equal vols,
// identity correlation, equal weights w):
//   x1 = K/(d w), p0 = log(K/(d w s)) / (sigma^2 s), p1 = p0 exp(-sigma^2 s p0).
// Throws PreconditionError on a non-symmetric spec.
MinimizerCandidate symmetric_closed_form(const HamiltonianSystem& sys, double K);

}  // namespace basket
