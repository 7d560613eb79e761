#pragma once

#include "basket/bvp.hpp"

namespace basket {

enum class FocalityVerdict { non_focal, near_focal, focal };

/// Non-focality diagnosis at a boundary-value-problem root. M collects the
/// derivatives of the projected inverse flow pi H_{0<-1} with respect to
/// terminal perturbations: columns 1..d-1 move the terminal position along
/// the strike-manifold tangent directions e_1/w_1 - e_l/w_l, the last column
/// moves the terminal momentum along the normal direction w. The start point
/// is focal exactly when det M vanishes.
struct FocalityReport {
    Matrix M;
    double det = 0.0;
    double normalized_det = 0.0;  // |det| / scale, scale = product of row max-norms
    FocalityVerdict verdict = FocalityVerdict::non_focal;
    double K = 0.0;               // strike examined
    double focal_tol = 1e-8;      // normalized_det <= focal_tol      -> focal
    double near_tol = 1e-4;       //                 <= near_tol      -> near_focal
};

// M by central differences (step 1e-6) of the closed-form inverse flow,
// evaluated at the candidate's terminal configuration.
FocalityReport focality_matrix(const HamiltonianSystem& sys,
                               const MinimizerCandidate& candidate);

// Critical strike K*: the zero of the degeneracy measure of M along the
// minimal-energy branch (symmetric closed form when the spec is fully
// symmetric). Because det M vanishes with multiplicity d-1 in the symmetric
// family, the root is located on the signed eigenvalue of M closest to zero
// rather than on the determinant itself. Throws BracketError when the
// bracket contains no crossing.
double critical_strike(const HamiltonianSystem& sys, double K_lo, double K_hi);

}  // namespace basket
