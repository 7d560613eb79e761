#pragma once

#include <vector>

#include "basket/model.hpp"

namespace basket {

// Parametrization phi: U in R^{d-1} -> R^d of the strike surface
// {x in chart : sum_i w_i S^i(x) = K}; the first d-1 chart coordinates are
// free and the last solves the strike equation. Throws DomainError when q
// leaves U (the last asset price would be <= 0).
Vector strike_surface(const BasketSpec& spec, double K, const Vector& q);

/// Shape operator of the strike surface at phi(q), expressed in the basis of
/// Jacobian columns of phi. Principal curvatures are its eigenvalues.
struct WeingartenResult {
    Matrix shape;       // (d-1) x (d-1)
    Vector curvatures;  // ascending
    Vector normal;      // unit normal with <N, (1,...,1)> > 0
    Matrix tangents;    // d x (d-1) Jacobian columns of phi
};

WeingartenResult weingarten(const BasketSpec& spec, double K, const Vector& q);

/// Focal point of the surface along the normal at p_surface = phi(q):
/// f = p_surface + N / curvature.
struct FocalPoint {
    Vector p_surface;
    Vector f;
    double curvature = 0.0;
};

// One focal point per nonzero principal curvature. For two uncorrelated
// assets with unit weights the single focal point is evaluated in closed
// form; otherwise it is built from the Weingarten curvatures.
std::vector<FocalPoint> focal_points(const BasketSpec& spec, double K, const Vector& q);

// Cross-validation of the two focality tests for two uncorrelated assets:
// compares the flow-derivative verdict with "the origin is focal for the
// optimal configuration". Returns true when the verdicts agree. Both tests
// run along the symmetric closed-form branch when the spec is fully
// symmetric, else at the minimal-energy root.
bool geometric_vs_hamiltonian_check(const BasketSpec& spec, double K);

// Critical strike from the geometric side: the zero of K -> sum_i f^i at the
// optimal configuration (the focal curve crossing the origin).
double geometric_critical_strike(const BasketSpec& spec, double K_lo, double K_hi);

}  // namespace basket
