#include "basket/focality.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Eigenvalues>

#include "basket/rootfind.hpp"

namespace basket {

namespace {

constexpr double kFdStep = 1e-6;

Vector inverse_flow_position(const HamiltonianSystem& sys, const Vector& x1, const Vector& p1) {
    return inverse_flow(sys, PhaseState{x1, p1, 1.0}, 1.0).x;
}

// Signed degeneracy measure: the eigenvalue of M closest to zero. Along the
// fully symmetric branch the d-1 tangent columns degenerate together, so
// det M vanishes with multiplicity d-1 and keeps its sign for odd d-1; the
// underlying eigenvalue crosses zero linearly and is the quantity to root.
double signed_smallest_eigenvalue(const Matrix& M) {
    Eigen::EigenSolver<Matrix> es(M, /*computeEigenvectors=*/false);
    const auto& ev = es.eigenvalues();
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < ev.size(); ++i)
        if (std::abs(ev[i]) < std::abs(ev[best])) best = i;
    return ev[best].real();
}

MinimizerCandidate branch_candidate(const HamiltonianSystem& sys, double K) {
    if (sys.spec.fully_symmetric()) return symmetric_closed_form(sys, K);
    EnergySolution sol = solve_bvp(sys, K);
    return sol.candidates.front();
}

}  // namespace

FocalityReport focality_matrix(const HamiltonianSystem& sys,
                               const MinimizerCandidate& candidate) {
    const int d = sys.dim();
    const Vector& w = sys.spec.weights();
    const Vector& x1 = candidate.terminal.x;
    const Vector& p1 = candidate.terminal.p;

    FocalityReport rep;
    rep.K = w.dot(x1);
    rep.M.resize(d, d);

    // Tangent columns: terminal-position perturbations e_1/w_1 - e_l/w_l.
    for (int l = 1; l < d; ++l) {
        Vector z = Vector::Zero(d);
        z[0] = 1.0 / w[0];
        z[l] = -1.0 / w[l];
        Vector xp = inverse_flow_position(sys, x1 + kFdStep * z, p1);
        Vector xm = inverse_flow_position(sys, x1 - kFdStep * z, p1);
        rep.M.col(l - 1) = (xp - xm) / (2.0 * kFdStep);
    }
    // Normal column: terminal-momentum perturbation along w.
    Vector xp = inverse_flow_position(sys, x1, p1 + kFdStep * w);
    Vector xm = inverse_flow_position(sys, x1, p1 - kFdStep * w);
    rep.M.col(d - 1) = (xp - xm) / (2.0 * kFdStep);

    rep.det = rep.M.determinant();
    double scale = 1.0;
    for (int i = 0; i < d; ++i) scale *= rep.M.row(i).lpNorm<Eigen::Infinity>();
    rep.normalized_det = (scale > 0.0) ? std::abs(rep.det) / scale : 0.0;

    if (rep.normalized_det <= rep.focal_tol)
        rep.verdict = FocalityVerdict::focal;
    else if (rep.normalized_det <= rep.near_tol)
        rep.verdict = FocalityVerdict::near_focal;
    else
        rep.verdict = FocalityVerdict::non_focal;
    return rep;
}

double critical_strike(const HamiltonianSystem& sys, double K_lo, double K_hi) {
    if (!(K_lo > 0.0 && K_hi > K_lo))
        throw PreconditionError("critical_strike: need 0 < K_lo < K_hi");

    auto report_at = [&sys](double K) {
        return focality_matrix(sys, branch_candidate(sys, K));
    };
    auto measure = [&report_at](double K) {
        return signed_smallest_eigenvalue(report_at(K).M);
    };

    // The normalized determinant dips to zero at the degeneracy. Locate the
    // dip on a coarse grid first; only near it is the crossing eigenvalue
    // reliably the smallest one, so the signed root is polished locally.
    const int n = 101;
    std::vector<double> grid(n);
    int i_min = 0;
    double w_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        grid[i] = K_lo + (K_hi - K_lo) * i / (n - 1);
        double w = report_at(grid[i]).normalized_det;
        if (w < w_min) {
            w_min = w;
            i_min = i;
        }
    }
    for (int half_width : {2, 5, n}) {
        int a = std::max(0, i_min - half_width);
        int b = std::min(n - 1, i_min + half_width);
        double s_a = measure(grid[a]);
        double s_b = measure(grid[b]);
        if (s_a == 0.0) return grid[a];
        if (s_b == 0.0) return grid[b];
        if (s_a * s_b < 0.0) return brent_root(measure, grid[a], grid[b], 0.0, 1e-12);
    }
    throw BracketError("critical_strike: no degeneracy crossing inside the bracket");
}

}  // namespace basket
