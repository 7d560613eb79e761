#include "basket/geometry.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "basket/bvp.hpp"
#include "basket/focality.hpp"
#include "basket/rootfind.hpp"

namespace basket {

namespace {

constexpr double kFdStep = 1e-6;

// w_i S0_i exp(sigma_i (L x)_i) summed: the strike equation reads g(x) = K.
double weighted_basket(const BasketSpec& spec, const Vector& x) {
    Vector y = spec.chol() * x;
    return (spec.weights().array() * spec.spots().array() *
            (spec.vols().array() * y.array()).exp())
        .sum();
}

// Gradient of the strike equation; normal direction before normalization.
Vector strike_gradient(const BasketSpec& spec, const Vector& x) {
    Vector y = spec.chol() * x;
    Vector sv = spec.weights().array() * spec.spots().array() *
                (spec.vols().array() * y.array()).exp() * spec.vols().array();
    return spec.chol().transpose() * sv;
}

Vector unit_normal(const BasketSpec& spec, const Vector& x) {
    Vector n = strike_gradient(spec, x);
    n /= n.norm();
    if (n.sum() < 0.0) n = -n;  // orientation: <N, (1,...,1)> > 0
    return n;
}

// Jacobian columns of phi: e_i = (delta_i, d phi^d / d q^i) with the last
// component from implicit differentiation of the strike equation.
Matrix tangent_columns(const BasketSpec& spec, const Vector& x) {
    const int d = spec.d();
    Vector g = strike_gradient(spec, x);
    Matrix e = Matrix::Zero(d, d - 1);
    for (int i = 0; i < d - 1; ++i) {
        e(i, i) = 1.0;
        e(d - 1, i) = -g[i] / g[d - 1];
    }
    return e;
}

bool two_uncorrelated_unit_weights(const BasketSpec& spec) {
    return spec.d() == 2 && spec.corr().isIdentity(1e-14) &&
           std::abs(spec.weights()[0] - 1.0) < 1e-14 &&
           std::abs(spec.weights()[1] - 1.0) < 1e-14;
}

// Closed-form focal point for two uncorrelated assets with unit weights,
// written in chart coordinates through S1 = S0_1 exp(sigma_1 x^1).
FocalPoint focal_closed_2d(const BasketSpec& spec, double K, const Vector& x,
                           double curvature) {
    const double s1 = spec.vols()[0], s2 = spec.vols()[1];
    const double S1 = spec.spots()[0] * std::exp(s1 * x[0]);
    const double S2 = K - S1;
    const double num = S1 * (2.0 * s2 * s2 * K - (s1 * s1 + s2 * s2) * S1) - s2 * s2 * K * K;
    FocalPoint fp;
    fp.p_surface = x;
    fp.curvature = curvature;
    fp.f = Vector(2);
    fp.f[0] = x[0] + num / (s1 * s2 * s2 * K * S2);
    fp.f[1] = x[1] + num / (s1 * s1 * s2 * K * S1);
    return fp;
}

// Optimal configuration on the strike surface for the cross-check: the
// terminal point of the energy-minimizing branch, mapped to the chart.
Vector optimal_configuration(const BasketSpec& spec, double K) {
    HamiltonianSystem sys{spec, DriftMode::zero};
    MinimizerCandidate cand = spec.fully_symmetric()
                                  ? symmetric_closed_form(sys, K)
                                  : solve_bvp(sys, K).candidates.front();
    return to_chart(spec, cand.terminal.x).x_chart;
}

}  // namespace

Vector strike_surface(const BasketSpec& spec, double K, const Vector& q) {
    const int d = spec.d();
    if (!(K > 0.0)) throw PreconditionError("strike_surface: K must be positive");
    if (q.size() != d - 1) throw PreconditionError("strike_surface: q must have d-1 entries");

    const Matrix& L = spec.chol();
    double partial = 0.0;  // sum over the first d-1 assets, lower-triangular in q
    for (int i = 0; i < d - 1; ++i) {
        double yi = L.row(i).head(i + 1).dot(q.head(i + 1));
        partial += spec.weights()[i] * spec.spots()[i] * std::exp(spec.vols()[i] * yi);
    }
    const double remainder = K - partial;
    if (!(remainder > 0.0))
        throw DomainError("strike_surface: q outside the chart domain (last asset price would be <= 0)");

    Vector x(d);
    x.head(d - 1) = q;
    double yd = std::log(remainder / (spec.weights()[d - 1] * spec.spots()[d - 1])) /
                spec.vols()[d - 1];
    x[d - 1] = (yd - L.row(d - 1).head(d - 1).dot(q)) / L(d - 1, d - 1);
    return x;
}

WeingartenResult weingarten(const BasketSpec& spec, double K, const Vector& q) {
    const int d = spec.d();
    Vector x = strike_surface(spec, K, q);

    WeingartenResult res;
    res.normal = unit_normal(spec, x);
    res.tangents = tangent_columns(spec, x);

    // Second fundamental form by central differences of N along phi, then the
    // shape operator through the first fundamental form: shape = G^{-1} B.
    Matrix B(d - 1, d - 1);
    for (int j = 0; j < d - 1; ++j) {
        Vector qp = q, qm = q;
        qp[j] += kFdStep;
        qm[j] -= kFdStep;
        Vector dN = (unit_normal(spec, strike_surface(spec, K, qp)) -
                     unit_normal(spec, strike_surface(spec, K, qm))) /
                    (2.0 * kFdStep);
        for (int i = 0; i < d - 1; ++i) B(i, j) = -dN.dot(res.tangents.col(i));
    }
    B = 0.5 * (B + B.transpose()).eval();
    Matrix G = res.tangents.transpose() * res.tangents;
    res.shape = G.ldlt().solve(B);

    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(B, G);
    res.curvatures = es.eigenvalues();
    return res;
}

std::vector<FocalPoint> focal_points(const BasketSpec& spec, double K, const Vector& q) {
    Vector x = strike_surface(spec, K, q);
    WeingartenResult w = weingarten(spec, K, q);

    std::vector<FocalPoint> out;
    if (two_uncorrelated_unit_weights(spec)) {
        if (std::abs(w.curvatures[0]) > 1e-14)
            out.push_back(focal_closed_2d(spec, K, x, w.curvatures[0]));
        return out;
    }
    for (Eigen::Index i = 0; i < w.curvatures.size(); ++i) {
        double k = w.curvatures[i];
        if (std::abs(k) <= 1e-14) continue;
        FocalPoint fp;
        fp.p_surface = x;
        fp.curvature = k;
        fp.f = x + w.normal / k;
        out.push_back(std::move(fp));
    }
    return out;
}

bool geometric_vs_hamiltonian_check(const BasketSpec& spec, double K) {
    if (spec.d() != 2 || !spec.corr().isIdentity(1e-14))
        throw PreconditionError("geometric_vs_hamiltonian_check: requires two uncorrelated assets");

    HamiltonianSystem sys{spec, DriftMode::zero};
    MinimizerCandidate cand = spec.fully_symmetric()
                                  ? symmetric_closed_form(sys, K)
                                  : solve_bvp(sys, K).candidates.front();
    FocalityReport rep = focality_matrix(sys, cand);
    const bool focal_flow = rep.verdict == FocalityVerdict::focal;

    Vector x = to_chart(spec, cand.terminal.x).x_chart;
    Vector q = x.head(1);
    std::vector<FocalPoint> fps = focal_points(spec, K, q);
    bool focal_geo = false;
    for (const FocalPoint& fp : fps) {
        if (fp.f.lpNorm<Eigen::Infinity>() <= 1e-8 * (1.0 + x.lpNorm<Eigen::Infinity>()))
            focal_geo = true;
    }
    return focal_flow == focal_geo;
}

double geometric_critical_strike(const BasketSpec& spec, double K_lo, double K_hi) {
    if (spec.d() != 2 || !spec.corr().isIdentity(1e-14))
        throw PreconditionError("geometric_critical_strike: requires two uncorrelated assets");

    auto crossing = [&spec](double K) {
        Vector x = optimal_configuration(spec, K);
        std::vector<FocalPoint> fps = focal_points(spec, K, x.head(1));
        if (fps.empty()) throw DomainError("geometric_critical_strike: flat configuration");
        return fps.front().f.sum();
    };
    return brent_root(crossing, K_lo, K_hi, 0.0, 1e-12);
}

}  // namespace basket
