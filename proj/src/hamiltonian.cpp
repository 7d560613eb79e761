#include "basket/hamiltonian.hpp"

#include <cmath>

#include "basket/integrate.hpp"

namespace basket {

namespace {

// v_i = sigma^i x^i p^i, the conserved componentwise products scaled by vol.
Vector scaled_products(const BasketSpec& spec, const Vector& x, const Vector& p) {
    return spec.vols().array() * x.array() * p.array();
}

// Flow exponents u_l = sigma^l (rho v)_l; constant along trajectories.
Vector flow_exponents(const BasketSpec& spec, const Vector& x, const Vector& p) {
    Vector v = scaled_products(spec, x, p);
    return spec.vols().array() * (spec.corr() * v).array();
}

}  // namespace

double hamiltonian_value(const HamiltonianSystem& sys, const Vector& x, const Vector& p) {
    // The order-zero drift field vanishes in both drift modes, so the
    // kinetic term is the whole Hamiltonian.
    Vector v = scaled_products(sys.spec, x, p);
    return 0.5 * v.dot(sys.spec.corr() * v);
}

PhaseState flow(const HamiltonianSystem& sys, const PhaseState& s0, double t) {
    if ((s0.x.array() <= 0.0).any())
        throw DomainError("flow: positions must be strictly positive");
    Vector u = flow_exponents(sys.spec, s0.x, s0.p);
    PhaseState s;
    s.x = s0.x.array() * (u.array() * t).exp();
    s.p = s0.p.array() * (-u.array() * t).exp();
    s.t = s0.t + t;
    return s;
}

PhaseState inverse_flow(const HamiltonianSystem& sys, const PhaseState& st, double t) {
    if ((st.x.array() <= 0.0).any())
        throw DomainError("inverse_flow: positions must be strictly positive");
    Vector u = flow_exponents(sys.spec, st.x, st.p);  // same exponents, by conservation
    PhaseState s;
    s.x = st.x.array() * (-u.array() * t).exp();
    s.p = st.p.array() * (u.array() * t).exp();
    s.t = st.t - t;
    return s;
}

PhaseState flow_numeric(const HamiltonianSystem& sys, const PhaseState& s0, double t,
                        double tol) {
    if (!(tol >= 1e-13 && tol <= 1e-6))
        throw PreconditionError("flow_numeric: tol must lie in [1e-13, 1e-6]");
    const int d = sys.dim();
    const BasketSpec& spec = sys.spec;

    auto rhs = [&spec, d](double, const Eigen::VectorXd& y) {
        Vector x = y.head(d), p = y.tail(d);
        Vector v = spec.vols().array() * x.array() * p.array();
        Vector u = spec.vols().array() * (spec.corr() * v).array();
        Eigen::VectorXd dy(2 * d);
        dy.head(d) = u.array() * x.array();
        dy.tail(d) = -u.array() * p.array();
        return dy;
    };

    Eigen::VectorXd y0(2 * d);
    y0 << s0.x, s0.p;
    OdeOptions opt;
    opt.abs_tol = tol;
    opt.rel_tol = tol;
    Eigen::VectorXd y = integrate_rk45(rhs, 0.0, y0, t, opt).y;
    PhaseState s;
    s.x = y.head(d);
    s.p = y.tail(d);
    s.t = s0.t + t;
    return s;
}

double ControlPath::energy() const {
    const auto n = times.size();
    if (n < 2) return 0.0;
    double acc = 0.0;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        double f0 = samples.col(k).squaredNorm();
        double f1 = samples.col(k + 1).squaredNorm();
        acc += 0.5 * (f0 + f1) * (times[k + 1] - times[k]);
    }
    return 0.5 * acc;
}

ControlPath control_from_trajectory(const HamiltonianSystem& sys, const PhaseState& s0,
                                    int grid_size) {
    if (grid_size < 2) throw PreconditionError("control_from_trajectory: grid_size >= 2");
    const int d = sys.dim();
    ControlPath cp;
    cp.times = Vector::LinSpaced(grid_size, 0.0, 1.0);
    cp.samples.resize(d, grid_size);
    // hdot_0(t) = L^T (sigma .* x(t) .* p(t)): projections onto the
    // Cholesky-whitened diffusion fields.
    for (int k = 0; k < grid_size; ++k) {
        PhaseState s = flow(sys, s0, cp.times[k]);
        Vector v = sys.spec.vols().array() * s.x.array() * s.p.array();
        cp.samples.col(k) = sys.spec.chol().transpose() * v;
    }
    return cp;
}

}  // namespace basket
