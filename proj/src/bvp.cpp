#include "basket/bvp.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

namespace basket {

namespace {

constexpr double kDedupDistance = 1e-6;  // max-norm distance identifying two roots
constexpr double kTieTolerance = 1e-9;   // energy tie width of the minimal set

double halton(int index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * (index % base);
        index /= base;
    }
    return r;
}

// Deterministic momentum seeds: a Halton grid in the box ||p0||_inf <= pmax.
std::vector<Vector> seed_grid(int d, int count, double pmax) {
    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    std::vector<Vector> seeds;
    seeds.reserve(count);
    for (int k = 0; k < count; ++k) {
        Vector p(d);
        for (int j = 0; j < d; ++j)
            p[j] = pmax * (2.0 * halton(k + 1, primes[j % 12]) - 1.0);
        seeds.push_back(std::move(p));
    }
    return seeds;
}

bool lexicographic_less(const Vector& a, const Vector& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] < b[i] - 1e-15) return true;
        if (a[i] > b[i] + 1e-15) return false;
    }
    return false;
}

struct NewtonOutcome {
    Vector p0;
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;
};

NewtonOutcome newton_shoot(const HamiltonianSystem& sys, double K, Vector p0,
                           double tol, double box) {
    const int d = sys.dim();
    NewtonOutcome out;
    Vector r = boundary_residual(sys, p0, K);
    double rn = r.lpNorm<Eigen::Infinity>();

    for (int iter = 0; iter < 60 && rn > tol; ++iter) {
        // Central-difference Jacobian, step 1e-7 * (1 + |p0_j|).
        Matrix J(d, d);
        for (int j = 0; j < d; ++j) {
            double h = 1e-7 * (1.0 + std::abs(p0[j]));
            Vector pp = p0, pm = p0;
            pp[j] += h;
            pm[j] -= h;
            J.col(j) = (boundary_residual(sys, pp, K) - boundary_residual(sys, pm, K)) / (2.0 * h);
        }
        Eigen::FullPivLU<Matrix> lu(J);
        if (!lu.isInvertible() && lu.rcond() < 1e-300) break;
        Vector step = lu.solve(-r);
        if (!step.allFinite()) break;

        // Backtracking on the residual norm.
        double alpha = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 10; ++ls) {
            Vector cand = p0 + alpha * step;
            if (cand.lpNorm<Eigen::Infinity>() <= box) {
                Vector rc = boundary_residual(sys, cand, K);
                double rcn = rc.lpNorm<Eigen::Infinity>();
                if (rcn < rn || (ls == 0 && rcn < 10.0 * tol)) {
                    p0 = std::move(cand);
                    r = std::move(rc);
                    rn = rcn;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if (!accepted) break;
    }
    out.p0 = std::move(p0);
    out.residual = rn;
    out.converged = rn <= tol;
    return out;
}

}  // namespace

Vector boundary_residual(const HamiltonianSystem& sys, const Vector& p0, double K) {
    if (!(K > 0.0)) throw PreconditionError("boundary_residual: K must be positive");
    const int d = sys.dim();
    const Vector& w = sys.spec.weights();
    PhaseState s1 = flow(sys, PhaseState{sys.spec.spots(), p0, 0.0}, 1.0);
    Vector r(d);
    r[0] = w.dot(s1.x) - K;
    for (int l = 1; l < d; ++l) r[l] = s1.p[0] / w[0] - s1.p[l] / w[l];
    return r;
}

MinimizerCandidate symmetric_closed_form(const HamiltonianSystem& sys, double K) {
    const BasketSpec& spec = sys.spec;
    if (!spec.fully_symmetric())
        throw PreconditionError("symmetric_closed_form: spec is not fully symmetric");
    if (!(K > 0.0)) throw PreconditionError("symmetric_closed_form: K must be positive");

    const int d = spec.d();
    const double s0 = spec.spots()[0];
    const double sig = spec.vols()[0];
    const double w = spec.weights()[0];

    // Terminal positions K/(d w); momenta from x(1) = s0 exp(sigma^2 s0 p0).
    const double p0v = std::log(K / (d * w * s0)) / (sig * sig * s0);
    MinimizerCandidate c;
    c.p0 = Vector::Constant(d, p0v);
    c.terminal = flow(sys, PhaseState{spec.spots(), c.p0, 0.0}, 1.0);
    c.control = control_from_trajectory(sys, PhaseState{spec.spots(), c.p0, 0.0}, 101);
    c.energy = hamiltonian_value(sys, spec.spots(), c.p0);
    c.residual = boundary_residual(sys, c.p0, K).lpNorm<Eigen::Infinity>();
    return c;
}

EnergySolution solve_bvp(const HamiltonianSystem& sys, double K, int multistart, double tol) {
    if (!(K > 0.0)) throw PreconditionError("solve_bvp: K must be positive");
    if (multistart < 1) throw PreconditionError("solve_bvp: multistart >= 1");

    const int d = sys.dim();
    const BasketSpec& spec = sys.spec;

    double pmax = 1.0;
    for (int l = 0; l < d; ++l) {
        double target = std::abs(std::log(K / (d * spec.weights()[l] * spec.spots()[l])));
        pmax = std::max(pmax, 4.0 * target / (spec.vols().minCoeff() * spec.vols().minCoeff()) + 1.0);
    }
    const double box = 3.0 * pmax;

    std::vector<Vector> seeds = seed_grid(d, multistart, pmax);
    seeds.push_back(Vector::Zero(d));
    if (spec.fully_symmetric()) {
        const double p0v = std::log(K / (d * spec.weights()[0] * spec.spots()[0])) /
                           (spec.vols()[0] * spec.vols()[0] * spec.spots()[0]);
        seeds.push_back(Vector::Constant(d, p0v));
    }

    std::vector<Vector> roots;
    double best_residual = std::numeric_limits<double>::infinity();
    for (const Vector& seed : seeds) {
        NewtonOutcome out = newton_shoot(sys, K, seed, tol, box);
        best_residual = std::min(best_residual, out.residual);
        if (!out.converged) continue;
        bool duplicate = false;
        for (const Vector& r : roots) {
            if ((r - out.p0).lpNorm<Eigen::Infinity>() < kDedupDistance) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) roots.push_back(out.p0);
    }
    if (roots.empty())
        throw ConvergenceError("solve_bvp: no boundary-value root found", best_residual);

    std::vector<MinimizerCandidate> all;
    all.reserve(roots.size());
    for (Vector& p0 : roots) {
        MinimizerCandidate c;
        c.terminal = flow(sys, PhaseState{spec.spots(), p0, 0.0}, 1.0);
        c.control = control_from_trajectory(sys, PhaseState{spec.spots(), p0, 0.0}, 101);
        c.energy = hamiltonian_value(sys, spec.spots(), p0);
        c.residual = boundary_residual(sys, p0, K).lpNorm<Eigen::Infinity>();
        c.p0 = std::move(p0);
        all.push_back(std::move(c));
    }
    std::sort(all.begin(), all.end(), [](const MinimizerCandidate& a, const MinimizerCandidate& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return lexicographic_less(a.p0, b.p0);
    });

    EnergySolution sol;
    sol.n_solutions_found = static_cast<int>(all.size());
    sol.lambda = all.front().energy;
    for (const MinimizerCandidate& c : all)
        if (c.energy <= sol.lambda + kTieTolerance) sol.candidates.push_back(c);
    sol.all_roots = std::move(all);
    return sol;
}

}  // namespace basket
