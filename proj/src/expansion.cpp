#include "basket/expansion.hpp"

#include <cmath>
#include <limits>

#include "basket/integrate.hpp"

namespace basket {

namespace {

constexpr double kGamma14 = 3.6256099082219083119;  // Gamma(1/4)

// Leading constant of the degenerate two-asset unit-parameter expansion,
// 3^{1/4} Gamma(1/4) / (5^{1/4} 2 sqrt(2) pi e).
double degenerate_unit_constant() {
    return std::pow(3.0, 0.25) * kGamma14 /
           (std::pow(5.0, 0.25) * 2.0 * std::sqrt(2.0) * M_PI * M_E);
}

bool unit_two_asset(const BasketSpec& spec) {
    return spec.d() == 2 && spec.fully_symmetric() &&
           std::abs(spec.spots()[0] - 1.0) < 1e-14 &&
           std::abs(spec.vols()[0] - 1.0) < 1e-14 &&
           std::abs(spec.weights()[0] - 1.0) < 1e-14;
}

struct FocalitySummary {
    bool focal = false;
    bool near = false;
    int n_minimizers = 0;
    double residual = 0.0;
};

FocalitySummary summarize_focality(const HamiltonianSystem& sys, const EnergySolution& sol) {
    FocalitySummary s;
    s.n_minimizers = static_cast<int>(sol.candidates.size());
    for (const MinimizerCandidate& c : sol.candidates) {
        FocalityReport rep = focality_matrix(sys, c);
        s.focal = s.focal || rep.verdict == FocalityVerdict::focal;
        s.near = s.near || rep.verdict == FocalityVerdict::near_focal;
        s.residual = std::max(s.residual, c.residual);
    }
    return s;
}

}  // namespace

ExpansionResult short_time_density(const HamiltonianSystem& sys, double K, double T) {
    if (!(T > 0.0)) throw PreconditionError("short_time_density: T must be positive");
    if (!(K > 0.0)) throw PreconditionError("short_time_density: K must be positive");

    EnergySolution sol = solve_bvp(sys, K);
    FocalitySummary foc = summarize_focality(sys, sol);

    ExpansionResult r;
    r.lambda = sol.lambda;
    r.n_minimizers = foc.n_minimizers;
    r.residual = foc.residual;

    const bool sym2 = sys.spec.d() == 2 && sys.spec.fully_symmetric();
    if (foc.focal) {
        r.regime = Regime::degenerate;
        // The quartic saddle gives T^{-3/4} for the symmetric two-asset
        // family; no power law is established for other focal configurations.
        r.power = sym2 ? -0.75 : std::numeric_limits<double>::quiet_NaN();
        if (unit_two_asset(sys.spec) && sys.spec.rate() == 0.0) r.c0 = degenerate_unit_constant();
    } else {
        r.regime = Regime::generic;
        r.power = -0.5;  // scalar marginal, l = 1
        if (foc.near) {
            r.low_confidence = true;
            r.alt_power = sym2 ? -0.75 : std::numeric_limits<double>::quiet_NaN();
        }
    }
    r.f_value = r.c0.value_or(1.0) * std::pow(T, r.power) * std::exp(-r.lambda / T);
    return r;
}

SecondOrderODE xhat_solve(const HamiltonianSystem& sys, const MinimizerCandidate& candidate,
                          const Vector& xhat0) {
    const int d = sys.dim();
    if (xhat0.size() != d) throw PreconditionError("xhat_solve: xhat0 size mismatch");
    const BasketSpec& spec = sys.spec;
    const PhaseState start{spec.spots(), candidate.p0, 0.0};

    // d_x b(0, .) = 0 and d_x sigma(x) hdot_0 is diagonal with entries
    // sigma^l (rho v)_l where v = sigma .* x .* p is conserved along the flow;
    // d_eps b(0, x) = r x in the scaled-rate regime.
    auto rhs = [&](double t, const Eigen::VectorXd& yhat) {
        PhaseState s = flow(sys, start, t);
        Vector v = spec.vols().array() * s.x.array() * s.p.array();
        Vector a = spec.vols().array() * (spec.corr() * v).array();
        Eigen::VectorXd dy = a.array() * yhat.array();
        if (sys.drift_mode == DriftMode::scaled_rate) dy += spec.rate() * s.x;
        return dy;
    };

    const int n = 201;
    SecondOrderODE ode;
    ode.times = Vector::LinSpaced(n, 0.0, 1.0);
    ode.phi.resize(d, n);
    ode.xhat.resize(d, n);

    std::vector<double> ts(ode.times.data(), ode.times.data() + n);
    OdeOptions opt;
    opt.abs_tol = 1e-12;
    opt.rel_tol = 1e-12;
    std::vector<Eigen::VectorXd> path = integrate_rk45_sampled(rhs, 0.0, xhat0, ts, opt);
    for (int k = 0; k < n; ++k) {
        ode.phi.col(k) = flow(sys, start, ode.times[k]).x;
        ode.xhat.col(k) = path[k];
    }
    ode.Y1 = spec.weights().dot(ode.xhat.col(n - 1));
    return ode;
}

double lambda_derivative(const HamiltonianSystem& sys, double K) {
    const BasketSpec& spec = sys.spec;
    if (spec.fully_symmetric()) {
        const int d = spec.d();
        const double sig = spec.vols()[0];
        return d * std::log(K / (d * spec.weights()[0] * spec.spots()[0])) / (sig * sig * K);
    }
    const double h = 1e-4 * K;
    double lp = solve_bvp(sys, K + h).lambda;
    double lm = solve_bvp(sys, K - h).lambda;
    return (lp - lm) / (2.0 * h);
}

ExpansionResult small_noise_density(const HamiltonianSystem& sys, double K, double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw PreconditionError("small_noise_density: eps must lie in (0, 1)");
    if (!(K > 0.0)) throw PreconditionError("small_noise_density: K must be positive");

    EnergySolution sol = solve_bvp(sys, K);
    FocalitySummary foc = summarize_focality(sys, sol);
    const double dlam = lambda_derivative(sys, K);

    ExpansionResult r;
    r.lambda = sol.lambda;
    r.n_minimizers = foc.n_minimizers;
    r.residual = foc.residual;

    if (sys.drift_mode == DriftMode::scaled_rate && sys.spec.rate() != 0.0) {
        double best = -std::numeric_limits<double>::infinity();
        for (const MinimizerCandidate& c : sol.candidates) {
            SecondOrderODE ode = xhat_solve(sys, c, Vector::Zero(sys.dim()));
            best = std::max(best, dlam * ode.Y1);
        }
        r.c2 = best;
    }

    const bool sym2 = sys.spec.d() == 2 && sys.spec.fully_symmetric();
    if (foc.focal) {
        r.regime = Regime::degenerate;
        r.power = sym2 ? -1.5 : std::numeric_limits<double>::quiet_NaN();
        if (unit_two_asset(sys.spec) && sys.spec.rate() == 0.0) r.c0 = degenerate_unit_constant();
    } else {
        r.regime = Regime::generic;
        r.power = -1.0;  // eps^{-l} with l = 1
        if (foc.near) {
            r.low_confidence = true;
            r.alt_power = sym2 ? -1.5 : std::numeric_limits<double>::quiet_NaN();
        }
    }
    r.f_value = r.c0.value_or(1.0) * std::pow(eps, r.power) *
                std::exp(-r.lambda / (eps * eps) + r.c2 / eps);
    return r;
}

}  // namespace basket
