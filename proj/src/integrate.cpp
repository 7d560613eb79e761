#include "basket/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace basket {

namespace {

// Dormand--Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 4th-order weights (error estimate is the difference of the two solutions)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

OdeResult integrate_rk45(const OdeRhs& rhs, double t0, const Eigen::VectorXd& y0,
                         double t1, const OdeOptions& opt) {
    OdeResult res;
    res.y = y0;
    if (t1 == t0) return res;

    const double dir = t1 > t0 ? 1.0 : -1.0;
    double t = t0;
    Eigen::VectorXd y = y0;
    Eigen::VectorXd k1 = rhs(t, y);

    double h = opt.initial_step;
    if (h == 0.0) {
        double ynorm = y.norm(), fnorm = k1.norm();
        h = (fnorm > 0.0) ? 0.01 * std::max(ynorm, 1.0) / fnorm : 1e-3;
        h = std::min(h, std::abs(t1 - t0));
    }
    h *= dir;

    for (long step = 0; step < opt.max_steps; ++step) {
        if (t == t1) break;
        if ((t + h - t1) * dir > 0.0) h = t1 - t;
        if (std::abs(h) < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0))
            throw StiffnessError(t);

        Eigen::VectorXd k2 = rhs(t + c2 * h, y + h * (a21 * k1));
        Eigen::VectorXd k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        Eigen::VectorXd k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        Eigen::VectorXd k5 = rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        Eigen::VectorXd k6 = rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        Eigen::VectorXd y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        Eigen::VectorXd k7 = rhs(t + h, y5);
        Eigen::VectorXd err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err_norm = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err_norm = std::max(err_norm, std::abs(err[i]) / sc);
        }

        if (err_norm <= 1.0) {
            t += h;
            y.swap(y5);
            k1.swap(k7);
            ++res.n_steps;
        } else {
            ++res.n_rejected;
        }
        double factor = 0.9 * std::pow(std::max(err_norm, 1e-16), -0.2);
        h *= std::clamp(factor, 0.2, 5.0);
    }
    if (t != t1)
        throw ConvergenceError("integrate_rk45: step budget exhausted", std::abs(t1 - t));
    res.y = std::move(y);
    return res;
}

std::vector<Eigen::VectorXd> integrate_rk45_sampled(const OdeRhs& rhs, double t0,
                                                    const Eigen::VectorXd& y0,
                                                    const std::vector<double>& times,
                                                    const OdeOptions& opt) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(times.size());
    double t = t0;
    Eigen::VectorXd y = y0;
    for (double ts : times) {
        if (ts < t) throw PreconditionError("integrate_rk45_sampled: times must be increasing");
        if (ts > t) y = integrate_rk45(rhs, t, y, ts, opt).y;
        t = ts;
        out.push_back(y);
    }
    return out;
}

}  // namespace basket
