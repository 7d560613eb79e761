#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "basket/errors.hpp"

namespace basket {

// Right-hand side of a first-order ODE system y' = f(t, y).
using OdeRhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

struct OdeOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double initial_step = 0.0;  // 0 selects an automatic guess
    long max_steps = 200000;
};

struct OdeResult {
    Eigen::VectorXd y;
    long n_steps = 0;
    long n_rejected = 0;
};

// Adaptive embedded Runge--Kutta 5(4) (Dormand--Prince) from t0 to t1.
// Throws StiffnessError carrying the last accepted time if the step size
// underflows, ConvergenceError if the step budget is exhausted.
OdeResult integrate_rk45(const OdeRhs& rhs, double t0, const Eigen::VectorXd& y0,
                         double t1, const OdeOptions& opt = {});

// Solution sampled at the given strictly increasing times (times[0] >= t0).
std::vector<Eigen::VectorXd> integrate_rk45_sampled(const OdeRhs& rhs, double t0,
                                                    const Eigen::VectorXd& y0,
                                                    const std::vector<double>& times,
                                                    const OdeOptions& opt = {});

}  // namespace basket
