#pragma once

#include <functional>

#include "basket/errors.hpp"

namespace basket {

// Brent's method on [a, b]; f(a) and f(b) must have opposite signs, else
// BracketError. Terminates when the bracket width falls below
// xtol + rtol * |x|.
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double xtol = 0.0, double rtol = 1e-12, int max_iter = 200);

// Golden-section minimizer on [a, b] for unimodal f.
double golden_min(const std::function<double(double)>& f, double a, double b,
                  double rtol = 1e-12, int max_iter = 300);

}  // namespace basket
