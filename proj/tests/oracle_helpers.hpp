// Test-side reference computations, kept independent of the library code
// paths they are used to check.
#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace testoracle {

// Recursive adaptive Simpson quadrature.
inline double adaptive_simpson_impl(const std::function<double(double)>& f, double a,
                                    double b, double fa, double fm, double fb, double whole,
                                    double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_impl(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_impl(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int depth = 40) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_impl(f, a, b, fa, fm, fb, whole, tol, depth);
}

// log of the density of a sum of two independent lognormals, via the
// logistic substitution x = K/(1+e^{-u}) and peak extraction.
inline double log_lognormal_convolution(double K, double mu1, double xi1, double mu2,
                                        double xi2, double tol = 1e-12) {
    auto phi = [=](double u) {
        double x = K / (1.0 + std::exp(-u));
        double a = (std::log(K - x) - mu1) / xi1;
        double b = (std::log(x) - mu2) / xi2;
        return 0.5 * (a * a + b * b);
    };
    double B = 40.0;
    double phi_min = std::numeric_limits<double>::infinity();
    double u_min = 0.0;
    const int n = 8001;
    for (int i = 0; i < n; ++i) {
        double u = -B + 2.0 * B * i / (n - 1);
        double p = phi(u);
        if (p < phi_min) {
            phi_min = p;
            u_min = u;
        }
    }
    // golden refinement of the global minimum
    double a = u_min - 0.02, b = u_min + 0.02;
    for (int it = 0; it < 200; ++it) {
        double x1 = b - 0.618033988749895 * (b - a);
        double x2 = a + 0.618033988749895 * (b - a);
        if (phi(x1) < phi(x2)) b = x2; else a = x1;
    }
    phi_min = phi(0.5 * (a + b));
    double integral = adaptive_simpson(
        [&phi, phi_min](double u) { return std::exp(-(phi(u) - phi_min)); }, -B, B, tol);
    return -phi_min + std::log(integral) -
           std::log(2.0 * M_PI * xi1 * xi2 * K);
}

// Minimal energy of the two-asset problem by direct one-dimensional search:
// Lambda(K) = min over x in (0, K) of (log^2 x + log^2(K - x)) / 2.
inline double lambda_oracle_2d(double K) {
    auto half_h = [K](double x) {
        double a = std::log(x), b = std::log(K - x);
        return 0.5 * (a * a + b * b);
    };
    double best = std::numeric_limits<double>::infinity();
    const int n = 20001;
    double x_best = K / 2;
    for (int i = 1; i < n; ++i) {
        double x = K * i / n;
        double v = half_h(x);
        if (v < best) {
            best = v;
            x_best = x;
        }
    }
    double a = std::max(1e-12, x_best - K / n), b = std::min(K - 1e-12, x_best + K / n);
    for (int it = 0; it < 300; ++it) {
        double x1 = b - 0.618033988749895 * (b - a);
        double x2 = a + 0.618033988749895 * (b - a);
        if (half_h(x1) < half_h(x2)) b = x2; else a = x1;
    }
    return half_h(0.5 * (a + b));
}

// Minimal energy (1/2) sum t_i^2 subject to sum_i e^{t_i} = K for the unit
// symmetric d-asset problem, by complete enumeration of the stationary
// families. Stationarity forces t_i e^{-t_i} to share one value c; for c > 0
// the components split over the two preimages a < 1 < b of c (k of them at
// b), for c <= 0 all components coincide. Scanning a recovers every branch.
inline double lambda_two_level_oracle(int d, double K) {
    double t_sym = std::log(K / d);
    double best = 0.5 * d * t_sym * t_sym;

    auto upper_preimage = [](double c) {
        double lo = 1.0, hi = 800.0;  // b e^{-b} decreasing on [1, inf)
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (mid * std::exp(-mid) > c ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };

    for (int k = 1; k < d; ++k) {
        auto strike_of = [&](double a) {
            double b = upper_preimage(a * std::exp(-a));
            return (d - k) * std::exp(a) + k * std::exp(b);
        };
        auto energy_of = [&](double a) {
            double b = upper_preimage(a * std::exp(-a));
            return 0.5 * ((d - k) * a * a + k * b * b);
        };
        const int n = 4000;
        double prev_a = 0.0, prev_v = 0.0;
        bool have_prev = false;
        for (int i = 1; i < n; ++i) {
            double a = (1.0 - 1e-9) * i / n;
            double v = strike_of(a) - K;
            if (have_prev && prev_v * v < 0.0) {
                double lo = prev_a, hi = a;
                for (int it = 0; it < 200; ++it) {
                    double mid = 0.5 * (lo + hi);
                    ((strike_of(mid) - K) * prev_v > 0.0 ? lo : hi) = mid;
                }
                best = std::min(best, energy_of(0.5 * (lo + hi)));
            }
            prev_a = a;
            prev_v = v;
            have_prev = true;
        }
    }
    return best;
}

// Strike at which an asymmetric stationary family first undercuts the
// symmetric branch (first-order for d >= 3, exactly d e for d = 2).
inline double takeover_strike(int d) {
    auto gap = [d](double K) {
        double t = std::log(K / d);
        return lambda_two_level_oracle(d, K) - 0.5 * d * t * t;
    };
    double lo = 1.2 * d, hi = d * std::exp(1.0) + 0.2;
    if (gap(lo) >= 0.0) {
        double step = (hi - lo) / 200.0;
        double x = lo;
        while (x < hi && gap(x) >= -1e-15) x += step;
        lo = x - step;
        hi = x;
        for (int it = 0; it < 100; ++it) {
            double mid = 0.5 * (lo + hi);
            (gap(mid) >= -1e-15 ? lo : hi) = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Ordinary least squares slope of y against x.
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace testoracle
