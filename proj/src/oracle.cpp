#include "basket/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "basket/rootfind.hpp"

namespace basket {

namespace {

constexpr double kGamma14 = 3.6256099082219083119;  // Gamma(1/4)
constexpr double kTwoPi = 2.0 * M_PI;

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

// ----- two-asset convolution in the logistic variable -------------------

struct ConvSetup {
    double K;
    double mu1, xi1, mu2, xi2;

    // x = K / (1 + e^{-u}); the Jacobian x(K-x)/K cancels the 1/(x(K-x))
    // prefactor of the lognormal product, leaving exp(-phi(u)) / (2 pi xi1 xi2 K).
    double phi(double u) const {
        double x = K / (1.0 + std::exp(-u));
        double rem = K - x;
        if (!(x > 0.0) || !(rem > 0.0)) return std::numeric_limits<double>::infinity();
        double a = (std::log(rem) - mu1) / xi1;
        double b = (std::log(x) - mu2) / xi2;
        return 0.5 * (a * a + b * b);
    }
};

// log of int exp(-phi(u)) du over the real line, peak-stabilized.
double log_exp_integral(const ConvSetup& cs, double rel_tol) {
    // Coarse scan for the exponent landscape (phi may have two wells).
    double B = 5.0;
    const int n_scan = 2001;
    auto scan_min = [&cs, n_scan](double bound) {
        double m = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n_scan; ++i) {
            double u = -bound + 2.0 * bound * i / (n_scan - 1);
            m = std::min(m, cs.phi(u));
        }
        return m;
    };
    double phi_min = scan_min(B);
    const double clearance = std::log(1.0 / std::min(rel_tol, 1e-9)) + 40.0;
    while ((cs.phi(-B) - phi_min < clearance || cs.phi(B) - phi_min < clearance) && B < 1e4) {
        B *= 1.6;
        phi_min = std::min(phi_min, scan_min(B));
    }

    // Breakpoints around every local minimum of the scanned exponent so the
    // adaptive rule cannot overlook a narrow peak.
    std::vector<double> us(n_scan), ps(n_scan);
    for (int i = 0; i < n_scan; ++i) {
        us[i] = -B + 2.0 * B * i / (n_scan - 1);
        ps[i] = cs.phi(us[i]);
    }
    double width = 10.0 * std::max(cs.xi1, cs.xi2) + 1e-3;
    std::vector<double> pts{-B};
    for (int i = 1; i + 1 < n_scan; ++i) {
        if (ps[i] <= ps[i - 1] && ps[i] <= ps[i + 1] && ps[i] < phi_min + clearance) {
            pts.push_back(std::max(-B, us[i] - width));
            pts.push_back(std::min(B, us[i] + width));
        }
    }
    pts.push_back(B);
    std::sort(pts.begin(), pts.end());

    double total = 0.0, worst_rel = 0.0;
    auto shifted = [&cs, phi_min](double u) { return std::exp(-(cs.phi(u) - phi_min)); };
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] - pts[i] < 1e-300) continue;
        double err = 0.0;
        double part = GK::integrate(shifted, pts[i], pts[i + 1], 15, rel_tol * 0.1, &err);
        total += part;
        if (total > 0.0) worst_rel = std::max(worst_rel, err / total);
    }
    if (!(total > 0.0) || worst_rel > std::max(100.0 * rel_tol, 1e-6))
        throw AccuracyError("convolution quadrature did not converge", total * std::exp(-phi_min));
    return -phi_min + std::log(total);
}

ConvSetup conv_setup(const BasketSpec& spec, double K, double T) {
    if (spec.d() != 2 || !spec.corr().isIdentity(1e-14))
        throw PreconditionError("convolution_density: requires two uncorrelated assets");
    if (std::abs(spec.weights()[0] - 1.0) > 1e-14 || std::abs(spec.weights()[1] - 1.0) > 1e-14)
        throw PreconditionError("convolution_density: requires unit weights");
    if (!(K > 0.0)) throw PreconditionError("convolution_density: K must be positive");
    if (!(T > 0.0)) throw PreconditionError("convolution_density: T must be positive");

    ConvSetup cs;
    cs.K = K;
    cs.mu1 = std::log(spec.spots()[0]) - 0.5 * spec.vols()[0] * spec.vols()[0] * T;
    cs.mu2 = std::log(spec.spots()[1]) - 0.5 * spec.vols()[1] * spec.vols()[1] * T;
    cs.xi1 = spec.vols()[0] * std::sqrt(T);
    cs.xi2 = spec.vols()[1] * std::sqrt(T);
    return cs;
}

// ----- unit-model exponent helpers ---------------------------------------

double g0(double z, double c) { double l = std::log(z) + c; return l * l; }
double g1(double z, double c) { return 2.0 * (std::log(z) + c) / z; }
double g2(double z, double c) { return 2.0 * (1.0 - std::log(z) - c) / (z * z); }
double g4(double z, double c) {
    return (22.0 - 12.0 * std::log(z) - 12.0 * c) / (z * z * z * z);
}

}  // namespace

double lognormal_pdf(double x, double mu, double xi) {
    if (!(xi > 0.0)) throw PreconditionError("lognormal_pdf: xi must be positive");
    if (x <= 0.0) return 0.0;
    double z = (std::log(x) - mu) / xi;
    return std::exp(-0.5 * z * z) / (std::sqrt(kTwoPi) * xi * x);
}

HDerivatives h_function(double K, double T, double x) {
    if (!(x > 0.0 && x < K)) throw DomainError("h_function: x must lie in (0, K)");
    const double c = 0.5 * T;
    HDerivatives d;
    d.h = g0(x, c) + g0(K - x, c);
    d.h1 = g1(x, c) - g1(K - x, c);
    d.h2 = g2(x, c) + g2(K - x, c);
    d.h4 = g4(x, c) + g4(K - x, c);
    return d;
}

double log_convolution_density(const BasketSpec& spec, double K, double T, double rel_tol) {
    ConvSetup cs = conv_setup(spec, K, T);
    return log_exp_integral(cs, rel_tol) - std::log(kTwoPi * cs.xi1 * cs.xi2 * K);
}

double convolution_density(const BasketSpec& spec, double K, double T, double rel_tol) {
    return std::exp(log_convolution_density(spec, K, T, rel_tol));
}

LaplaceDensity laplace_density(double K, double T) {
    if (!(T > 0.0)) throw PreconditionError("laplace_density: T must be positive");
    if (!(K > 0.0)) throw PreconditionError("laplace_density: K must be positive");

    const double x_star = 0.5 * K;
    const HDerivatives hd = h_function(K, T, x_star);
    const double h2_tol = 1e-3 * 16.0 / (K * K);
    const double K_degenerate = 2.0 * std::exp(1.0 - 0.5 * T);

    LaplaceDensity out;
    if (std::abs(K - K_degenerate) <= 1e-9 * K_degenerate) {
        // Quartic minimum: h(x*) = 2 exactly on this strike family and
        // int exp(-a y^4) dy = Gamma(1/4) / (2 a^{1/4}).
        out.branch = LaplaceBranch::quartic;
        out.value = std::pow(3.0, 0.25) * kGamma14 /
                    (std::pow(5.0, 0.25) * 2.0 * std::sqrt(2.0) * M_PI * M_E) *
                    std::exp(-1.0 / T) * std::pow(T, -0.75);
        return out;
    }

    auto quadratic_at = [K, T](double x) {
        HDerivatives h = h_function(K, T, x);
        double pre = 1.0 / (kTwoPi * T * x * (K - x));
        return pre * std::sqrt(kTwoPi * 2.0 * T / h.h2) * std::exp(-h.h / (2.0 * T));
    };

    if (hd.h2 > h2_tol) {
        out.branch = LaplaceBranch::quadratic;
        out.value = quadratic_at(x_star);
        return out;
    }
    if (hd.h2 < -h2_tol) {
        // The midpoint is a local maximum; the exponent minimizers sit
        // symmetrically inside (0, K/2) and (K/2, K), each contributing a
        // quadratic saddle.
        auto h1 = [K, T](double x) { return h_function(K, T, x).h1; };
        double x_min = brent_root(h1, 1e-9 * K, x_star * (1.0 - 1e-9), 0.0, 1e-14);
        out.branch = LaplaceBranch::quadratic;
        out.value = 2.0 * quadratic_at(x_min);
        return out;
    }

    // |h''| below tolerance but off the exact degenerate family: neither pure
    // branch applies; expand the exponent to fourth order and integrate it.
    out.mixed_regime_warning = true;
    out.branch = LaplaceBranch::quartic;
    const double alpha = hd.h4 / (24.0 * 2.0 * T);
    const double beta = hd.h2 / (2.0 * 2.0 * T);
    const double y_max = std::pow(std::log(1e18) / std::max(alpha, 1e-300), 0.25);
    double err = 0.0;
    double integral = GK::integrate(
        [alpha, beta](double y) { return std::exp(-beta * y * y - alpha * y * y * y * y); },
        -y_max, y_max, 15, 1e-10, &err);
    out.value = integral * std::exp(-hd.h / (2.0 * T)) / (kTwoPi * T * x_star * (K - x_star));
    return out;
}

// ----- Monte Carlo density estimator --------------------------------------

namespace {

struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    // uniform in (0, 1]
    double uniform() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }
};

// Deterministic standard normals via Box--Muller on a per-batch stream.
struct NormalStream {
    SplitMix64 rng;
    bool have_spare = false;
    double spare = 0.0;
    explicit NormalStream(std::uint64_t seed) : rng(seed) {}
    double next() {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        double u1 = rng.uniform(), u2 = rng.uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = kTwoPi * u2;
        spare = r * std::sin(a);
        have_spare = true;
        return r * std::cos(a);
    }
};

std::uint64_t batch_seed(std::uint64_t seed, int batch) {
    SplitMix64 mixer(seed ^ (0xD1B54A32D192ED03ULL * static_cast<std::uint64_t>(batch + 1)));
    mixer.next();
    return mixer.next();
}

}  // namespace

DensityCurve mc_density(const BasketSpec& spec, const Vector& K_grid, double T,
                        long n_paths, std::uint64_t seed, double bandwidth) {
    if (n_paths < 10000) throw PreconditionError("mc_density: need at least 1e4 paths");
    if (!(T > 0.0)) throw PreconditionError("mc_density: T must be positive");

    const int d = spec.d();
    const int n_batches = 20;
    const long per_batch = n_paths / n_batches;
    const Matrix& L = spec.chol();

    Vector drift(d);
    for (int i = 0; i < d; ++i)
        drift[i] = (spec.rate() - 0.5 * spec.vols()[i] * spec.vols()[i]) * T;
    const double sqt = std::sqrt(T);

    std::vector<std::vector<double>> batches(n_batches);
    Vector z(d), lz(d);
    for (int b = 0; b < n_batches; ++b) {
        NormalStream normals(batch_seed(seed, b));
        batches[b].reserve(per_batch);
        for (long k = 0; k < per_batch; ++k) {
            for (int i = 0; i < d; ++i) z[i] = normals.next();
            lz.noalias() = L * z;
            double basket = 0.0;
            for (int i = 0; i < d; ++i)
                basket += spec.weights()[i] * spec.spots()[i] *
                          std::exp(drift[i] + spec.vols()[i] * sqt * lz[i]);
            batches[b].push_back(basket);
        }
    }

    double h = bandwidth;
    if (!(h > 0.0)) {
        // Silverman's rule on the pooled sample.
        std::vector<double> pooled;
        pooled.reserve(per_batch * n_batches);
        for (const auto& b : batches) pooled.insert(pooled.end(), b.begin(), b.end());
        const double n = static_cast<double>(pooled.size());
        double mean = std::accumulate(pooled.begin(), pooled.end(), 0.0) / n;
        double ss = 0.0;
        for (double v : pooled) ss += (v - mean) * (v - mean);
        double sd = std::sqrt(ss / (n - 1.0));
        auto quantile = [&pooled](double p) {
            std::size_t k = static_cast<std::size_t>(p * (pooled.size() - 1));
            std::nth_element(pooled.begin(), pooled.begin() + k, pooled.end());
            return pooled[k];
        };
        double iqr = quantile(0.75) - quantile(0.25);
        h = 0.9 * std::min(sd, iqr / 1.34) * std::pow(n, -0.2);
    }

    const auto m = K_grid.size();
    DensityCurve curve;
    curve.method = DensityMethod::monte_carlo;
    curve.strikes = K_grid;
    curve.values = Vector::Zero(m);
    curve.stderrs = Vector::Zero(m);

    Matrix batch_est(n_batches, m);
    const double kern_norm = 1.0 / (h * std::sqrt(kTwoPi));
    for (int b = 0; b < n_batches; ++b) {
        for (Eigen::Index j = 0; j < m; ++j) {
            double acc = 0.0;
            for (double v : batches[b]) {
                double u = (K_grid[j] - v) / h;
                if (std::abs(u) < 8.0) acc += std::exp(-0.5 * u * u);
            }
            batch_est(b, j) = acc * kern_norm / static_cast<double>(per_batch);
        }
    }
    for (Eigen::Index j = 0; j < m; ++j) {
        double mean = batch_est.col(j).mean();
        double var = (batch_est.col(j).array() - mean).square().sum() / (n_batches - 1);
        curve.values[j] = mean;
        curve.stderrs[j] = std::sqrt(var / n_batches);
    }
    return curve;
}

}  // namespace basket
