#pragma once

#include <Eigen/Dense>

#include "basket/errors.hpp"

namespace basket {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Lower-triangular Cholesky factor L with L L^T = corr. Throws DefinitenessError
// naming the offending leading principal minor when corr is not positive definite.
Matrix cholesky_lower(const Matrix& corr);

/// A multivariate Black--Scholes basket: d assets with spots S0, lognormal
/// volatilities, a correlation matrix for the driving Brownian motions,
/// a (small-rate) drift parameter and basket weights. Immutable after
/// construction; construction validates all invariants.
class BasketSpec {
  public:
    BasketSpec(Vector spots, Vector vols, Matrix corr, double rate = 0.0,
               Vector weights = Vector(), double maturity = 1.0);

    // d assets, identical spot and vol, identity correlation, unit weights.
    static BasketSpec symmetric(int d, double spot = 1.0, double vol = 1.0,
                                double rate = 0.0);

    int d() const { return static_cast<int>(spots_.size()); }
    const Vector& spots() const { return spots_; }
    const Vector& vols() const { return vols_; }
    const Matrix& corr() const { return corr_; }
    double rate() const { return rate_; }
    const Vector& weights() const { return weights_; }
    double maturity() const { return maturity_; }

    // Cached Cholesky factor of corr.
    const Matrix& chol() const { return chol_; }

    // Sum of w_i S0_i, the at-the-money basket level.
    double basket_spot() const { return weights_.dot(spots_); }

    // Equal spots, vols and weights, identity correlation.
    bool fully_symmetric(double tol = 1e-14) const;

  private:
    Vector spots_, vols_, weights_;
    Matrix corr_, chol_;
    double rate_, maturity_;
};

/// Position/momentum pair of the Hamiltonian flow. Positions are asset
/// prices and must stay componentwise positive.
struct PhaseState {
    Vector x;
    Vector p;
    double t = 0.0;
};

/// A point expressed both in per-asset log coordinates y and in the
/// Euclidean chart x = L^{-1} y obtained by Cholesky whitening. In the
/// chart, the metric induced by the model is Euclidean, geodesics are
/// straight lines, and S = S0 maps to the origin.
struct ChartPoint {
    Vector y;
    Vector x_chart;
};

// y^i = log(S^i/S0^i)/sigma^i, x = L^{-1} y. Throws DomainError on
// non-positive prices.
ChartPoint to_chart(const BasketSpec& spec, const Vector& prices);

// Inverse of to_chart: S^i = S0^i exp(sigma^i (L x)^i).
Vector from_chart(const BasketSpec& spec, const Vector& x_chart);

// Discretely monitored Asian option with N fixing dates i*dt reduced to a
// basket of N correlated assets: sigma^i = sqrt(i)*sigma,
// rho_ij = min(i,j)/sqrt(i*j), weights 1/N, maturity dt.
BasketSpec asian_to_basket(double spot, double sigma, int n_fixings, double dt);

}  // namespace basket
