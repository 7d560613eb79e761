#include "basket/model.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace basket {

Matrix cholesky_lower(const Matrix& corr) {
    const auto n = corr.rows();
    if (corr.cols() != n) throw PreconditionError("cholesky_lower: matrix must be square");
    if (!corr.isApprox(corr.transpose(), 1e-12))
        throw PreconditionError("cholesky_lower: matrix must be symmetric");

    Matrix L = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double diag = corr(j, j) - L.row(j).head(j).squaredNorm();
        if (!(diag > 0.0)) throw DefinitenessError(static_cast<int>(j) + 1);
        L(j, j) = std::sqrt(diag);
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double s = corr(i, j) - L.row(i).head(j).dot(L.row(j).head(j));
            L(i, j) = s / L(j, j);
        }
    }
    return L;
}

BasketSpec::BasketSpec(Vector spots, Vector vols, Matrix corr, double rate,
                       Vector weights, double maturity)
    : spots_(std::move(spots)),
      vols_(std::move(vols)),
      weights_(std::move(weights)),
      corr_(std::move(corr)),
      rate_(rate),
      maturity_(maturity) {
    const auto d = spots_.size();
    if (d < 1) throw PreconditionError("BasketSpec: at least one asset required");
    if (vols_.size() != d) throw PreconditionError("BasketSpec: vols size mismatch");
    if (weights_.size() == 0) weights_ = Vector::Ones(d);
    if (weights_.size() != d) throw PreconditionError("BasketSpec: weights size mismatch");
    if (corr_.rows() != d || corr_.cols() != d)
        throw PreconditionError("BasketSpec: corr must be d x d");
    if ((spots_.array() <= 0.0).any())
        throw PreconditionError("BasketSpec: spots must be strictly positive");
    if ((vols_.array() <= 0.0).any())
        throw PreconditionError("BasketSpec: vols must be strictly positive");
    if ((weights_.array() <= 0.0).any())
        throw PreconditionError("BasketSpec: weights must be strictly positive");
    if (!(maturity_ > 0.0)) throw PreconditionError("BasketSpec: maturity must be positive");
    for (Eigen::Index i = 0; i < d; ++i) {
        if (std::abs(corr_(i, i) - 1.0) > 1e-12)
            throw PreconditionError("BasketSpec: corr must have unit diagonal");
    }
    if (!corr_.isApprox(corr_.transpose(), 1e-12))
        throw PreconditionError("BasketSpec: corr must be symmetric");

    chol_ = cholesky_lower(corr_);  // throws DefinitenessError if not SPD

    // Shooting Jacobians become ill-conditioned near singular correlation;
    // reject matrices whose smallest eigenvalue is below 1e-10.
    Eigen::SelfAdjointEigenSolver<Matrix> es(corr_);
    if (es.eigenvalues().minCoeff() <= 1e-10)
        throw DefinitenessError(static_cast<int>(d));
}

BasketSpec BasketSpec::symmetric(int d, double spot, double vol, double rate) {
    return BasketSpec(Vector::Constant(d, spot), Vector::Constant(d, vol),
                      Matrix::Identity(d, d), rate);
}

bool BasketSpec::fully_symmetric(double tol) const {
    const int n = d();
    for (int i = 1; i < n; ++i) {
        if (std::abs(spots_[i] - spots_[0]) > tol * spots_[0]) return false;
        if (std::abs(vols_[i] - vols_[0]) > tol * vols_[0]) return false;
        if (std::abs(weights_[i] - weights_[0]) > tol * weights_[0]) return false;
    }
    return corr_.isIdentity(tol);
}

ChartPoint to_chart(const BasketSpec& spec, const Vector& prices) {
    if (prices.size() != spec.d())
        throw PreconditionError("to_chart: price vector size mismatch");
    if ((prices.array() <= 0.0).any())
        throw DomainError("to_chart: prices must be strictly positive");
    ChartPoint cp;
    cp.y = (prices.array() / spec.spots().array()).log() / spec.vols().array();
    // L is lower-triangular, so L^{-1} y by forward substitution
    cp.x_chart = spec.chol().triangularView<Eigen::Lower>().solve(cp.y);
    return cp;
}

Vector from_chart(const BasketSpec& spec, const Vector& x_chart) {
    if (x_chart.size() != spec.d())
        throw PreconditionError("from_chart: chart vector size mismatch");
    Vector y = spec.chol() * x_chart;
    return spec.spots().array() * (spec.vols().array() * y.array()).exp();
}

BasketSpec asian_to_basket(double spot, double sigma, int n_fixings, double dt) {
    if (n_fixings < 1) throw DomainError("asian_to_basket: need at least one fixing");
    if (!(dt > 0.0)) throw DomainError("asian_to_basket: dt must be positive");
    if (!(spot > 0.0)) throw DomainError("asian_to_basket: spot must be positive");
    if (!(sigma > 0.0)) throw DomainError("asian_to_basket: sigma must be positive");

    const int n = n_fixings;
    Vector spots = Vector::Constant(n, spot);
    Vector vols(n);
    Matrix corr(n, n);
    for (int i = 0; i < n; ++i) {
        vols[i] = std::sqrt(static_cast<double>(i + 1)) * sigma;
        for (int j = 0; j < n; ++j) {
            double lo = static_cast<double>(std::min(i, j) + 1);
            corr(i, j) = lo / std::sqrt(static_cast<double>(i + 1) * (j + 1));
        }
    }
    Vector weights = Vector::Constant(n, 1.0 / n);
    return BasketSpec(std::move(spots), std::move(vols), std::move(corr), 0.0,
                      std::move(weights), dt);
}

}  // namespace basket
