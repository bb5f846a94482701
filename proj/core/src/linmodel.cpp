#include "advlab/linmodel.hpp"

#include <cmath>
#include <string>

#include "advlab/errors.hpp"
#include "advlab/rng.hpp"

namespace advlab {

GroundTruth make_ground_truth(Eigen::VectorXd theta0, double sigma2) {
  if (sigma2 < 0.0) throw ArgumentError("sigma2 must be nonnegative");
  if (theta0.size() < 1) throw ArgumentError("theta0 must be nonempty");
  GroundTruth t;
  t.r2 = theta0.squaredNorm();
  t.theta0 = std::move(theta0);
  t.sigma2 = sigma2;
  return t;
}

GroundTruth sample_theta0_spherical(int d, double sigma2, std::uint64_t seed) {
  if (d < 1) throw ArgumentError("d must be >= 1");
  auto eng = make_engine(seed, /*stream=*/0x7468657461ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd theta0(d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) theta0[i] = scale * gauss(eng);
  return make_ground_truth(std::move(theta0), sigma2);
}

GroundTruth sample_theta0_ones(int d, double sigma2) {
  if (d < 1) throw ArgumentError("d must be >= 1");
  Eigen::VectorXd theta0 =
      Eigen::VectorXd::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
  return make_ground_truth(std::move(theta0), sigma2);
}

Dataset gen_gaussian_dataset(int n1, int d, const GroundTruth& truth,
                             std::uint64_t seed) {
  if (n1 < 1 || d < 1) throw ArgumentError("need n1 >= 1 and d >= 1");
  if (truth.d() != d) throw ArgumentError("theta0 dimension does not match d");
  auto eng = make_engine(seed, /*stream=*/0x64617461ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Dataset data;
  data.X.resize(n1, d);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < d; ++j) data.X(i, j) = gauss(eng);
  data.y = data.X * truth.theta0;
  const double sigma = std::sqrt(truth.sigma2);
  if (sigma > 0.0)
    for (int i = 0; i < n1; ++i) data.y[i] += sigma * gauss(eng);
  data.seed = seed;
  data.truth = truth;
  return data;
}

RidgeFit ridge_fit(const Dataset& data, double lambda) {
  if (lambda < 0.0) throw ArgumentError("lambda must be nonnegative");
  const int n = data.n();
  const int d = data.d();
  RidgeFit fit;
  fit.lambda = lambda;

  if (lambda < kRidgelessThreshold && d > n) {
    // Minimum-norm interpolator through the dual system.
    Eigen::MatrixXd K = data.X * data.X.transpose();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(K);
    Eigen::VectorXd w = ldlt.solve(data.y);
    if (!(K * w - data.y).isZero(1e-6 * std::max(1.0, data.y.norm())))
      throw SingularSystemError("XX' is singular: rows of X are linearly dependent");
    fit.theta_hat = data.X.transpose() * w;
    fit.fitted = data.y;  // exact interpolation
    fit.leverage = Eigen::VectorXd::Ones(n);
    return fit;
  }

  Eigen::MatrixXd gram = data.X.transpose() * data.X;
  if (lambda >= kRidgelessThreshold)
    gram.diagonal().array() += static_cast<double>(n) * lambda;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  fit.gram_inv = ldlt.solve(Eigen::MatrixXd::Identity(d, d));
  const double resid =
      (gram * fit.gram_inv - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
  if (!std::isfinite(resid) || resid > 1e-6) {
    if (lambda < kRidgelessThreshold)
      throw SingularSystemError(
          "X'X is rank deficient at lambda = 0 (rank < d); ridgeless solve "
          "requires a full-rank design");
    throw SingularSystemError("ridge system solve failed");
  }
  fit.theta_hat = fit.gram_inv * (data.X.transpose() * data.y);
  fit.fitted = data.X * fit.theta_hat;
  fit.leverage.resize(n);
  for (int j = 0; j < n; ++j)
    fit.leverage[j] = data.X.row(j) * fit.gram_inv * data.X.row(j).transpose();
  return fit;
}

Eigen::VectorXd loo_delta(const RidgeFit& fit, const Dataset& data, int j) {
  if (j < 0 || j >= data.n()) throw ArgumentError("sample index out of range");
  if (!fit.has_gram_inv())
    throw DegenerateLeverageError(
        "leave-one-out unavailable for the minimum-norm interpolator");
  const double s = fit.leverage[j];
  if (s >= 1.0 - 1e-12)
    throw DegenerateLeverageError("leverage of sample " + std::to_string(j) +
                                  " is >= 1 (interpolation regime)");
  const double scale = (data.y[j] - fit.fitted[j]) / (1.0 - s);
  return scale * (fit.gram_inv * data.X.row(j).transpose());
}

RidgePath::RidgePath(const Dataset& data, const Eigen::VectorXd& reference)
    : n_(data.n()), d_(data.d()) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(data.X,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  sv_ = svd.singularValues();
  V_ = svd.matrixV();
  uty_ = svd.matrixU().transpose() * data.y;
  ref_v_ = V_.transpose() * reference;
  ref_perp2_ = std::max(0.0, reference.squaredNorm() - ref_v_.squaredNorm());
}

Eigen::VectorXd RidgePath::shrink(double lambda) const {
  // theta(lambda) = V diag(s_i (u_i'y) / (s_i^2 + n lambda)) in V-coordinates;
  // at lambda = 0 zero singular values are dropped (minimum-norm limit).
  const double shift = static_cast<double>(n_) * lambda;
  Eigen::VectorXd c(sv_.size());
  for (int i = 0; i < sv_.size(); ++i) {
    const double s2 = sv_[i] * sv_[i];
    if (shift < kRidgelessThreshold && s2 < 1e-12 * sv_[0] * sv_[0])
      c[i] = 0.0;
    else
      c[i] = sv_[i] * uty_[i] / (s2 + shift);
  }
  return c;
}

Eigen::VectorXd RidgePath::theta(double lambda) const { return V_ * shrink(lambda); }

double RidgePath::dist2(double lambda) const {
  return (shrink(lambda) - ref_v_).squaredNorm() + ref_perp2_;
}

double RidgePath::norm2(double lambda) const { return shrink(lambda).squaredNorm(); }

}  // namespace advlab
