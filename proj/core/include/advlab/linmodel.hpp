#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

namespace advlab {

/// Lambda below this is treated as ridgeless (minimum-norm for d > n).
inline constexpr double kRidgelessThreshold = 1e-10;

struct GroundTruth {
  Eigen::VectorXd theta0;
  double sigma2 = 0.0;  // response noise variance
  double r2 = 0.0;      // ||theta0||^2, cached

  int d() const { return static_cast<int>(theta0.size()); }
};

GroundTruth make_ground_truth(Eigen::VectorXd theta0, double sigma2);

/// Each coordinate drawn N(0, 1/d), so E||theta0||^2 = 1.
GroundTruth sample_theta0_spherical(int d, double sigma2, std::uint64_t seed);

/// Deterministic theta0 = 1/sqrt(d), so ||theta0|| = 1 exactly.
GroundTruth sample_theta0_ones(int d, double sigma2);

struct Dataset {
  Eigen::MatrixXd X;  // n1 x d, rows are samples
  Eigen::VectorXd y;  // length n1
  std::uint64_t seed = 0;
  std::optional<GroundTruth> truth;

  int n() const { return static_cast<int>(X.rows()); }
  int d() const { return static_cast<int>(X.cols()); }
};

/// Rows of X are i.i.d. N(0, I_d); y = X theta0 + noise, noise i.i.d.
/// N(0, sigma2). Identical seed reproduces identical bytes.
Dataset gen_gaussian_dataset(int n1, int d, const GroundTruth& truth,
                             std::uint64_t seed);

struct RidgeFit {
  double lambda = 0.0;
  Eigen::VectorXd theta_hat;  // (X'X + n lambda I)^-1 X'y
  Eigen::MatrixXd gram_inv;   // (X'X + n lambda I)^-1; empty for min-norm fits
  Eigen::VectorXd fitted;     // yhat_j = x_j' theta_hat
  Eigen::VectorXd leverage;   // S_j = x_j' gram_inv x_j

  bool has_gram_inv() const { return gram_inv.size() > 0; }
};

/// Closed-form ridge. lambda below kRidgelessThreshold is the ridgeless
/// limit: plain least squares for d <= n, the minimum-norm interpolator
/// (theta = X'(XX')^-1 y) for d > n. The min-norm branch has unit
/// leverages and no cached Gram inverse, so leave-one-out is unavailable
/// there.
RidgeFit ridge_fit(const Dataset& data, double lambda);

/// theta_hat - theta_hat^{-j} via the rank-one downdate
///   (y_j - yhat_j)/(1 - S_j) * gram_inv x_j.
/// Exact, not asymptotic. Requires leverage[j] < 1.
Eigen::VectorXd loo_delta(const RidgeFit& fit, const Dataset& data, int j);

/// SVD-backed evaluator for ridge sweeps over many lambda values on one
/// dataset: O(n d min(n,d)) once, then O(min(n,d)) per lambda for the
/// statistics used by the experiment harness.
class RidgePath {
 public:
  RidgePath(const Dataset& data, const Eigen::VectorXd& reference);

  Eigen::VectorXd theta(double lambda) const;
  /// ||theta(lambda) - reference||^2
  double dist2(double lambda) const;
  /// ||theta(lambda)||^2
  double norm2(double lambda) const;

 private:
  Eigen::VectorXd shrink(double lambda) const;  // per-singular-value coeffs

  int n_, d_;
  Eigen::VectorXd sv_;        // singular values of X
  Eigen::MatrixXd V_;         // right singular vectors, d x k
  Eigen::VectorXd uty_;       // U' y
  Eigen::VectorXd ref_v_;     // V' reference
  double ref_perp2_;          // ||reference||^2 - ||V' reference||^2
};

}  // namespace advlab
