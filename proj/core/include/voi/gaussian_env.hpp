#pragma once

// Joint Gaussian law of (theta, S) and the posterior operator
//
//   W = Sigma_theta_s * Sigma_s^{-1} * Sigma_s_theta,
//
// which is the covariance of the posterior mean E[theta | S]. W is the only
// object the rest of the library needs: it induces the intrinsic metric on
// actions, and posterior means are drawn as Z ~ N(0, W).

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>

namespace voi {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Eigenvalue band [lambda_lo, lambda_hi] with 0 < lambda_lo <= lambda_hi.
class SpectralBand {
 public:
  SpectralBand(double lambda_lo, double lambda_hi);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  bool contains(double lambda, double rel_tol = 1e-10) const noexcept;

  friend bool operator==(const SpectralBand&, const SpectralBand&) = default;

 private:
  double lo_;
  double hi_;
};

struct JointOptions {
  /// Require diag(Sigma_theta) == 1 within 1e-12.
  bool enforce_unit_diagonal = true;
};

class JointGaussian {
 public:
  /// Validates shapes, symmetry, the unit-diagonal normalization (unless
  /// disabled) and positive semidefiniteness of the full block matrix.
  /// Throws DimensionMismatch or NotPSD.
  static JointGaussian create(MatrixXd sigma_theta, MatrixXd sigma_theta_s, MatrixXd sigma_s,
                              JointOptions options = {});

  Index dim_theta() const noexcept { return sigma_theta_.rows(); }
  Index dim_signal() const noexcept { return sigma_s_.rows(); }
  const MatrixXd& sigma_theta() const noexcept { return sigma_theta_; }
  const MatrixXd& sigma_theta_s() const noexcept { return sigma_theta_s_; }
  const MatrixXd& sigma_s() const noexcept { return sigma_s_; }

  /// The (d+k) x (d+k) block covariance.
  MatrixXd block_matrix() const;

 private:
  JointGaussian(MatrixXd st, MatrixXd sts, MatrixXd ss)
      : sigma_theta_(std::move(st)), sigma_theta_s_(std::move(sts)), sigma_s_(std::move(ss)) {}

  MatrixXd sigma_theta_;
  MatrixXd sigma_theta_s_;
  MatrixXd sigma_s_;
};

/// Reads the covariance file: "d k", then d rows of Sigma_theta, d rows of
/// Sigma_theta_s and k rows of Sigma_s.
JointGaussian read_joint_gaussian(std::istream& in, JointOptions options = {});
JointGaussian read_joint_gaussian_file(const std::filesystem::path& path, JointOptions options = {});
void write_joint_gaussian(std::ostream& out, const JointGaussian& joint);

/// Immutable symmetric PSD operator W with its eigendecomposition and the
/// symmetric square root R (R^T R = W). Copies share the same state, so
/// passing by value is cheap and thread-safe.
class PosteriorOperator {
 public:
  /// Symmetry is checked at 1e-10 relative to max|W|; eigenvalues down to
  /// -1e-10 * lambda_max are clamped to zero, anything lower is NotPSD.
  static PosteriorOperator from_matrix(const MatrixXd& w, std::optional<SpectralBand> band = std::nullopt);

  /// Builds W = V diag(eigenvalues) V^T from a known orthonormal V.
  static PosteriorOperator from_spectrum(const MatrixXd& eigenvectors, const VectorXd& eigenvalues,
                                         std::optional<SpectralBand> band = std::nullopt);

  static PosteriorOperator identity(Index d);
  static PosteriorOperator zero(Index d);

  Index dim() const noexcept { return state_->w.rows(); }
  const MatrixXd& w() const noexcept { return state_->w; }
  /// Ascending.
  const VectorXd& eigenvalues() const noexcept { return state_->eigenvalues; }
  /// Column i pairs with eigenvalues()(i).
  const MatrixXd& eigenvectors() const noexcept { return state_->eigenvectors; }
  /// Symmetric square root V diag(sqrt(lambda)) V^T.
  const MatrixXd& factor() const noexcept { return state_->factor; }
  const std::optional<SpectralBand>& band() const noexcept { return state_->band; }

  double lambda_min() const noexcept { return state_->eigenvalues(0); }
  double lambda_max() const noexcept { return state_->eigenvalues(dim() - 1); }

  /// lambda_min above the 1e-12 singularity guard.
  bool invertible() const noexcept { return lambda_min() > kSingularityGuard; }
  /// log det W; throws SingularOperator when W is not invertible.
  double log_det() const;

  /// c * W for c > 0 (c == 0 gives the zero operator).
  PosteriorOperator scaled(double c) const;

  static constexpr double kSingularityGuard = 1e-12;

 private:
  struct State {
    MatrixXd w;
    VectorXd eigenvalues;
    MatrixXd eigenvectors;
    MatrixXd factor;
    std::optional<SpectralBand> band;
  };
  explicit PosteriorOperator(std::shared_ptr<const State> state) : state_(std::move(state)) {}
  static PosteriorOperator finish(MatrixXd w, VectorXd eigenvalues, MatrixXd eigenvectors,
                                  std::optional<SpectralBand> band);

  std::shared_ptr<const State> state_;
};

/// W = Sigma_theta_s Sigma_s^{-1} Sigma_s_theta.
/// Throws SingularSignalCovariance when cond(Sigma_s) >= 1e12 and NotPSD if
/// the result violates W <= Sigma_theta by more than 1e-8.
PosteriorOperator compute_posterior_operator(const JointGaussian& joint);

/// W = Q diag(lambda) Q^T with Q Haar-distributed and lambda_i ~ U[lo, hi].
/// Deterministic in (d, band, seed).
PosteriorOperator random_bounded_operator(Index d, SpectralBand band, std::uint64_t seed);

/// Haar-random orthogonal matrix: QR of a Gaussian matrix with the signs of
/// diag(R) folded into Q.
MatrixXd random_orthogonal(Index d, std::uint64_t seed);

/// Sample i uses random stream (seed, i), so the rows do not depend on the
/// chunking or the thread count.
struct SamplingOptions {
  Index chunk_rows = 4096;
  int threads = 1;
};

/// n x d matrix whose rows are i.i.d. N(0, W), generated as R g.
MatrixXd sample_posterior_means(const PosteriorOperator& op, Index n, std::uint64_t seed,
                                SamplingOptions options = {});

/// Draws samples [first, first + count) as the columns of a d x count matrix.
/// Building block for the chunked estimators.
MatrixXd sample_posterior_block(const PosteriorOperator& op, Index first, Index count, std::uint64_t seed);

/// d x count matrix of standard normals for samples [first, first + count).
MatrixXd standard_normal_block(Index d, Index first, Index count, std::uint64_t seed);

}  // namespace voi
