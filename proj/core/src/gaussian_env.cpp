#include "voi/gaussian_env.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "voi/errors.hpp"
#include "voi/matrix_io.hpp"
#include "voi/parallel.hpp"
#include "voi/random.hpp"

namespace voi {

namespace {

constexpr double kSymmetryTol = 1e-10;
constexpr double kPsdRelTol = 1e-10;
constexpr double kUnitDiagonalTol = 1e-12;
constexpr double kMaxSignalCondition = 1e12;

void require_square(const MatrixXd& m, const char* name) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionMismatch(std::string(name) + " must be a non-empty square matrix, got " + std::to_string(m.rows()) +
                            "x" + std::to_string(m.cols()));
  }
}

void require_symmetric(const MatrixXd& m, const char* name) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale) {
    throw NotPSD(std::string(name) + " is not symmetric");
  }
}

MatrixXd symmetrized(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

SpectralBand::SpectralBand(double lambda_lo, double lambda_hi) : lo_(lambda_lo), hi_(lambda_hi) {
  if (!(lambda_lo > 0.0) || !std::isfinite(lambda_hi) || lambda_hi < lambda_lo) {
    throw InvalidArgument("spectral band needs 0 < lambda_lo <= lambda_hi, got (" + std::to_string(lambda_lo) + ", " +
                          std::to_string(lambda_hi) + ")");
  }
}

bool SpectralBand::contains(double lambda, double rel_tol) const noexcept {
  return lambda >= lo_ * (1.0 - rel_tol) && lambda <= hi_ * (1.0 + rel_tol);
}

JointGaussian JointGaussian::create(MatrixXd sigma_theta, MatrixXd sigma_theta_s, MatrixXd sigma_s,
                                    JointOptions options) {
  require_square(sigma_theta, "sigma_theta");
  require_square(sigma_s, "sigma_s");
  if (sigma_theta_s.rows() != sigma_theta.rows() || sigma_theta_s.cols() != sigma_s.rows()) {
    throw DimensionMismatch("sigma_theta_s must be " + std::to_string(sigma_theta.rows()) + "x" +
                            std::to_string(sigma_s.rows()));
  }
  require_symmetric(sigma_theta, "sigma_theta");
  require_symmetric(sigma_s, "sigma_s");
  if (options.enforce_unit_diagonal) {
    const double off = (sigma_theta.diagonal().array() - 1.0).abs().maxCoeff();
    if (off > kUnitDiagonalTol) {
      throw InvalidArgument("diag(sigma_theta) must be 1 (max deviation " + std::to_string(off) + ")");
    }
  }
  JointGaussian joint(symmetrized(sigma_theta), std::move(sigma_theta_s), symmetrized(sigma_s));

  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(joint.block_matrix(), Eigen::EigenvaluesOnly);
  const VectorXd& ev = eig.eigenvalues();
  const double largest = std::max(ev.maxCoeff(), 0.0);
  if (ev.minCoeff() < -kPsdRelTol * largest) {
    throw NotPSD("joint covariance has eigenvalue " + std::to_string(ev.minCoeff()));
  }
  return joint;
}

MatrixXd JointGaussian::block_matrix() const {
  const Index d = dim_theta();
  const Index k = dim_signal();
  MatrixXd block(d + k, d + k);
  block.topLeftCorner(d, d) = sigma_theta_;
  block.topRightCorner(d, k) = sigma_theta_s_;
  block.bottomLeftCorner(k, d) = sigma_theta_s_.transpose();
  block.bottomRightCorner(k, k) = sigma_s_;
  return block;
}

JointGaussian read_joint_gaussian(std::istream& in, JointOptions options) {
  long long d = 0;
  long long k = 0;
  if (!(in >> d >> k)) throw ParseError("covariance header: expected \"d k\"");
  if (d < 1 || k < 1) throw ParseError("covariance header: d and k must be positive");
  MatrixXd st = read_matrix_body(in, d, d, "sigma_theta");
  MatrixXd sts = read_matrix_body(in, d, k, "sigma_theta_s");
  MatrixXd ss = read_matrix_body(in, k, k, "sigma_s");
  std::string extra;
  if (in >> extra) throw ParseError("covariance file: trailing data");
  return JointGaussian::create(std::move(st), std::move(sts), std::move(ss), options);
}

JointGaussian read_joint_gaussian_file(const std::filesystem::path& path, JointOptions options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_joint_gaussian(in, options);
}

void write_joint_gaussian(std::ostream& out, const JointGaussian& joint) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << joint.dim_theta() << ' ' << joint.dim_signal() << '\n' << std::setprecision(17);
  for (const MatrixXd* m : {&joint.sigma_theta(), &joint.sigma_theta_s(), &joint.sigma_s()}) {
    for (Index i = 0; i < m->rows(); ++i) {
      for (Index j = 0; j < m->cols(); ++j) {
        if (j) out << ' ';
        out << (*m)(i, j);
      }
      out << '\n';
    }
  }
  out.flags(flags);
  out.precision(precision);
}

PosteriorOperator PosteriorOperator::finish(MatrixXd w, VectorXd eigenvalues, MatrixXd eigenvectors,
                                            std::optional<SpectralBand> band) {
  if (band) {
    const double lo = eigenvalues(0);
    const double hi = eigenvalues(eigenvalues.size() - 1);
    if (!band->contains(lo) || !band->contains(hi)) {
      throw InvalidArgument("operator spectrum [" + std::to_string(lo) + ", " + std::to_string(hi) +
                            "] escapes the declared band");
    }
  }
  MatrixXd factor = eigenvectors * eigenvalues.cwiseSqrt().asDiagonal() * eigenvectors.transpose();
  factor = symmetrized(factor);
  return PosteriorOperator(std::make_shared<const State>(
      State{std::move(w), std::move(eigenvalues), std::move(eigenvectors), std::move(factor), band}));
}

PosteriorOperator PosteriorOperator::from_matrix(const MatrixXd& w, std::optional<SpectralBand> band) {
  require_square(w, "W");
  require_symmetric(w, "W");
  if (!w.allFinite()) throw InvalidArgument("W has non-finite entries");
  MatrixXd sym = symmetrized(w);
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success) throw NotPSD("eigendecomposition of W failed");
  VectorXd ev = eig.eigenvalues();
  const double largest = std::max(ev.maxCoeff(), 0.0);
  if (ev.minCoeff() < -kPsdRelTol * largest) {
    throw NotPSD("W has eigenvalue " + std::to_string(ev.minCoeff()) + " below the PSD tolerance");
  }
  ev = ev.cwiseMax(0.0);
  const MatrixXd& vecs = eig.eigenvectors();
  const double recon = (vecs * ev.asDiagonal() * vecs.transpose() - sym).cwiseAbs().maxCoeff();
  if (recon > 1e-8 * std::max(1.0, largest)) {
    throw NotPSD("eigendecomposition of W does not reconstruct it (error " + std::to_string(recon) + ")");
  }
  return finish(std::move(sym), std::move(ev), vecs, band);
}

PosteriorOperator PosteriorOperator::from_spectrum(const MatrixXd& eigenvectors, const VectorXd& eigenvalues,
                                                   std::optional<SpectralBand> band) {
  require_square(eigenvectors, "eigenvectors");
  if (eigenvalues.size() != eigenvectors.rows()) throw DimensionMismatch("eigenvalue count must match dimension");
  if ((eigenvalues.array() < 0.0).any()) throw NotPSD("negative eigenvalue in spectrum");
  std::vector<Index> order(static_cast<std::size_t>(eigenvalues.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return eigenvalues(a) < eigenvalues(b); });
  VectorXd ev(eigenvalues.size());
  MatrixXd vecs(eigenvectors.rows(), eigenvectors.cols());
  for (Index i = 0; i < ev.size(); ++i) {
    ev(i) = eigenvalues(order[static_cast<std::size_t>(i)]);
    vecs.col(i) = eigenvectors.col(order[static_cast<std::size_t>(i)]);
  }
  MatrixXd w = symmetrized(vecs * ev.asDiagonal() * vecs.transpose());
  return finish(std::move(w), std::move(ev), std::move(vecs), band);
}

PosteriorOperator PosteriorOperator::identity(Index d) {
  if (d < 1) throw InvalidArgument("dimension must be positive");
  return from_spectrum(MatrixXd::Identity(d, d), VectorXd::Ones(d));
}

PosteriorOperator PosteriorOperator::zero(Index d) {
  if (d < 1) throw InvalidArgument("dimension must be positive");
  return from_spectrum(MatrixXd::Identity(d, d), VectorXd::Zero(d));
}

double PosteriorOperator::log_det() const {
  if (!invertible()) throw SingularOperator("W is singular (lambda_min = " + std::to_string(lambda_min()) + ")");
  return eigenvalues().array().log().sum();
}

PosteriorOperator PosteriorOperator::scaled(double c) const {
  if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidArgument("scale must be finite and nonnegative");
  std::optional<SpectralBand> band;
  if (state_->band && c > 0.0) band = SpectralBand(state_->band->lo() * c, state_->band->hi() * c);
  MatrixXd factor = state_->factor * std::sqrt(c);
  return PosteriorOperator(std::make_shared<const State>(
      State{state_->w * c, state_->eigenvalues * c, state_->eigenvectors, std::move(factor), band}));
}

PosteriorOperator compute_posterior_operator(const JointGaussian& joint) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(joint.sigma_s());
  const VectorXd& ev = eig.eigenvalues();
  const double largest = ev.maxCoeff();
  const double smallest = ev.minCoeff();
  if (!(smallest > 0.0) || largest / smallest >= kMaxSignalCondition) {
    throw SingularSignalCovariance("sigma_s is numerically singular (eigenvalues in [" + std::to_string(smallest) +
                                   ", " + std::to_string(largest) + "])");
  }
  // W = B B^T with B = Sigma_theta_s V Lambda^{-1/2}; PSD and symmetric by construction.
  const MatrixXd b = joint.sigma_theta_s() * eig.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal();
  MatrixXd w = b * b.transpose();
  PosteriorOperator op = PosteriorOperator::from_matrix(w);

  Eigen::SelfAdjointEigenSolver<MatrixXd> gap(op.w() - joint.sigma_theta(), Eigen::EigenvaluesOnly);
  if (gap.eigenvalues().maxCoeff() > 1e-8) {
    throw NotPSD("W exceeds sigma_theta by " + std::to_string(gap.eigenvalues().maxCoeff()));
  }
  return op;
}

MatrixXd random_orthogonal(Index d, std::uint64_t seed) {
  if (d < 1) throw InvalidArgument("dimension must be positive");
  const MatrixXd g = standard_normal_block(d, 0, d, seed);
  Eigen::HouseholderQR<MatrixXd> qr(g);
  MatrixXd q = qr.householderQ();
  const MatrixXd& r = qr.matrixQR();
  for (Index j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

PosteriorOperator random_bounded_operator(Index d, SpectralBand band, std::uint64_t seed) {
  if (d < 1) throw InvalidArgument("dimension must be positive");
  const MatrixXd q = random_orthogonal(d, derive_seed(seed, 1));
  RandomStream rng(derive_seed(seed, 2), 0);
  VectorXd lambda(d);
  for (Index i = 0; i < d; ++i) lambda(i) = band.lo() == band.hi() ? band.lo() : rng.uniform(band.lo(), band.hi());
  return PosteriorOperator::from_spectrum(q, lambda, band);
}

MatrixXd standard_normal_block(Index d, Index first, Index count, std::uint64_t seed) {
  MatrixXd g(d, count);
  for (Index j = 0; j < count; ++j) {
    fill_standard_normal(seed, static_cast<std::uint64_t>(first + j),
                         std::span<double>(g.col(j).data(), static_cast<std::size_t>(d)));
  }
  return g;
}

MatrixXd sample_posterior_block(const PosteriorOperator& op, Index first, Index count, std::uint64_t seed) {
  // Products are always taken over whole tiles aligned to absolute sample
  // indices, so a sample's bits never depend on the requested range.
  constexpr Index kTile = 256;
  MatrixXd z(op.dim(), count);
  MatrixXd tile(op.dim(), kTile);
  Index done = 0;
  while (done < count) {
    const Index index = first + done;
    const Index tile_start = index - index % kTile;
    const Index offset = index - tile_start;
    const Index take = std::min(kTile - offset, count - done);
    tile.noalias() = op.factor() * standard_normal_block(op.dim(), tile_start, kTile, seed);
    z.middleCols(done, take) = tile.middleCols(offset, take);
    done += take;
  }
  return z;
}

MatrixXd sample_posterior_means(const PosteriorOperator& op, Index n, std::uint64_t seed, SamplingOptions options) {
  if (n < 1) throw InvalidArgument("sample count must be positive");
  const Index chunk = std::max<Index>(1, options.chunk_rows);
  const Index chunks = (n + chunk - 1) / chunk;
  MatrixXd out(n, op.dim());
  parallel_for(static_cast<std::size_t>(chunks), options.threads, [&](std::size_t c) {
    const Index first = static_cast<Index>(c) * chunk;
    const Index count = std::min(chunk, n - first);
    out.middleRows(first, count) = sample_posterior_block(op, first, count, seed).transpose();
  });
  return out;
}

}  // namespace voi
