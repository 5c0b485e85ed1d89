#pragma once

#include <Eigen/Core>
#include <vector>

namespace skyrmion {

/// Symmetric banded matrix, lower-triangle storage: band(d) holds the d-th
/// subdiagonal, entry j of band(d) is A(j+d, j).
class BandedSymmetric {
public:
  BandedSymmetric(Eigen::Index n, Eigen::Index bandwidth);

  Eigen::Index size() const { return n_; }
  Eigen::Index bandwidth() const { return bw_; }

  double operator()(Eigen::Index i, Eigen::Index j) const;
  /// Accumulating assembly into A(i,j) (and its mirror).
  void add(Eigen::Index i, Eigen::Index j, double value);

  const Eigen::ArrayXd& band(Eigen::Index d) const { return bands_[d]; }
  Eigen::ArrayXd& band(Eigen::Index d) { return bands_[d]; }

  /// y = A x.
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  /// max_i sum_j |A(i,j)|.
  double inf_norm() const;

private:
  Eigen::Index n_, bw_;
  std::vector<Eigen::ArrayXd> bands_;
};

/// Discrete quadratic-form pair (stiffness K, mass M) for a generalized
/// symmetric eigenproblem K x = lambda M x with M positive definite.
struct BandedSymmetricPair {
  BandedSymmetric stiffness;
  BandedSymmetric mass;
};

/// LDL^T factorization of a symmetric banded matrix without pivoting.
/// Intended for shifted matrices K - sigma*M where the shift keeps pivots
/// away from zero; `ok` is false when a pivot underflows the breakdown
/// threshold.
class BandedLDLT {
public:
  BandedLDLT() = default;
  explicit BandedLDLT(const BandedSymmetric& a);

  bool ok() const { return ok_; }
  /// Number of negative pivots (= number of eigenvalues below the shift,
  /// by Sylvester's law of inertia).
  int negative_pivots() const { return negative_; }
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

private:
  Eigen::Index n_ = 0, bw_ = 0;
  std::vector<Eigen::ArrayXd> l_;
  Eigen::ArrayXd d_;
  bool ok_ = false;
  int negative_ = 0;
};

struct Eigenpair {
  double value;
  Eigen::VectorXd vector;  // M-normalized
};

/// The `count` algebraically smallest eigenpairs of K x = lambda M x,
/// via inertia bisection plus shift-and-invert iteration with deflation.
/// Eigenvectors are M-orthonormal; residuals satisfy
/// ||K x - lambda M x|| <= 1e-10 ||K||_inf.
/// Throws std::invalid_argument("invalid mass matrix") if M is not positive
/// definite.
std::vector<Eigenpair> smallest_eigenpairs(const BandedSymmetricPair& pair,
                                           int count);

/// Solution of the 2x2 system A x + b = 0 (note the sign convention).
/// Throws std::invalid_argument("singular system") when
/// |det A| < 1e-14 * ||A||^2.
Eigen::Vector2d solve_2x2(const Eigen::Matrix2d& a, const Eigen::Vector2d& b);

}  // namespace skyrmion
