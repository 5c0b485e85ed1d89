#include "skyrmion/banded.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace skyrmion {

BandedSymmetric::BandedSymmetric(Eigen::Index n, Eigen::Index bandwidth)
    : n_(n), bw_(bandwidth) {
  if (n <= 0 || bandwidth < 0) {
    throw std::invalid_argument("invalid banded matrix dimensions");
  }
  bands_.reserve(bw_ + 1);
  for (Eigen::Index d = 0; d <= bw_; ++d) {
    bands_.push_back(Eigen::ArrayXd::Zero(n_ - d));
  }
}

double BandedSymmetric::operator()(Eigen::Index i, Eigen::Index j) const {
  const Eigen::Index d = std::abs(i - j);
  if (d > bw_) return 0.0;
  return bands_[d][std::min(i, j)];
}

void BandedSymmetric::add(Eigen::Index i, Eigen::Index j, double value) {
  const Eigen::Index d = std::abs(i - j);
  if (d > bw_) {
    throw std::invalid_argument("entry outside bandwidth");
  }
  bands_[d][std::min(i, j)] += value;
}

Eigen::VectorXd BandedSymmetric::multiply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n_);
  for (Eigen::Index i = 0; i < n_; ++i) {
    double acc = bands_[0][i] * x[i];
    for (Eigen::Index d = 1; d <= bw_; ++d) {
      if (i + d < n_) acc += bands_[d][i] * x[i + d];
      if (i >= d) acc += bands_[d][i - d] * x[i - d];
    }
    y[i] = acc;
  }
  return y;
}

double BandedSymmetric::inf_norm() const {
  double norm = 0.0;
  for (Eigen::Index i = 0; i < n_; ++i) {
    double row = std::abs(bands_[0][i]);
    for (Eigen::Index d = 1; d <= bw_; ++d) {
      if (i + d < n_) row += std::abs(bands_[d][i]);
      if (i >= d) row += std::abs(bands_[d][i - d]);
    }
    norm = std::max(norm, row);
  }
  return norm;
}

BandedLDLT::BandedLDLT(const BandedSymmetric& a) : n_(a.size()), bw_(a.bandwidth()) {
  l_.assign(bw_, Eigen::ArrayXd());
  for (Eigen::Index d = 1; d <= bw_; ++d) l_[d - 1] = Eigen::ArrayXd::Zero(n_ - d);
  d_ = Eigen::ArrayXd::Zero(n_);

  // Column LDL^T restricted to the band.
  double scale = a.inf_norm();
  if (scale == 0.0) scale = 1.0;
  const double breakdown = 1e-14 * scale;
  ok_ = true;
  negative_ = 0;
  for (Eigen::Index j = 0; j < n_; ++j) {
    double dj = a(j, j);
    const Eigen::Index kmin = std::max<Eigen::Index>(0, j - bw_);
    for (Eigen::Index k = kmin; k < j; ++k) {
      const double ljk = l_[j - k - 1][k];
      dj -= ljk * ljk * d_[k];
    }
    if (std::abs(dj) < breakdown) {
      ok_ = false;
      return;
    }
    d_[j] = dj;
    if (dj < 0.0) ++negative_;
    const Eigen::Index imax = std::min(n_ - 1, j + bw_);
    for (Eigen::Index i = j + 1; i <= imax; ++i) {
      double lij = a(i, j);
      const Eigen::Index k0 = std::max<Eigen::Index>(0, i - bw_);
      for (Eigen::Index k = k0; k < j; ++k) {
        lij -= l_[i - k - 1][k] * l_[j - k - 1][k] * d_[k];
      }
      l_[i - j - 1][j] = lij / dj;
    }
  }
}

Eigen::VectorXd BandedLDLT::solve(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x = rhs;
  for (Eigen::Index j = 0; j < n_; ++j) {
    const Eigen::Index imax = std::min(n_ - 1, j + bw_);
    for (Eigen::Index i = j + 1; i <= imax; ++i) {
      x[i] -= l_[i - j - 1][j] * x[j];
    }
  }
  x.array() /= d_;
  for (Eigen::Index j = n_ - 1; j >= 0; --j) {
    const Eigen::Index imax = std::min(n_ - 1, j + bw_);
    for (Eigen::Index i = j + 1; i <= imax; ++i) {
      x[j] -= l_[i - j - 1][j] * x[i];
    }
  }
  return x;
}

namespace {

BandedSymmetric shifted(const BandedSymmetric& k, const BandedSymmetric& m,
                        double sigma) {
  BandedSymmetric out = k;
  const Eigen::Index bw = std::max(k.bandwidth(), m.bandwidth());
  if (out.bandwidth() < bw) {
    throw std::invalid_argument("mass bandwidth exceeds stiffness bandwidth");
  }
  for (Eigen::Index d = 0; d <= m.bandwidth(); ++d) {
    out.band(d) -= sigma * m.band(d);
  }
  return out;
}

// Eigenvalue count below sigma; nudges the shift when the unpivoted
// factorization breaks down.
int inertia_below(const BandedSymmetricPair& pair, double sigma, double scale) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    BandedLDLT fac(shifted(pair.stiffness, pair.mass, sigma));
    if (fac.ok()) return fac.negative_pivots();
    sigma += scale * 1e-12 * (attempt + 1) * (attempt % 2 == 0 ? 1.0 : -1.0);
  }
  throw std::runtime_error("inertia factorization breakdown");
}

}  // namespace

std::vector<Eigenpair> smallest_eigenpairs(const BandedSymmetricPair& pair,
                                           int count) {
  const Eigen::Index n = pair.stiffness.size();
  if (pair.mass.size() != n) {
    throw std::invalid_argument("pair size mismatch");
  }
  if (count < 1 || count > 6) {
    throw std::invalid_argument("count must be in [1, 6]");
  }
  {
    BandedLDLT mass_fac(pair.mass);
    if (!mass_fac.ok() || mass_fac.negative_pivots() > 0) {
      throw std::invalid_argument("invalid mass matrix");
    }
  }

  const double knorm = std::max(pair.stiffness.inf_norm(), 1e-300);
  const double mnorm = std::max(pair.mass.inf_norm(), 1e-300);
  const double scale = knorm / mnorm;

  // Bracket the target eigenvalues by inertia.
  double lo = -scale, hi = scale;
  while (inertia_below(pair, lo, scale) > 0) lo *= 8.0;
  while (inertia_below(pair, hi, scale) < count) hi *= 8.0;

  // Bisect for the sigma just above each of the first `count` eigenvalues.
  std::vector<double> upper(count);
  double left = lo;
  for (int j = 1; j <= count; ++j) {
    double a = left, b = hi;
    while (b - a > 1e-10 * scale + 1e-13 * (std::abs(a) + std::abs(b))) {
      const double mid = 0.5 * (a + b);
      if (inertia_below(pair, mid, scale) >= j) {
        b = mid;
      } else {
        a = mid;
      }
    }
    upper[j - 1] = b;
    left = a;
  }

  auto m_dot = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return x.dot(pair.mass.multiply(y));
  };

  std::mt19937 rng(0x5eed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  std::vector<Eigenpair> result;
  const double tol = 1e-10 * knorm;
  for (int j = 0; j < count; ++j) {
    double sigma = upper[j] + 1e-8 * scale;
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = unit(rng);

    double rho = 0.0;
    bool converged = false;
    for (int outer = 0; outer < 8 && !converged; ++outer) {
      BandedLDLT fac(shifted(pair.stiffness, pair.mass, sigma));
      if (!fac.ok()) {
        sigma += 1e-9 * scale * (outer + 1);
        continue;
      }
      for (int iter = 0; iter < 50; ++iter) {
        for (const auto& prev : result) {
          v -= prev.vector * m_dot(prev.vector, v);
        }
        Eigen::VectorXd w = fac.solve(pair.mass.multiply(v));
        const double wnorm = std::sqrt(std::max(m_dot(w, w), 1e-300));
        v = w / wnorm;
        rho = v.dot(pair.stiffness.multiply(v)) / m_dot(v, v);
        const double res =
            (pair.stiffness.multiply(v) - rho * pair.mass.multiply(v)).norm() /
            std::sqrt(m_dot(v, v));
        if (res <= tol) {
          converged = true;
          break;
        }
      }
      if (!converged) sigma = rho;  // Rayleigh-shift restart
    }
    if (!converged) {
      throw std::runtime_error("eigensolver failed to converge");
    }
    v /= std::sqrt(m_dot(v, v));
    result.push_back({rho, v});
  }

  std::sort(result.begin(), result.end(),
            [](const Eigenpair& a, const Eigenpair& b) {
              return a.value < b.value;
            });
  return result;
}

Eigen::Vector2d solve_2x2(const Eigen::Matrix2d& a, const Eigen::Vector2d& b) {
  const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const double scale = a.squaredNorm();
  if (std::abs(det) < 1e-14 * scale || scale == 0.0) {
    throw std::invalid_argument("singular system");
  }
  Eigen::Vector2d rhs = -b;
  return Eigen::Vector2d((rhs[0] * a(1, 1) - rhs[1] * a(0, 1)) / det,
                         (rhs[1] * a(0, 0) - rhs[0] * a(1, 0)) / det);
}

}  // namespace skyrmion
