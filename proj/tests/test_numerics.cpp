#include <cmath>
#include <random>

#include "doctest.h"
#include "skyrmion/banded.hpp"
#include "skyrmion/radial_grid.hpp"

using namespace skyrmion;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("log grid construction and invariants") {
  const RadialGrid grid = RadialGrid::log_spaced(1e-5, 1.0, 512);
  CHECK(grid.size() == 512);
  CHECK(grid.inner_radius() == doctest::Approx(1e-5));
  CHECK(grid.truncation_radius() == doctest::Approx(1.0));
  for (Eigen::Index i = 0; i + 1 < grid.size(); ++i) {
    CHECK(grid.node(i) < grid.node(i + 1));
  }
  CHECK_THROWS(RadialGrid::log_spaced(1e-2, 1.0, 512));  // r0 too large
  CHECK_THROWS(RadialGrid::log_spaced(1e-5, 1.0, 64));   // too few nodes
}

TEST_CASE("quadrature: analytic examples") {
  // f = 1 against r dr on [r0, 1]: 1/2 up to the truncated sliver
  const RadialGrid grid = RadialGrid::log_spaced(1e-5, 1.0, 512);
  const Eigen::ArrayXd one = Eigen::ArrayXd::Ones(grid.size());
  CHECK(integrate_radial(one, grid, Weight::R) ==
        doctest::Approx(0.5).epsilon(1e-8));

  // f = exp(-r) against r dr on [~0, 40]: Gamma(2) = 1 within 1e-8
  const RadialGrid tail = RadialGrid::log_spaced(4e-5, 40.0, 4096);
  const Eigen::ArrayXd decay = (-tail.nodes()).exp();
  CHECK(std::abs(integrate_radial(decay, tail, Weight::R) - 1.0) <= 1e-8);
}

TEST_CASE("quadrature: exact for quadratics on any grid") {
  const RadialGrid grid = RadialGrid::log_spaced(1e-5, 2.0, 677);
  const Eigen::ArrayXd& r = grid.nodes();
  const Eigen::ArrayXd f = 2.0 + 3.0 * r + 4.0 * r.square();
  auto prim = [](double x) {
    return 2.0 * x + 1.5 * x * x + (4.0 / 3.0) * x * x * x;
  };
  const double exact = prim(2.0) - prim(1e-5);
  CHECK(std::abs(integrate_radial(f, grid, Weight::One) - exact) <=
        1e-12 * exact);

  // with weight r, f r quadratic
  const Eigen::ArrayXd g = 2.0 / r + 3.0 + 4.0 * r;
  CHECK(std::abs(integrate_radial(g, grid, Weight::R) - exact) <=
        1e-12 * exact);
}

TEST_CASE("quadrature: refinement improves by at least 3.5x") {
  auto err = [](Eigen::Index n) {
    const RadialGrid grid = RadialGrid::uniform(1e-5, 1.0, n);
    const Eigen::ArrayXd f = grid.nodes().sin();
    const double exact = std::cos(1e-5) - std::cos(1.0);
    return std::abs(integrate_radial(f, grid, Weight::One) - exact);
  };
  CHECK(err(513) / err(1025) >= 3.5);

  auto err_log = [](Eigen::Index n) {
    const RadialGrid grid = RadialGrid::log_spaced(1e-5, 1.0, n);
    const Eigen::ArrayXd f = grid.nodes().square();  // cubic against r dr
    const double exact = 0.25 * (1.0 - std::pow(1e-5, 4));
    return std::abs(integrate_radial(f, grid, Weight::R) - exact);
  };
  CHECK(err_log(513) / err_log(1025) >= 3.5);
}

TEST_CASE("quadrature: non-finite input rejected") {
  const RadialGrid grid = RadialGrid::log_spaced(1e-5, 1.0, 256);
  Eigen::ArrayXd f = Eigen::ArrayXd::Ones(grid.size());
  f[100] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_WITH_AS(integrate_radial(f, grid, Weight::One),
                       "non-finite integrand", std::invalid_argument);
}

TEST_CASE("derivative: five-point log stencil") {
  const RadialGrid grid = RadialGrid::log_spaced(1e-4, 3.0, 768);
  const Eigen::ArrayXd f = (-grid.nodes()).exp();
  const Eigen::ArrayXd df = nodal_derivative(f, grid);
  double worst = 0.0;
  for (Eigen::Index i = 2; i + 2 < grid.size(); ++i) {
    worst = std::max(worst, std::abs(df[i] + f[i]));
  }
  CHECK(worst <= 1e-8);
}

namespace {

BandedSymmetricPair identity_pair(Eigen::Index n) {
  BandedSymmetricPair pair{BandedSymmetric(n, 2), BandedSymmetric(n, 2)};
  for (Eigen::Index i = 0; i < n; ++i) {
    pair.stiffness.add(i, i, 1.0);
    pair.mass.add(i, i, 1.0);
  }
  return pair;
}

// P1 finite elements for -u'' on [0,1] with Dirichlet ends
BandedSymmetricPair dirichlet_laplacian_pair(Eigen::Index n) {
  const double h = 1.0 / double(n + 1);
  BandedSymmetricPair pair{BandedSymmetric(n, 2), BandedSymmetric(n, 2)};
  for (Eigen::Index i = 0; i < n; ++i) {
    pair.stiffness.add(i, i, 2.0 / h);
    pair.mass.add(i, i, 4.0 * h / 6.0);
    if (i + 1 < n) {
      pair.stiffness.add(i, i + 1, -1.0 / h);
      pair.mass.add(i, i + 1, h / 6.0);
    }
  }
  return pair;
}

}  // namespace

TEST_CASE("eigensolver: identity pair") {
  const auto pairs = smallest_eigenpairs(identity_pair(64), 2);
  CHECK(pairs[0].value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pairs[1].value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eigensolver: Dirichlet Laplacian eigenvalues") {
  const Eigen::Index n = 1000;
  const BandedSymmetricPair pair = dirichlet_laplacian_pair(n);
  const auto pairs = smallest_eigenpairs(pair, 3);
  CHECK(std::abs(pairs[0].value - kPi * kPi) <= 1e-3 * kPi * kPi);
  CHECK(std::abs(pairs[1].value - 4.0 * kPi * kPi) <= 1e-3 * 4 * kPi * kPi);
  CHECK(std::abs(pairs[2].value - 9.0 * kPi * kPi) <= 1e-3 * 9 * kPi * kPi);

  // M-orthonormality and residual contract
  const double knorm = pair.stiffness.inf_norm();
  for (size_t a = 0; a < pairs.size(); ++a) {
    for (size_t b = 0; b < pairs.size(); ++b) {
      const double dot =
          pairs[a].vector.dot(pair.mass.multiply(pairs[b].vector));
      CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) <= 1e-10);
    }
    const Eigen::VectorXd res =
        pair.stiffness.multiply(pairs[a].vector) -
        pairs[a].value * pair.mass.multiply(pairs[a].vector);
    CHECK(res.norm() <= 1e-10 * knorm);
  }
}

TEST_CASE("eigensolver: random Rayleigh quotients bound lambda_min") {
  const BandedSymmetricPair pair = dirichlet_laplacian_pair(300);
  const double lambda = smallest_eigenpairs(pair, 1)[0].value;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd v(300);
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = unit(rng);
    const double rq =
        v.dot(pair.stiffness.multiply(v)) / v.dot(pair.mass.multiply(v));
    CHECK(rq >= lambda - 1e-9 * std::abs(lambda));
  }
}

TEST_CASE("eigensolver: rejects indefinite mass") {
  BandedSymmetricPair pair = identity_pair(16);
  pair.mass.add(5, 5, -3.0);
  CHECK_THROWS_WITH_AS(smallest_eigenpairs(pair, 1), "invalid mass matrix",
                       std::invalid_argument);
}

TEST_CASE("solve_2x2 sign convention and errors") {
  Eigen::Matrix2d eye = Eigen::Matrix2d::Identity();
  const Eigen::Vector2d x = solve_2x2(eye, Eigen::Vector2d(1.0, 0.0));
  CHECK(x.x() == doctest::Approx(-1.0));
  CHECK(x.y() == doctest::Approx(0.0));

  // 4 pi rotation: x = -A^T b / (4 pi)^2
  Eigen::Matrix2d rot;
  rot << 0.0, -4.0 * kPi, 4.0 * kPi, 0.0;
  const Eigen::Vector2d b(0.3, -1.7);
  const Eigen::Vector2d got = solve_2x2(rot, b);
  const Eigen::Vector2d expect = -rot.transpose() * b / (16.0 * kPi * kPi);
  CHECK((got - expect).norm() <= 1e-14);

  Eigen::Matrix2d singular;
  singular << 1.0, 1.0, 1.0, 1.0;
  CHECK_THROWS_WITH_AS(solve_2x2(singular, b), "singular system",
                       std::invalid_argument);
}
