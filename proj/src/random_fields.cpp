#include "skyrmion/random_fields.hpp"

#include <cmath>
#include <random>

namespace skyrmion {

namespace {

// window that is 1 in the bulk and falls smoothly to 0 at 85% of the
// half-width (identically zero on the outer 15%)
double edge_window(double x, double y, double length) {
  const double margin = 0.85 * 0.5 * length;
  const double start = 0.60 * 0.5 * length;
  const double d = std::max(std::abs(x), std::abs(y));
  if (d >= margin) return 0.0;
  if (d <= start) return 1.0;
  const double t = (margin - d) / (margin - start);
  return t * t * (3.0 - 2.0 * t);
}

struct Bump {
  double cx, cy, wx, wy, amp;
};

std::vector<Bump> make_bumps(double length, std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> pos(-0.25 * length, 0.25 * length);
  std::uniform_real_distribution<double> width(0.05 * length, 0.18 * length);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::vector<Bump> bumps(count);
  for (auto& b : bumps) {
    b = {pos(rng), pos(rng), width(rng), width(rng), amp(rng)};
  }
  return bumps;
}

double eval_bumps(const std::vector<Bump>& bumps, double x, double y) {
  double acc = 0.0;
  for (const auto& b : bumps) {
    const double ex = (x - b.cx) / b.wx;
    const double ey = (y - b.cy) / b.wy;
    acc += b.amp * std::exp(-0.5 * (ex * ex + ey * ey));
  }
  return acc;
}

}  // namespace

Field2D random_smooth_field(double length, Eigen::Index n, std::uint64_t seed,
                            int bumps) {
  std::mt19937_64 rng(seed);
  Field2D field(length, length, n, n);
  for (int c = 0; c < 3; ++c) {
    const std::vector<Bump> b = make_bumps(length, rng, bumps);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double y = field.y(j);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double x = field.x(i);
        field.comp(c)(i, j) = edge_window(x, y, length) * eval_bumps(b, x, y);
      }
    }
  }
  return field;
}

Field2D random_tangent_field(const Field2D& base, std::uint64_t seed,
                             int bumps) {
  Field2D field =
      random_smooth_field(base.length_x(), base.nx(), seed, bumps);
  const Eigen::ArrayXXd dot = field.comp(0) * base.comp(0) +
                              field.comp(1) * base.comp(1) +
                              field.comp(2) * base.comp(2);
  for (int c = 0; c < 3; ++c) {
    field.comp(c) -= dot * base.comp(c);
  }
  return field;
}

Field2D random_divfree_field(double length, Eigen::Index n,
                             std::uint64_t seed, int bumps) {
  std::mt19937_64 rng(seed);
  const std::vector<Bump> stream = make_bumps(length, rng, bumps);
  const std::vector<Bump> third = make_bumps(length, rng, bumps);
  Field2D field(length, length, n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double y = field.y(j);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double x = field.x(i);
      // analytic perp-gradient of the stream function
      double sx = 0.0, sy = 0.0;
      for (const auto& b : stream) {
        const double ex = (x - b.cx) / b.wx;
        const double ey = (y - b.cy) / b.wy;
        const double g = b.amp * std::exp(-0.5 * (ex * ex + ey * ey));
        sx += -ex / b.wx * g;
        sy += -ey / b.wy * g;
      }
      const double w = edge_window(x, y, length);
      field.comp(0)(i, j) = w * sy;
      field.comp(1)(i, j) = -w * sx;
      field.comp(2)(i, j) = w * eval_bumps(third, x, y);
    }
  }
  return field;
}

Eigen::ArrayXd random_radial_bump(const RadialGrid& grid, std::uint64_t seed,
                                  int bumps) {
  std::mt19937_64 rng(seed);
  const double r0 = grid.inner_radius();
  const double rmax = grid.truncation_radius();
  std::uniform_real_distribution<double> pos(0.10 * rmax, 0.60 * rmax);
  std::uniform_real_distribution<double> width(0.03 * rmax, 0.15 * rmax);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  Eigen::ArrayXd values = Eigen::ArrayXd::Zero(grid.size());
  for (int b = 0; b < bumps; ++b) {
    const double c = pos(rng), w = width(rng), a = amp(rng);
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const double e = (grid.node(i) - c) / w;
      values[i] += a * std::exp(-0.5 * e * e);
    }
  }
  // enforce compact support on the grid interior
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double r = grid.node(i);
    const double lo = (r - 2.0 * r0) / (0.05 * rmax);
    const double hi = (0.92 * rmax - r) / (0.05 * rmax);
    auto clamp01 = [](double t) { return t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t); };
    const double wl = clamp01(lo), wh = clamp01(hi);
    values[i] *= wl * wl * (3.0 - 2.0 * wl) * wh * wh * (3.0 - 2.0 * wh);
  }
  values[0] = 0.0;
  values[grid.size() - 1] = 0.0;
  return values;
}

}  // namespace skyrmion
