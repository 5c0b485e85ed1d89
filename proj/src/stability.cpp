#include "skyrmion/stability.hpp"

#include <cmath>
#include <stdexcept>

#include "skyrmion/detail/stencils.hpp"
#include "skyrmion/energy.hpp"

namespace skyrmion {

namespace {

using detail::dx4;
using detail::dxp;
using detail::dy4;
using detail::dyp;
using Eigen::ArrayXd;
using Eigen::Index;

// Flux-form transform of a 1D Sturm-Liouville quadratic form
//   Q(f) = sum_i A_i (df_i)^2 / h_i + sum_j V_j f_j^2 w_j
// under f = psi g. The three returned pieces satisfy, exactly in floating
// point structure (telescoping identity, boundary terms vanish for g with
// g_0 = g_{n-1} = 0):
//   Q(psi g) = sum_i A_i psi_i psi_{i+1} (dg_i)^2 / h_i
//            + sum_j g_j^2 psi_j (F_{j-1} - F_j)
//            + sum_j V_j psi_j^2 g_j^2 w_j,   F_i = A_i dpsi_i / h_i.
struct FluxPieces {
  double weighted_derivative = 0.0;
  double flux_term = 0.0;
  double potential_term = 0.0;
  double total() const {
    return weighted_derivative + flux_term + potential_term;
  }
};

FluxPieces flux_transform(const ArrayXd& a_interval, const ArrayXd& v_node,
                          const ArrayXd& psi, const ArrayXd& g,
                          const RadialGrid& grid) {
  const Index n = grid.size();
  const ArrayXd& h = grid.interval_widths();
  const ArrayXd& w = grid.trapezoid_weights();
  FluxPieces out;
  ArrayXd flux(n - 1);
  for (Index i = 0; i + 1 < n; ++i) {
    const double dg = g[i + 1] - g[i];
    out.weighted_derivative += a_interval[i] * psi[i] * psi[i + 1] * dg * dg /
                               h[i];
    flux[i] = a_interval[i] * (psi[i + 1] - psi[i]) / h[i];
  }
  for (Index j = 0; j < n; ++j) {
    const double f_prev = j > 0 ? flux[j - 1] : 0.0;
    const double f_next = j + 1 < n ? flux[j] : 0.0;
    out.flux_term += g[j] * g[j] * psi[j] * (f_prev - f_next);
    out.potential_term += v_node[j] * psi[j] * psi[j] * g[j] * g[j] * w[j];
  }
  return out;
}

}  // namespace

ModeCoefficients mode_coefficients(const ProfileSolution& profile) {
  const ArrayXd& r = profile.grid.nodes();
  const ArrayXd sn = profile.theta.sin();
  const ArrayXd cs = profile.theta.cos();
  const ArrayXd& tp = profile.theta_prime;
  ModeCoefficients mc;
  mc.f = cs.square() / r.square() - tp.square() - 2.0 * tp -
         2.0 * sn * cs / r + profile.h * cs;
  mc.g = (cs.square() - sn.square()) / r.square() - 4.0 * sn * cs / r +
         profile.h * cs;
  mc.w = cs / r.square() - sn / r;
  return mc;
}

double mode_form(const ProfileSolution& profile, int k,
                 const Eigen::ArrayXd& alpha, const Eigen::ArrayXd& beta) {
  const RadialGrid& grid = profile.grid;
  const Index n = grid.size();
  if (alpha.size() != n || beta.size() != n) {
    throw std::invalid_argument("mode_form input size mismatch");
  }
  const ModeCoefficients mc = mode_coefficients(profile);
  const ArrayXd& r = grid.nodes();
  const ArrayXd& h = grid.interval_widths();
  const ArrayXd& rbar = grid.interval_mean_r();
  const ArrayXd& w = grid.trapezoid_weights();
  const double k2 = double(k) * double(k);

  double total = 0.0;
  for (Index i = 0; i + 1 < n; ++i) {
    const double da = alpha[i + 1] - alpha[i];
    const double db = beta[i + 1] - beta[i];
    total += rbar[i] * (da * da + db * db) / h[i];
  }
  for (Index j = 0; j < n; ++j) {
    const double pot = (k2 / (r[j] * r[j]) + mc.f[j]) * alpha[j] * alpha[j] +
                       (k2 / (r[j] * r[j]) + mc.g[j]) * beta[j] * beta[j] +
                       4.0 * k * mc.w[j] * alpha[j] * beta[j];
    total += pot * r[j] * w[j];
  }
  return total;
}

ModeReduction mode_reduction_margin(const ProfileSolution& profile, int k,
                                    const Eigen::ArrayXd& alpha,
                                    const Eigen::ArrayXd& beta) {
  if (k < 1) {
    throw std::invalid_argument("mode_reduction_margin requires k >= 1");
  }
  const ArrayXd& r = profile.grid.nodes();
  const ArrayXd sn = profile.theta.sin();
  const ArrayXd cs = profile.theta.cos();
  ModeReduction out;
  out.integrand = ((2.0 * k + 1.0) * (alpha.square() + beta.square()) +
                   4.0 * (cs - r * sn) * alpha * beta) /
                  r.square();
  out.lower_bound =
      3.0 * (alpha.abs() - beta.abs()).square() / r.square();
  return out;
}

HardyCheck hardy_decomposition_check(const Eigen::ArrayXd& a,
                                     const Eigen::ArrayXd& v,
                                     const Eigen::ArrayXd& psi,
                                     const Eigen::ArrayXd& f,
                                     const RadialGrid& grid) {
  const Index n = grid.size();
  if (a.size() != n || v.size() != n || psi.size() != n || f.size() != n) {
    throw std::invalid_argument("hardy check input size mismatch");
  }
  for (Index j = 0; j < n; ++j) {
    if (f[j] != 0.0 && !(psi[j] > 0.0)) {
      throw std::invalid_argument("positivity of psi violated");
    }
  }
  const ArrayXd& h = grid.interval_widths();
  const ArrayXd& w = grid.trapezoid_weights();
  // A on intervals by arithmetic average of the nodal samples.
  ArrayXd a_int(n - 1);
  for (Index i = 0; i + 1 < n; ++i) a_int[i] = 0.5 * (a[i] + a[i + 1]);

  double lhs = 0.0;
  for (Index i = 0; i + 1 < n; ++i) {
    const double df = f[i + 1] - f[i];
    lhs += a_int[i] * df * df / h[i];
  }
  for (Index j = 0; j < n; ++j) lhs += v[j] * f[j] * f[j] * w[j];

  ArrayXd g(n);
  for (Index j = 0; j < n; ++j) g[j] = psi[j] != 0.0 ? f[j] / psi[j] : 0.0;
  const FluxPieces rhs = flux_transform(a_int, v, psi, g, grid);
  return {lhs, rhs.total(), std::abs(lhs - rhs.total())};
}

double tilde_form(const ProfileSolution& profile, int k,
                  const Eigen::ArrayXd& xi, const Eigen::ArrayXd& eta) {
  if (k != 0 && k != 1) {
    throw std::invalid_argument("tilde_form handles modes 0 and 1");
  }
  const RadialGrid& grid = profile.grid;
  const Index n = grid.size();
  if (xi.size() != n || eta.size() != n) {
    throw std::invalid_argument("tilde_form input size mismatch");
  }
  const ModeCoefficients mc = mode_coefficients(profile);
  const ArrayXd& r = grid.nodes();
  const ArrayXd& w = grid.trapezoid_weights();
  const ArrayXd psi = profile.theta.sin() / r;      // alpha = psi xi
  const ArrayXd chi = -profile.theta_prime;         // beta = chi eta
  const double k2 = double(k) * double(k);
  const ArrayXd v_f = k2 / r + mc.f * r;
  const ArrayXd v_g = k2 / r + mc.g * r;
  const ArrayXd& a = grid.interval_mean_r();

  const FluxPieces xi_part = flux_transform(a, v_f, psi, xi, grid);
  const FluxPieces eta_part = flux_transform(a, v_g, chi, eta, grid);
  double cross = 0.0;
  for (Index j = 0; j < n; ++j) {
    cross += 4.0 * k * mc.w[j] * psi[j] * chi[j] * xi[j] * eta[j] * r[j] *
             w[j];
  }
  return xi_part.total() + eta_part.total() + cross;
}

Eigen::ArrayXd positivity_coefficient(const ProfileSolution& profile) {
  const ArrayXd& r = profile.grid.nodes();
  const ArrayXd sn = profile.theta.sin();
  const ArrayXd& tp = profile.theta_prime;
  return r * tp.square() -
         sn.square() / (r * (1.0 + 2.0 * r.square() * (-tp)));
}

BandedSymmetricPair assemble_mode_pair(const ProfileSolution& profile, int k) {
  if (k < 0 || k > 8) {
    throw std::invalid_argument("mode index must lie in [0, 8]");
  }
  const RadialGrid& grid = profile.grid;
  const Index n = grid.size();
  const Index j0 = k <= 1 ? 0 : 1;  // inner condition: natural vs Dirichlet
  const Index m = n - 1 - j0;       // retained nodes j0 .. n-2
  const ModeCoefficients mc = mode_coefficients(profile);
  const ArrayXd& r = grid.nodes();
  const ArrayXd& h = grid.interval_widths();
  const ArrayXd& rbar = grid.interval_mean_r();
  const ArrayXd& w = grid.trapezoid_weights();
  const double k2 = double(k) * double(k);

  BandedSymmetricPair pair{BandedSymmetric(2 * m, 2),
                           BandedSymmetric(2 * m, 2)};
  auto idx = [&](Index j, int comp) { return 2 * (j - j0) + comp; };

  // interval stiffness; intervals touching an eliminated Dirichlet node
  // contribute only to the retained diagonal
  for (Index i = 0; i + 1 < n; ++i) {
    const double c = rbar[i] / h[i];
    const Index ja = i, jb = i + 1;
    const bool a_in = ja >= j0 && ja <= n - 2;
    const bool b_in = jb >= j0 && jb <= n - 2;
    for (int comp = 0; comp < 2; ++comp) {
      if (a_in) pair.stiffness.add(idx(ja, comp), idx(ja, comp), c);
      if (b_in) pair.stiffness.add(idx(jb, comp), idx(jb, comp), c);
      if (a_in && b_in) {
        pair.stiffness.add(idx(ja, comp), idx(jb, comp), -c);
      }
    }
  }
  // lumped potentials, cross coupling, and mass
  for (Index j = j0; j <= n - 2; ++j) {
    const double cell = r[j] * w[j];
    pair.stiffness.add(idx(j, 0), idx(j, 0),
                       (k2 / (r[j] * r[j]) + mc.f[j]) * cell);
    pair.stiffness.add(idx(j, 1), idx(j, 1),
                       (k2 / (r[j] * r[j]) + mc.g[j]) * cell);
    pair.stiffness.add(idx(j, 0), idx(j, 1), 2.0 * k * mc.w[j] * cell);
    pair.mass.add(idx(j, 0), idx(j, 0), cell);
    pair.mass.add(idx(j, 1), idx(j, 1), cell);
  }
  return pair;
}

ModeSpectrum mode_spectrum(const ProfileSolution& profile, int k, int count) {
  if (count < 1 || count > 4) {
    throw std::invalid_argument("spectrum count must lie in [1, 4]");
  }
  const BandedSymmetricPair pair = assemble_mode_pair(profile, k);
  const std::vector<Eigenpair> pairs = smallest_eigenpairs(pair, count);

  const Index n = profile.grid.size();
  const Index j0 = k <= 1 ? 0 : 1;
  const Index m = n - 1 - j0;
  ModeSpectrum spec;
  spec.k = k;
  for (const auto& ep : pairs) {
    spec.eigenvalues.push_back(ep.value);
    ArrayXd alpha = ArrayXd::Zero(n), beta = ArrayXd::Zero(n);
    for (Index j = 0; j < m; ++j) {
      alpha[j0 + j] = ep.vector[2 * j];
      beta[j0 + j] = ep.vector[2 * j + 1];
    }
    spec.alpha.push_back(std::move(alpha));
    spec.beta.push_back(std::move(beta));
  }

  // overlap of the lowest pair with the translation mode (sin/r, -theta')
  Eigen::VectorXd z(2 * m);
  for (Index j = 0; j < m; ++j) {
    const Index node = j0 + j;
    z[2 * j] = std::sin(profile.theta[node]) / profile.grid.node(node);
    z[2 * j + 1] = -profile.theta_prime[node];
  }
  const Eigen::VectorXd mz = pair.mass.multiply(z);
  const double znorm = std::sqrt(z.dot(mz));
  if (znorm > 0.0 && !pairs.empty()) {
    spec.zero_mode_overlap =
        std::abs(pairs.front().vector.dot(mz)) / znorm;
  }
  return spec;
}

HessianContext make_hessian_context(const ProfileSolution& profile,
                                    Eigen::Index n) {
  HessianContext ctx{rasterize(profile, n), Eigen::ArrayXXd::Zero(n, n),
                     profile.h};
  const ArrayXd lam = lagrange_multiplier(profile);
  const RadialGrid& grid = profile.grid;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const double rr = std::hypot(ctx.base.x(i), ctx.base.y(j));
      double value = 0.0;
      if (rr < grid.truncation_radius()) {
        if (rr <= grid.inner_radius()) {
          value = lam[0];
        } else {
          Index cell;
          if (grid.spacing() == GridSpacing::LogUniform) {
            cell = Index(std::log(rr / grid.inner_radius()) / grid.log_step());
          } else {
            cell = Index((rr - grid.inner_radius()) /
                         grid.interval_widths()[0]);
          }
          cell = std::clamp<Index>(cell, 0, grid.size() - 2);
          while (grid.node(cell) > rr && cell > 0) --cell;
          while (grid.node(cell + 1) < rr && cell + 2 < grid.size()) ++cell;
          const double t =
              (rr - grid.node(cell)) / grid.interval_widths()[cell];
          value = (1.0 - t) * lam[cell] + t * lam[cell + 1];
        }
      }
      ctx.lambda(i, j) = value;
    }
  }
  return ctx;
}

double h_infinity_form(const Field2D& phi, double h) {
  const Index nx = phi.nx(), ny = phi.ny();
  const double dx = phi.spacing();
  const double inv = 1.0 / dx;
  const double inv12 = 1.0 / (12.0 * dx);
  const auto& p1 = phi.comp(0);
  const auto& p2 = phi.comp(1);
  const auto& p3 = phi.comp(2);

  double acc = 0.0;
  for (Index j = 0; j < ny; ++j) {
    for (Index i = 0; i + 1 < nx; ++i) {
      const double a = dxp(p1, i, j, inv), b = dxp(p2, i, j, inv),
                   c = dxp(p3, i, j, inv);
      acc += a * a + b * b + c * c;
    }
  }
  for (Index j = 0; j + 1 < ny; ++j) {
    for (Index i = 0; i < nx; ++i) {
      const double a = dyp(p1, i, j, inv), b = dyp(p2, i, j, inv),
                   c = dyp(p3, i, j, inv);
      acc += a * a + b * b + c * c;
    }
  }
  for (Index j = 2; j + 2 < ny; ++j) {
    for (Index i = 2; i + 2 < nx; ++i) {
      const double curl1 = dy4(p3, i, j, inv12);
      const double curl2 = -dx4(p3, i, j, inv12);
      const double curl3 = dx4(p2, i, j, inv12) - dy4(p1, i, j, inv12);
      acc += 2.0 * (p1(i, j) * curl1 + p2(i, j) * curl2 + p3(i, j) * curl3);
    }
  }
  acc += h * (p1.square() + p2.square() + p3.square()).sum();
  return acc * dx * dx;
}

double hessian_2d(const HessianContext& ctx, const Field2D& phi) {
  const Eigen::ArrayXXd norm2 = phi.comp(0).square() + phi.comp(1).square() +
                                phi.comp(2).square();
  const double delta_h =
      (ctx.lambda * norm2).sum() * phi.spacing() * phi.spacing();
  return h_infinity_form(phi, ctx.h) - delta_h;
}

double h1_norm_squared(const Field2D& phi) {
  const double l2 = (phi.comp(0).square() + phi.comp(1).square() +
                     phi.comp(2).square())
                        .sum() *
                    phi.spacing() * phi.spacing();
  return l2 + grad_norm_squared(phi);
}

double grad_norm_squared(const Field2D& phi) {
  const Index nx = phi.nx(), ny = phi.ny();
  const double inv = 1.0 / phi.spacing();
  double acc = 0.0;
  for (int c = 0; c < 3; ++c) {
    const auto& p = phi.comp(c);
    for (Index j = 0; j < ny; ++j) {
      for (Index i = 0; i + 1 < nx; ++i) {
        const double d = dxp(p, i, j, inv);
        acc += d * d;
      }
    }
    for (Index j = 0; j + 1 < ny; ++j) {
      for (Index i = 0; i < nx; ++i) {
        const double d = dyp(p, i, j, inv);
        acc += d * d;
      }
    }
  }
  return acc * phi.spacing() * phi.spacing();
}

double curl_norm_squared(const Field2D& phi) {
  const Index nx = phi.nx(), ny = phi.ny();
  const double inv12 = 1.0 / (12.0 * phi.spacing());
  const auto& p1 = phi.comp(0);
  const auto& p2 = phi.comp(1);
  const auto& p3 = phi.comp(2);
  double acc = 0.0;
  for (Index j = 2; j + 2 < ny; ++j) {
    for (Index i = 2; i + 2 < nx; ++i) {
      const double curl1 = dy4(p3, i, j, inv12);
      const double curl2 = -dx4(p3, i, j, inv12);
      const double curl3 = dx4(p2, i, j, inv12) - dy4(p1, i, j, inv12);
      acc += curl1 * curl1 + curl2 * curl2 + curl3 * curl3;
    }
  }
  return acc * phi.spacing() * phi.spacing();
}

IdentityCheck energy_hessian_identity(const HessianContext& ctx,
                                      const Field2D& phi, double scale) {
  const Index nx = ctx.base.nx(), ny = ctx.base.ny();
  Field2D m(ctx.base.length_x(), ctx.base.length_y(), nx, ny);
  for (Index j = 0; j < ny; ++j) {
    for (Index i = 0; i < nx; ++i) {
      double raw[3];
      for (int c = 0; c < 3; ++c) {
        raw[c] = ctx.base.comp(c)(i, j) + scale * phi.comp(c)(i, j);
      }
      const double norm =
          std::sqrt(raw[0] * raw[0] + raw[1] * raw[1] + raw[2] * raw[2]);
      if (norm < 0.5) {
        throw std::invalid_argument("perturbation too large");
      }
      for (int c = 0; c < 3; ++c) m.comp(c)(i, j) = raw[c] / norm;
    }
  }
  Field2D xi(ctx.base.length_x(), ctx.base.length_y(), nx, ny);
  for (int c = 0; c < 3; ++c) {
    xi.comp(c) = m.comp(c) - ctx.base.comp(c);
  }
  const double lhs =
      energy_2d(m, ctx.h).total - energy_2d(ctx.base, ctx.h).total;
  const double rhs = 0.5 * hessian_2d(ctx, xi);
  return {lhs, rhs, std::abs(lhs - rhs)};
}

}  // namespace skyrmion
