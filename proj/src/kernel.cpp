#include "bgk/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "bgk/rng.hpp"

namespace bgk {

namespace {

// xi-window along {o + xi*u} where psi can be nonzero; false if the ray
// misses the support ball entirely
bool ray_ball_window(const Vec& o, const Vec& u, const Ball& ball, double& lo, double& hi) {
  Vec oc = o - ball.center;
  double b = u.dot(oc);
  double c = oc.norm2() - ball.radius * ball.radius;
  double disc = b * b - c;
  if (disc <= 0.0) return false;
  double sq = std::sqrt(disc);
  lo = -b - sq;
  hi = -b + sq;
  return true;
}

void require_offdiagonal(const Vec& x, const Vec& y) {
  if ((x - y).norm2() == 0.0) throw std::invalid_argument("kernel diagonal: x == y");
}

void require_inside(const KernelContext& ctx, const Vec& x, const char* who) {
  if (!contains(ctx.domain, x))
    throw std::domain_error(std::string(who) + ": x must lie inside the domain");
}

// value type for the combined psi / grad-psi line integrals
struct RayPack {
  double a = 0.0;
  Vec g;

  RayPack& operator+=(const RayPack& o) {
    a += o.a;
    g += o.g;
    return *this;
  }
  RayPack& operator-=(const RayPack& o) {
    a -= o.a;
    g -= o.g;
    return *this;
  }
  RayPack& operator*=(double s) {
    a *= s;
    g *= s;
    return *this;
  }
  friend RayPack operator+(RayPack x, const RayPack& y) { return x += y; }
  friend RayPack operator-(RayPack x, const RayPack& y) { return x -= y; }
  friend RayPack operator*(RayPack x, double s) { return x *= s; }

  friend RayPack vabs(RayPack p) {
    p.a = std::abs(p.a);
    p.g = vabs(p.g);
    return p;
  }
  friend double vmax(const RayPack& p) { return std::max(std::abs(p.a), vmax(p.g)); }
  friend bool vfinite(const RayPack& p) { return std::isfinite(p.a) && vfinite(p.g); }
};

// int_0^inf of { psi(x + r w) (r+s)^{pa}, grad_psi(x + r w) (r+s)^{pg} } dr,
// clipped to the support window. s = 0 gives the Calderon-Zygmund moments.
RayPack r_moments(const KernelContext& ctx, const Vec& origin, const Vec& w, double s,
                  int pa, int pg) {
  double lo, hi;
  if (!ray_ball_window(origin, w, ctx.psi.support(), lo, hi)) return {};
  lo = std::max(lo, 0.0);
  if (hi <= lo) return {};
  auto f = [&](double r) {
    PsiSample ps = ctx.psi.sample(origin + r * w);
    RayPack out;
    double base = r + s;
    double wa = 1.0, wg = 1.0;
    for (int k = 0; k < pa; ++k) wa *= base;
    for (int k = 0; k < pg; ++k) wg *= base;
    out.a = ps.value * wa;
    out.g = ps.grad * wg;
    return out;
  };
  return integrate_1d_t<RayPack>(f, lo, hi, ctx.quad).value;
}

}  // namespace

QuadConfig default_ray_config() {
  QuadConfig cfg;
  cfg.rel_tol = 1e-10;
  cfg.abs_tol = 1e-14;
  cfg.max_subdivisions = 200;
  return cfg;
}

double ray_integral(const KernelContext& ctx, const Vec& x, const Vec& y) {
  require_offdiagonal(x, y);
  double s = (x - y).norm();
  Vec w = (x - y) * (1.0 / s);
  double lo, hi;
  if (!ray_ball_window(y, w, ctx.psi.support(), lo, hi)) return 0.0;
  lo = std::max(lo, s);
  if (hi <= lo) return 0.0;
  const int n = ctx.dim();
  auto f = [&](double xi) {
    double p = ctx.psi(y + xi * w);
    return (n == 2) ? p * xi : p * xi * xi;
  };
  return integrate_1d_t<double>(f, lo, hi, ctx.quad).value;
}

Vec kernel_N(const KernelContext& ctx, const Vec& x, const Vec& y) {
  require_offdiagonal(x, y);
  double s = (x - y).norm();
  double ri = ray_integral(ctx, x, y);
  return (x - y) * (ri / std::pow(s, ctx.dim()));
}

Vec kernel_N_alpha(const KernelContext& ctx, const Vec& x, const Vec& y) {
  require_offdiagonal(x, y);
  Vec d = x - y;
  // window in alpha: |y + alpha d - x0| < R
  Vec oc = y - ctx.psi.support().center;
  double A = d.norm2();
  double B = d.dot(oc);
  double C = oc.norm2() - ctx.psi.support().radius * ctx.psi.support().radius;
  double disc = B * B - A * C;
  if (disc <= 0.0) return Vec();
  double sq = std::sqrt(disc);
  double lo = std::max(1.0, (-B - sq) / A);
  double hi = (-B + sq) / A;
  if (hi <= lo) return Vec();
  const int n = ctx.dim();
  auto f = [&](double a) {
    double p = ctx.psi(y + a * d);
    return (n == 2) ? p * a : p * a * a;
  };
  double I = integrate_1d_t<double>(f, lo, hi, ctx.quad).value;
  return d * I;
}

Vec kernel_N_r(const KernelContext& ctx, const Vec& x, const Vec& y) {
  require_offdiagonal(x, y);
  double s = (x - y).norm();
  Vec w = (x - y) * (1.0 / s);
  RayPack m = r_moments(ctx, x, w, s, ctx.dim() - 1, 0);
  return (x - y) * (m.a / std::pow(s, ctx.dim()));
}

Vec kernel_N_z(const KernelContext& ctx, const Vec& x, const Vec& z) {
  if (z.norm2() == 0.0) throw std::invalid_argument("kernel_N_z: z must be nonzero");
  return kernel_N_r(ctx, x, x - z);
}

Mat kernel_dN(const KernelContext& ctx, const Vec& x, const Vec& y) {
  require_offdiagonal(x, y);
  require_inside(ctx, x, "kernel_dN");
  const int n = ctx.dim();
  double s = (x - y).norm();
  Vec w = (x - y) * (1.0 / s);
  RayPack m = r_moments(ctx, x, w, s, n - 1, n);
  double A = m.a / std::pow(s, n);
  Vec B = ctx.corrupt_drop_grad ? Vec() : m.g * (1.0 / std::pow(s, n + 1));
  Mat dn = outer(x - y, B);
  for (int i = 0; i < n; ++i) dn(i, i) += A;
  return dn;
}

Mat kernel_K(const KernelContext& ctx, const Vec& x, const Vec& z) {
  double zn = z.norm();
  if (zn == 0.0) throw std::invalid_argument("kernel_K: z must be nonzero");
  require_inside(ctx, x, "kernel_K");
  const int n = ctx.dim();
  Vec w = z * (1.0 / zn);
  RayPack m = r_moments(ctx, x, w, 0.0, n - 1, n);
  double A = m.a / std::pow(zn, n);
  Vec B = ctx.corrupt_drop_grad ? Vec() : m.g * (1.0 / std::pow(zn, n + 1));
  Mat k = outer(z, B);
  for (int i = 0; i < n; ++i) k(i, i) += A;
  return k;
}

Mat kernel_k(const KernelContext& ctx, const Vec& x, const Vec& z) {
  double zn = z.norm();
  if (zn == 0.0) throw std::invalid_argument("kernel_k: z must be nonzero");
  require_inside(ctx, x, "kernel_k");
  const int n = ctx.dim();
  Vec w = z * (1.0 / zn);
  RayPack m = r_moments(ctx, x, w, 0.0, n - 1, n);
  Vec B = ctx.corrupt_drop_grad ? Vec() : m.g;
  Mat k = outer(w, B);
  for (int i = 0; i < n; ++i) k(i, i) += m.a;
  return k;
}

Mat kernel_G(const KernelContext& ctx, const Vec& x, const Vec& y) {
  return kernel_dN(ctx, x, y) - kernel_K(ctx, x, x - y);
}

Mat kernel_N_gradpsi(const KernelContext& ctx, const Vec& x, const Vec& y) {
  require_offdiagonal(x, y);
  const int n = ctx.dim();
  double s = (x - y).norm();
  Vec w = (x - y) * (1.0 / s);
  double lo, hi;
  if (!ray_ball_window(y, w, ctx.psi.support(), lo, hi)) return Mat();
  lo = std::max(lo, s);
  if (hi <= lo) return Mat();
  auto f = [&](double xi) {
    Vec g = ctx.psi.grad(y + xi * w);
    return g * ((n == 2) ? xi : xi * xi);
  };
  Vec I = integrate_1d_t<Vec>(f, lo, hi, ctx.quad).value;
  return outer(x - y, I * (1.0 / std::pow(s, n)));
}

Mat sphere_mean_k(const KernelContext& ctx, const Vec& x, const QuadConfig& angular_cfg) {
  require_inside(ctx, x, "sphere_mean_k");
  auto f = [&](const Vec& u) { return kernel_k(ctx, x, u); };
  return integrate_sphere_t<Mat>(f, ctx.dim(), angular_cfg).value;
}

KernelDiagnostics measure_diagnostics(const KernelContext& ctx, long n_pairs,
                                      const QuadConfig& angular_cfg, std::uint64_t seed) {
  KernelDiagnostics diag;
  const int n = ctx.dim();
  const double diam = diameter(ctx.domain);
  Vec lo, hi;
  bounding_box(ctx.domain, lo, hi);
  Vec wlo = lo, whi = hi;
  for (int k = 0; k < n; ++k) {  // slightly inflated box for the x samples
    double pad = 0.2 * (hi[k] - lo[k]);
    wlo[k] -= pad;
    whi[k] += pad;
  }

  SplitMix64 rng(seed);
  long done = 0;
  std::uint64_t idx = seed * 104729;
  while (done < n_pairs) {
    Vec y = halton_in_box(idx, lo, hi, n);
    ++idx;
    if (!contains(ctx.domain, y)) continue;
    Vec x = halton_in_box(idx, wlo, whi, n);
    ++idx;
    double s = (x - y).norm();
    if (s < 1e-12) continue;
    ++done;
    diag.lemma4_constant =
        std::max(diag.lemma4_constant, vmax(kernel_N(ctx, x, y)) * std::pow(s, n - 1));
  }

  // derivative bounds need x inside the domain; sample |x-y| log-uniformly
  done = 0;
  while (done < n_pairs) {
    Vec x = halton_in_box(idx, lo, hi, n);
    ++idx;
    if (!contains(ctx.domain, x)) continue;
    double rho = std::pow(10.0, std::log10(1e-4 * diam) +
                                    rng.uniform() * std::log10(diam / (1e-4 * diam)));
    Vec y = x + rho * halton_direction(idx, n);
    ++idx;
    ++done;
    double s = (x - y).norm();
    Mat dn = kernel_dN(ctx, x, y);
    diag.thm9_M = std::max(diag.thm9_M, vmax(dn) * std::pow(s, n));
    Mat g = dn - kernel_K(ctx, x, x - y);
    diag.g_constant = std::max(diag.g_constant, vmax(g) * std::pow(s, n - 1));
  }

  // spherical mean and homogeneity at a handful of interior points
  long probes = 0;
  while (probes < 5) {
    Vec x = halton_in_box(idx, lo, hi, n);
    ++idx;
    if (!contains(ctx.domain, x)) continue;
    ++probes;
    diag.sphere_mean_residual =
        std::max(diag.sphere_mean_residual, vmax(sphere_mean_k(ctx, x, angular_cfg)));
    Vec z = halton_direction(idx, n);
    for (double t : {0.1, 7.0}) {
      Mat d = kernel_k(ctx, x, t * z) - kernel_k(ctx, x, z);
      diag.homogeneity_residual = std::max(diag.homogeneity_residual, vmax(d));
    }
  }
  return diag;
}

}  // namespace bgk
