#pragma once

#include <cstdint>

#include "bgk/bump.hpp"
#include "bgk/geometry.hpp"
#include "bgk/quadrature.hpp"
#include "bgk/vec.hpp"

namespace bgk {

// Everything needed to evaluate the kernel N(x,y) and its derivative split:
// the mollifier psi, the domain, and the 1D quadrature config for the ray
// integrals. Ray integrals are truncated exactly by the support of psi
// (|y - x0| + R is an upper bound; the actual window is the ray/ball
// intersection, which is tighter and exact).
struct KernelContext {
  Mollifier psi;
  StarDomain domain;
  QuadConfig quad;  // ray-integral config

  // test hook: drops the grad-psi term from the closed-form derivative
  // kernels (dN and K); used by the mutation-sensitivity checks
  bool corrupt_drop_grad = false;

  KernelContext(Mollifier m, StarDomain d, QuadConfig q)
      : psi(std::move(m)), domain(std::move(d)), quad(q) {}

  int dim() const { return domain.dim; }
  double xi_max(const Vec& y) const {
    return (y - psi.support().center).norm() + psi.support().radius;
  }
};

QuadConfig default_ray_config();

// inner integral of the Bogovskii formula:
//   int_{|x-y|}^{xi_max} psi(y + xi (x-y)/|x-y|) xi^{n-1} dxi
double ray_integral(const KernelContext& ctx, const Vec& x, const Vec& y);

// N(x,y) = (x-y)/|x-y|^n * ray_integral
Vec kernel_N(const KernelContext& ctx, const Vec& x, const Vec& y);

// the three change-of-variable routes; used for the equivalence checks
Vec kernel_N_alpha(const KernelContext& ctx, const Vec& x, const Vec& y);
Vec kernel_N_r(const KernelContext& ctx, const Vec& x, const Vec& y);
Vec kernel_N_z(const KernelContext& ctx, const Vec& x, const Vec& z);

// closed-form derivative matrix dN(i,j) = d/dx_j N_i(x,y)
Mat kernel_dN(const KernelContext& ctx, const Vec& x, const Vec& y);

// Calderon-Zygmund part: K(x,z) and its degree-0 symbol k(x,z) = |z|^n K(x,z)
Mat kernel_K(const KernelContext& ctx, const Vec& x, const Vec& z);
Mat kernel_k(const KernelContext& ctx, const Vec& x, const Vec& z);

// weakly singular remainder G = dN - K(x, x-y)
Mat kernel_G(const KernelContext& ctx, const Vec& x, const Vec& y);

// M(i,j) = (x_i - y_i) int_1^inf (d_j psi)(y + a(x-y)) a^{n-1} da
// (the Lemma-8 right-hand side; also the Bogovskii integrand with d_j psi in
// place of psi, used by the derivative representation)
Mat kernel_N_gradpsi(const KernelContext& ctx, const Vec& x, const Vec& y);

// spherical mean of k(x, .) over unit directions; zero for the true kernel
Mat sphere_mean_k(const KernelContext& ctx, const Vec& x, const QuadConfig& angular_cfg);

struct KernelDiagnostics {
  double lemma4_constant = 0.0;      // sup |N| |x-y|^{n-1}
  double thm9_M = 0.0;               // sup |dN| |x-y|^n
  double g_constant = 0.0;           // sup |G| |x-y|^{n-1}
  double sphere_mean_residual = 0.0; // max |entry| of the spherical mean
  double homogeneity_residual = 0.0; // max |k(x,tz) - k(x,z)|
};

KernelDiagnostics measure_diagnostics(const KernelContext& ctx, long n_pairs,
                                      const QuadConfig& angular_cfg, std::uint64_t seed = 1);

}  // namespace bgk
