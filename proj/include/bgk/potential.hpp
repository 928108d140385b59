#pragma once

#include <string>
#include <vector>

#include "bgk/kernel.hpp"

namespace bgk {

struct ScalarField {
  std::function<double(const Vec&)> eval;
  std::string label;
  bool declared_zero_mean = false;
};

struct EpsilonSchedule {
  std::vector<double> values;

  EpsilonSchedule() = default;
  explicit EpsilonSchedule(std::vector<double> v);
  static EpsilonSchedule standard();  // 1e-1, 3e-2, 1e-2, 3e-3, 1e-3
};

struct GateError : std::runtime_error {
  Vec witness_y, witness_z;
  GateError(const std::string& what, const Vec& y, const Vec& z)
      : std::runtime_error(what), witness_y(y), witness_z(z) {}
};

// The Bogovskii potential of F on a star-shaped domain. Evaluates v, the
// regularization v^eps, div v^eps, and the three-term derivative
// representation. The solver may carry an affine normalization
// x = origin + scale * z (the ball-rescaling reduction); all public
// evaluations take and return world coordinates.
class PotentialField {
 public:
  // direct construction: mollifier on mollifier_ball, no normalization
  PotentialField(ScalarField F, StarDomain domain, Ball mollifier_ball, QuadConfig quad,
                 double br_factor = 1.25, bool corrupt_kernel = false);

  // rescales to the unit ball at the origin, solves there, and maps back;
  // refuses to run when the sampled star-shape gate fails
  static PotentialField scaled_solve(const ScalarField& F, const StarDomain& domain,
                                     const Ball& B, const QuadConfig& quad,
                                     double br_factor = 1.25, bool corrupt_kernel = false,
                                     long gate_samples = 2000);

  Vec v(const Vec& x) const;
  QuadResult<Vec> v_detail(const Vec& x) const;

  // same integral without the outside short-circuit (support checks)
  QuadResult<Vec> v_unshortcut(const Vec& x) const;

  Vec v_eps(const Vec& x, double eps) const;
  QuadResult<Vec> v_eps_detail(const Vec& x, double eps) const;

  // two-term closed form for div v^eps; requires eps < dist(x, boundary)/2
  double div_v_eps(const Vec& x, double eps) const;

  Mat grad(const Vec& x) const;            // the derivative representation
  QuadResult<Mat> grad_detail(const Vec& x) const;
  double divergence(const Vec& x) const;   // trace of grad

  // div v(x) converges to F(x) - div_offset(x); the offset is the mollifier
  // term psi(z) * integral of the (transformed) datum, zero for zero-mean F
  double div_offset(const Vec& x) const;
  double mean_F_local() const { return mean_F_; }

  bool inside(const Vec& x) const;
  int dim() const { return local_domain_.dim; }
  const KernelContext& ctx() const { return ctx_; }
  const StarDomain& local_domain() const { return local_domain_; }
  const Ball& big_ball() const { return big_ball_; }
  Vec to_local(const Vec& x) const { return (x - origin_) * (1.0 / scale_); }
  Vec to_world(const Vec& z) const { return origin_ + scale_ * z; }
  double scale() const { return scale_; }
  const QuadConfig& volume_config() const { return cfg_v_; }

 private:
  ScalarField field_;          // in local coordinates
  StarDomain local_domain_;
  KernelContext ctx_;
  Ball big_ball_;              // local coordinates
  QuadConfig cfg_v_;           // volume config, ungraded (integrands smooth along rays)
  QuadConfig cfg_sing_;        // graded config for the Dini-tempered term
  Vec origin_;
  double scale_ = 1.0;
  double mean_F_ = 0.0;        // integral of the local datum over the local domain

  QuadResult<Vec> v_local(const Vec& z) const;
};

}  // namespace bgk
