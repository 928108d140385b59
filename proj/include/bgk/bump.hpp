#pragma once

#include "bgk/geometry.hpp"
#include "bgk/quadrature.hpp"
#include "bgk/vec.hpp"

namespace bgk {

struct PsiSample {
  double value = 0.0;
  Vec grad;
};

// The canonical mollifier: psi(x) = C exp(-1/(1-s^2)), s = |x-x0|/R, supported
// on the closed ball B(x0,R), normalized so its integral over R^n is 1. The
// normalization constant is computed once at construction by adaptive
// quadrature and cached.
class Mollifier {
 public:
  Mollifier(const Ball& support, int dim);

  double operator()(const Vec& x) const;
  Vec grad(const Vec& x) const;
  PsiSample sample(const Vec& x) const;  // value and gradient in one pass

  const Ball& support() const { return support_; }
  int dim() const { return dim_; }
  double normalization() const { return norm_const_; }
  double max_value() const { return max_value_; }
  double max_grad() const { return max_grad_; }

 private:
  Ball support_;
  int dim_;
  double norm_const_;
  double max_value_;
  double max_grad_;
};

// Radial cutoff: eta == 0 on [0,1], eta == 1 on [2,inf), smooth, monotone,
// |eta'| <= 2. Built by mollifying the slope-2 ramp that rises on
// [1.25, 1.75] with a bump of radius 0.25; mollification preserves the
// ramp's Lipschitz constant.
double eta_eval(double t);
double eta_deriv(double t);

// smooth step: 0 for s <= 0, 1 for s >= 1 (eta shifted to [0,1])
double smooth_step(double s);

}  // namespace bgk
