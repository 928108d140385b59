#include "bgk/potential.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bgk {

EpsilonSchedule::EpsilonSchedule(std::vector<double> v) : values(std::move(v)) {
  if (values.empty()) throw std::invalid_argument("epsilon schedule must be nonempty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= 0.0) throw std::invalid_argument("epsilon values must be positive");
    if (i > 0 && values[i] >= values[i - 1])
      throw std::invalid_argument("epsilon schedule must be strictly decreasing");
  }
}

EpsilonSchedule EpsilonSchedule::standard() {
  return EpsilonSchedule({1e-1, 3e-2, 1e-2, 3e-3, 1e-3});
}

PotentialField::PotentialField(ScalarField F, StarDomain domain, Ball mollifier_ball,
                               QuadConfig quad, double br_factor, bool corrupt_kernel)
    : field_(std::move(F)),
      local_domain_(std::move(domain)),
      ctx_(Mollifier(mollifier_ball, local_domain_.dim), local_domain_, default_ray_config()),
      cfg_v_(quad),
      cfg_sing_(quad) {
  quad.validate();
  ctx_.corrupt_drop_grad = corrupt_kernel;

  // B_R: centered at the mollifier ball center, comfortably containing the domain
  double reach = (local_domain_.bound_center - mollifier_ball.center).norm() +
                 local_domain_.bound_radius;
  big_ball_.center = mollifier_ball.center;
  big_ball_.radius = br_factor * reach + 1.0;

  // Along each ray from the singular point the kernel integrand is smooth, so
  // the plain adaptive radial rule suffices for v; the graded cascade is kept
  // for the [F(y)-F(x)] dN term, whose radial profile behaves like omega(rho)/rho.
  cfg_v_.radial_grading = 1.0;

  mean_F_ = integrate_polar_t<double>([this](const Vec& y) { return field_.eval(y); },
                                      local_domain_.center_ball.center, local_domain_, cfg_v_)
                .value;
}

PotentialField PotentialField::scaled_solve(const ScalarField& F, const StarDomain& domain,
                                            const Ball& B, const QuadConfig& quad,
                                            double br_factor, bool corrupt_kernel,
                                            long gate_samples) {
  StarReport gate = verify_star_shaped(domain, B, gate_samples);
  if (!gate.ok) {
    std::ostringstream os;
    os << "star-shape gate failed: segment from (" << gate.witness_y[0] << ", "
       << gate.witness_y[1] << ") to (" << gate.witness_z[0] << ", " << gate.witness_z[1]
       << ") leaves the domain";
    throw GateError(os.str(), gate.witness_y, gate.witness_z);
  }

  const Vec x0 = B.center;
  const double R = B.radius;
  StarDomain local = normalize_domain(domain, x0, R);
  auto base = F.eval;
  ScalarField local_F{[base, x0, R](const Vec& z) { return base(x0 + R * z); },
                      F.label, F.declared_zero_mean};
  Ball unit{Vec(), 1.0};
  PotentialField out(std::move(local_F), std::move(local), unit, quad, br_factor,
                     corrupt_kernel);
  out.origin_ = x0;
  out.scale_ = R;
  return out;
}

bool PotentialField::inside(const Vec& x) const {
  return contains(local_domain_, to_local(x));
}

QuadResult<Vec> PotentialField::v_local(const Vec& z) const {
  auto f = [&](const Vec& y) { return kernel_N(ctx_, z, y) * field_.eval(y); };
  return integrate_polar_t<Vec>(f, z, local_domain_, cfg_v_);
}

Vec PotentialField::v(const Vec& x) const { return v_detail(x).value; }

QuadResult<Vec> PotentialField::v_detail(const Vec& x) const {
  Vec z = to_local(x);
  if (!contains(local_domain_, z)) return {};  // exact zero outside (Lemma-6 short-circuit)
  QuadResult<Vec> r = v_local(z);
  r.value *= scale_;
  r.error *= scale_;
  return r;
}

QuadResult<Vec> PotentialField::v_unshortcut(const Vec& x) const {
  Vec z = to_local(x);
  QuadResult<Vec> r;
  if (contains(local_domain_, z)) {
    r = v_local(z);
  } else {
    // no singularity inside the domain; integrate from the center ball center
    auto f = [&](const Vec& y) { return kernel_N(ctx_, z, y) * field_.eval(y); };
    r = integrate_polar_t<Vec>(f, local_domain_.center_ball.center, local_domain_, cfg_v_);
  }
  r.value *= scale_;
  r.error *= scale_;
  return r;
}

Vec PotentialField::v_eps(const Vec& x, double eps) const {
  return v_eps_detail(x, eps).value;
}

QuadResult<Vec> PotentialField::v_eps_detail(const Vec& x, double eps) const {
  if (eps <= 0.0) throw std::invalid_argument("v_eps: eps must be positive");
  const double el = eps / scale_;
  Vec z = to_local(x);
  if (!contains(local_domain_, z)) return {};  // integrand is N*eta = 0 pointwise
  auto f = [&](const Vec& y) {
    double t = (y - z).norm() / el;
    if (t <= 1.0) return Vec();
    double w = (t >= 2.0) ? 1.0 : eta_eval(t);
    return kernel_N(ctx_, z, y) * (w * field_.eval(y));
  };
  RadialBreaksFn breaks = [el](const Vec&, std::vector<double>& pts) {
    pts.push_back(el);
    pts.push_back(2.0 * el);
  };
  QuadResult<Vec> r = integrate_polar_t<Vec>(f, z, local_domain_, cfg_v_, &breaks);
  r.value *= scale_;
  r.error *= scale_;
  return r;
}

double PotentialField::div_v_eps(const Vec& x, double eps) const {
  if (eps <= 0.0) throw std::invalid_argument("div_v_eps: eps must be positive");
  const double el = eps / scale_;
  Vec z = to_local(x);
  if (!contains(local_domain_, z))
    throw std::domain_error("div_v_eps: point must lie inside the domain");
  double dist = boundary_distance(local_domain_, z);
  if (!(el < 0.5 * dist))
    throw std::domain_error("div_v_eps: cutoff reaches boundary (eps >= dist/2)");

  // -psi(x) * int_Omega F(y) eta(|x-y|/eps) dy
  auto f1 = [&](const Vec& y) {
    double t = (y - z).norm() / el;
    if (t <= 1.0) return 0.0;
    double w = (t >= 2.0) ? 1.0 : eta_eval(t);
    return field_.eval(y) * w;
  };
  RadialBreaksFn breaks = [el](const Vec&, std::vector<double>& pts) {
    pts.push_back(el);
    pts.push_back(2.0 * el);
  };
  double term1 = -ctx_.psi(z) *
                 integrate_polar_t<double>(f1, z, local_domain_, cfg_v_, &breaks).value;

  // int_{eps<|x-y|<2eps} F(y) |x-y|^{1-n} eta'(|x-y|/eps) / eps * ray dy;
  // in polar form around x the Jacobian cancels |x-y|^{1-n} exactly
  auto exitf = [&](const Vec& u) {
    return std::min(2.0 * el, ray_exit(local_domain_, z, u));
  };
  QuadConfig cfg = cfg_v_;
  auto fc = [&](double rho, const Vec& u) {
    double t = rho / el;
    if (t <= 1.0 || t >= 2.0) return 0.0;
    Vec y = z + rho * u;
    return field_.eval(y) * eta_deriv(t) / el * ray_integral(ctx_, z, y);
  };
  const AngularRule& rule = angular_rule(dim(), cfg);
  std::vector<double> acc;
  acc.reserve(rule.nodes.size());
  std::vector<double> seed{el, 1.5 * el};
  for (const auto& nd : rule.nodes) {
    double hi = exitf(nd.u);
    if (hi <= el) {
      acc.push_back(0.0);
      continue;
    }
    auto g = [&](double rho) { return fc(rho, nd.u); };
    acc.push_back(nd.w_full * integrate_1d_t<double>(g, el, hi, cfg, &seed).value);
  }
  double term2 = detail::pairwise_sum(acc);
  return term1 + term2;
}

double PotentialField::div_offset(const Vec& x) const {
  return ctx_.psi(to_local(x)) * mean_F_;
}

Mat PotentialField::grad(const Vec& x) const { return grad_detail(x).value; }

QuadResult<Mat> PotentialField::grad_detail(const Vec& x) const {
  Vec z = to_local(x);
  if (!contains(local_domain_, z))
    throw std::domain_error("grad: point must lie inside the domain");
  const double Fx = field_.eval(z);

  // ball window of B_R as seen from z (z is strictly inside)
  auto exit_br = [&](const Vec& u) {
    Vec oc = z - big_ball_.center;
    double b = u.dot(oc);
    double c = oc.norm2() - big_ball_.radius * big_ball_.radius;
    return -b + std::sqrt(std::max(0.0, b * b - c));
  };

  // term 1: int_{B_R} [F0(y) - F(x)] dN(x,y) dy, F0 the zero extension of F.
  // The datum jumps at the domain crossing, so each ray is split there.
  RadialBreaksFn breaks = [&](const Vec& u, std::vector<double>& pts) {
    pts.push_back(ray_exit(local_domain_, z, u));
  };
  auto f1 = [&](const Vec& y) {
    double Fy = contains(local_domain_, y) ? field_.eval(y) : 0.0;
    return kernel_dN(ctx_, z, y) * (Fy - Fx);
  };
  QuadResult<Mat> t1 =
      integrate_polar_exit_t<Mat>(f1, z, dim(), exit_br, cfg_sing_, &breaks);

  // term 2: F(x) * Bogovskii integrand over B_R with grad psi in place of psi
  auto f2 = [&](const Vec& y) { return kernel_N_gradpsi(ctx_, z, y); };
  QuadResult<Mat> t2 = integrate_polar_exit_t<Mat>(f2, z, dim(), exit_br, cfg_v_);

  // term 3: -F(x) * surface integral of N_i nu_j over the boundary sphere
  const double Rr = big_ball_.radius;
  const double surf_jac = (dim() == 2) ? Rr : Rr * Rr;
  auto f3 = [&](const Vec& u) {
    Vec y = big_ball_.center + Rr * u;
    return outer(kernel_N(ctx_, z, y), u) * surf_jac;
  };
  QuadResult<Mat> t3 = integrate_sphere_t<Mat>(f3, dim(), cfg_v_);

  QuadResult<Mat> out;
  out.value = t1.value + t2.value * Fx - t3.value * Fx;
  out.error = t1.error + (t2.error + t3.error) * std::abs(Fx);
  out.converged = t1.converged && t2.converged && t3.converged;
  out.evals = t1.evals + t2.evals + t3.evals;
  return out;
}

double PotentialField::divergence(const Vec& x) const { return grad(x).trace(dim()); }

}  // namespace bgk
