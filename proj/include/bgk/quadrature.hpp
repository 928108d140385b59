#pragma once

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bgk/geometry.hpp"
#include "bgk/vec.hpp"

namespace bgk {

struct QuadConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_subdivisions = 4000;

  // angular orders
  int theta_order = 64;  // n=2: trapezoid nodes on the circle (even)
  int mu_order = 17;     // n=3: Clenshaw-Curtis nodes in cos(theta), 2^k+1
  int phi_order = 32;    // n=3: trapezoid nodes in the azimuth (even)

  // radial rule: geometric grading toward rho = 0 for the segment touching 0
  double radial_grading = 1.15;   // ratio >= 1 (1 disables grading)
  double radial_floor = 1e-6;     // relative cutoff of the graded cascade
  int max_graded_panels = 160;

  int complement_grid = 192;  // tensor fallback for re-entrant radial shapes

  void validate() const {
    if (rel_tol <= 0 || abs_tol <= 0) throw std::invalid_argument("quad tolerances must be positive");
    if (max_subdivisions < 1) throw std::invalid_argument("max_subdivisions >= 1");
    if (radial_grading < 1.0) throw std::invalid_argument("radial_grading >= 1");
    if (theta_order < 4 || theta_order % 2) throw std::invalid_argument("theta_order must be even, >= 4");
    if (phi_order < 4 || phi_order % 2) throw std::invalid_argument("phi_order must be even, >= 4");
    int n = mu_order - 1;
    if (n < 4 || (n & (n - 1))) throw std::invalid_argument("mu_order must be 2^k+1, k >= 2");
  }
};

template <class V>
struct QuadResult {
  V value{};
  double error = 0.0;
  bool converged = true;
  long evals = 0;
};

struct QuadratureError : std::runtime_error {
  double location;
  explicit QuadratureError(const std::string& what, double loc)
      : std::runtime_error(what), location(loc) {}
};

namespace detail {

// 7-15 Gauss-Kronrod nodes and weights (positive half, descending).
inline constexpr double gk_x[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr double gk_wk[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
inline constexpr double gk_wg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

template <class V, class F>
void gk15_panel(F&& f, double a, double b, V& value, double& err, double& resabs,
                long& evals) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  V fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * gk_x[i]);
    fv[14 - i] = f(c + h * gk_x[i]);
  }
  fv[7] = f(c);
  evals += 15;
  for (int i = 0; i < 15; ++i)
    if (!vfinite(fv[i])) {
      double xi = (i < 7) ? c - h * gk_x[i] : (i == 7 ? c : c + h * gk_x[14 - i]);
      throw QuadratureError("non-finite integrand value at x = " + std::to_string(xi), xi);
    }

  V resk = fv[7] * gk_wk[7];
  V resg = fv[7] * gk_wg[3];
  double rabs = vmax(vabs(fv[7])) * gk_wk[7];
  for (int i = 0; i < 7; ++i) {
    V s = fv[i] + fv[14 - i];
    resk += s * gk_wk[i];
    rabs += (vmax(vabs(fv[i])) + vmax(vabs(fv[14 - i]))) * gk_wk[i];
  }
  for (int j = 0; j < 3; ++j) resg += (fv[2 * j + 1] + fv[13 - 2 * j]) * gk_wg[j];

  V mean = resk * 0.5;
  double resasc = vmax(vabs(fv[7] - mean)) * gk_wk[7];
  for (int i = 0; i < 7; ++i)
    resasc += (vmax(vabs(fv[i] - mean)) + vmax(vabs(fv[14 - i] - mean))) * gk_wk[i];

  value = resk * h;
  resabs = rabs * h;
  resasc *= h;
  double e = vmax(vabs(resk - resg)) * h;
  if (resasc != 0.0 && e != 0.0)
    e = resasc * std::min(1.0, std::pow(200.0 * e / resasc, 1.5));
  if (resabs > DBL_MIN / (50.0 * DBL_EPSILON))
    e = std::max(e, 50.0 * DBL_EPSILON * resabs);
  err = e;
}

template <class V>
V pairwise_sum(std::vector<V>& xs) {
  if (xs.empty()) return V{};
  for (std::size_t step = 1; step < xs.size(); step *= 2)
    for (std::size_t i = 0; i + step < xs.size(); i += 2 * step) xs[i] += xs[i + step];
  return xs[0];
}

}  // namespace detail

// Adaptive Gauss-Kronrod over [a,b]; worst-interval-first bisection. An
// optional initial partition seeds the interval list (interior points of
// (a,b), ascending). Deterministic for a given config.
template <class V, class F>
QuadResult<V> integrate_1d_t(F&& f, double a, double b, const QuadConfig& cfg,
                             const std::vector<double>* initial_breaks = nullptr) {
  QuadResult<V> out;
  if (a == b) return out;
  if (!(a < b)) throw std::invalid_argument("integrate: need a <= b");

  struct Seg {
    double a, b, err;
    V val;
  };
  std::vector<Seg> segs;
  {
    std::vector<double> pts;
    pts.push_back(a);
    if (initial_breaks)
      for (double p : *initial_breaks)
        if (p > a && p < b && p > pts.back()) pts.push_back(p);
    pts.push_back(b);
    double resabs;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      Seg s;
      s.a = pts[i];
      s.b = pts[i + 1];
      detail::gk15_panel(f, s.a, s.b, s.val, s.err, resabs, out.evals);
      segs.push_back(s);
    }
  }

  auto total = [&segs]() {
    std::vector<V> vals;
    vals.reserve(segs.size());
    for (auto& s : segs) vals.push_back(s.val);
    return detail::pairwise_sum(vals);
  };

  double resabs;
  while (true) {
    double errsum = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      errsum += segs[i].err;
      if (segs[i].err > segs[worst].err) worst = i;
    }
    V cur = total();
    double tol = std::max(cfg.abs_tol, cfg.rel_tol * vmax(vabs(cur)));
    if (errsum <= tol) {
      out.value = cur;
      out.error = errsum;
      return out;
    }
    if (static_cast<int>(segs.size()) >= cfg.max_subdivisions) {
      out.value = cur;
      out.error = errsum;
      out.converged = false;
      return out;
    }
    Seg s = segs[worst];
    double mid = 0.5 * (s.a + s.b);
    if (!(mid > s.a && mid < s.b)) {  // interval at roundoff limit
      out.value = cur;
      out.error = errsum;
      out.converged = false;
      return out;
    }
    Seg left{s.a, mid, 0.0, V{}}, right{mid, s.b, 0.0, V{}};
    detail::gk15_panel(f, left.a, left.b, left.val, left.err, resabs, out.evals);
    detail::gk15_panel(f, right.a, right.b, right.val, right.err, resabs, out.evals);
    segs[worst] = left;
    // keep segments ordered by left endpoint so the final pairwise sum is canonical
    segs.insert(segs.begin() + static_cast<long>(worst) + 1, right);
  }
}

QuadResult<double> integrate_1d(const std::function<double(double)>& f, double a, double b,
                                const QuadConfig& cfg);

// ---- angular rules -------------------------------------------------------

struct AngularNode {
  Vec u;
  double w_full = 0.0;
  double w_half = 0.0;  // weight in the embedded coarse rule (0 if absent)
};

struct AngularRule {
  std::vector<AngularNode> nodes;
};

// n=2: trapezoid on the circle; n=3: Clenshaw-Curtis in cos(theta) x trapezoid
// in phi. Both carry an embedded half-order rule for the angular error estimate.
const AngularRule& angular_rule(int dim, const QuadConfig& cfg);

std::vector<double> clenshaw_curtis_weights(int intervals);

// ---- sphere integration --------------------------------------------------

template <class V, class F>
QuadResult<V> integrate_sphere_t(F&& f, int dim, const QuadConfig& cfg) {
  const AngularRule& rule = angular_rule(dim, cfg);
  QuadResult<V> out;
  std::vector<V> fulls, halves;
  fulls.reserve(rule.nodes.size());
  for (const auto& nd : rule.nodes) {
    V fv = f(nd.u);
    ++out.evals;
    if (!vfinite(fv)) throw QuadratureError("non-finite sphere integrand", 0.0);
    fulls.push_back(fv * nd.w_full);
    if (nd.w_half != 0.0) halves.push_back(fv * nd.w_half);
  }
  V full = detail::pairwise_sum(fulls);
  V half = detail::pairwise_sum(halves);
  out.value = full;
  out.error = vmax(vabs(full - half));
  return out;
}

QuadResult<double> integrate_sphere(const std::function<double(const Vec&)>& f, int dim,
                                    const QuadConfig& cfg);

// ---- polar (desingularized) volume integration ----------------------------

// ascending radial partition of [0, hi]: a geometric cascade toward 0 per
// cfg.radial_grading, cut off at hi*cfg.radial_floor
std::vector<double> graded_radial_partition(double hi, const QuadConfig& cfg);

using RadialBreaksFn = std::function<void(const Vec& u, std::vector<double>& breaks)>;

// Integrates f over the region {center + rho*u : 0 <= rho < exit(u)} in polar
// coordinates; the rho^{n-1} Jacobian is applied internally (it cancels
// |x-y|^{1-n} kernel singularities at `center`).
template <class V, class F, class ExitF>
QuadResult<V> integrate_polar_exit_t(F&& f, const Vec& center, int dim, ExitF&& exit_radius,
                                     const QuadConfig& cfg,
                                     const RadialBreaksFn* extra_breaks = nullptr) {
  const AngularRule& rule = angular_rule(dim, cfg);
  QuadResult<V> out;
  std::vector<V> fulls, halves;
  std::vector<double> errs;
  std::vector<double> breaks;
  for (const auto& nd : rule.nodes) {
    double rho_star = exit_radius(nd.u);
    V rv{};
    double re = 0.0;
    if (rho_star > 0.0) {
      breaks = graded_radial_partition(rho_star, cfg);
      if (extra_breaks) (*extra_breaks)(nd.u, breaks);
      std::sort(breaks.begin(), breaks.end());
      auto g = [&](double rho) {
        double jac = (dim == 2) ? rho : rho * rho;
        return f(center + rho * nd.u) * jac;
      };
      auto r = integrate_1d_t<V>(g, 0.0, rho_star, cfg, &breaks);
      rv = r.value;
      re = r.error;
      out.evals += r.evals;
      out.converged = out.converged && r.converged;
    }
    fulls.push_back(rv * nd.w_full);
    errs.push_back(re * nd.w_full);
    if (nd.w_half != 0.0) halves.push_back(rv * nd.w_half);
  }
  V full = detail::pairwise_sum(fulls);
  V half = detail::pairwise_sum(halves);
  out.value = full;
  double radial_err = 0.0;
  for (double e : errs) radial_err += e;
  out.error = vmax(vabs(full - half)) + radial_err;
  return out;
}

namespace detail {
// midpoint tensor integral of f * indicator over an axis box; m points/axis
template <class V, class F, class Ind>
QuadResult<V> indicator_tensor(F&& f, Ind&& ind, const Vec& lo, const Vec& hi, int dim, int m,
                               long* evals) {
  QuadResult<V> out;
  std::vector<V> acc;
  double cell = 1.0;
  for (int k = 0; k < dim; ++k) cell *= (hi[k] - lo[k]) / m;
  int mz = (dim == 3) ? m : 1;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int l = 0; l < mz; ++l) {
        Vec p(lo[0] + (i + 0.5) * (hi[0] - lo[0]) / m,
              lo[1] + (j + 0.5) * (hi[1] - lo[1]) / m,
              dim == 3 ? lo[2] + (l + 0.5) * (hi[2] - lo[2]) / m : 0.0);
        if (!ind(p)) continue;
        ++*evals;
        acc.push_back(f(p) * cell);
      }
  out.value = pairwise_sum(acc);
  return out;
}
}  // namespace detail

// Volume integral over a star domain, desingularized at `center` (which must
// lie inside). For re-entrant radial shapes a complementary indicator-weighted
// tensor pass covers the part of the domain behind the first ray exit.
template <class V, class F>
QuadResult<V> integrate_polar_t(F&& f, const Vec& center, const StarDomain& d,
                                const QuadConfig& cfg,
                                const RadialBreaksFn* extra_breaks = nullptr) {
  if (!contains(d, center))
    throw std::invalid_argument("integrate_polar: center must lie inside the domain");
  auto exitf = [&](const Vec& u) { return ray_exit(d, center, u); };
  QuadResult<V> out = integrate_polar_exit_t<V>(f, center, d.dim, exitf, cfg, extra_breaks);

  if (d.kind == ShapeKind::radial && reentrant_from(d, center)) {
    Vec lo, hi;
    bounding_box(d, lo, hi);
    auto ind = [&](const Vec& p) {
      if (!contains(d, p)) return false;
      Vec rel = p - center;
      double rho = rel.norm();
      if (rho == 0.0) return false;
      return rho > ray_exit(d, center, rel * (1.0 / rho));
    };
    auto full = detail::indicator_tensor<V>(f, ind, lo, hi, d.dim, cfg.complement_grid, &out.evals);
    auto halfres = detail::indicator_tensor<V>(f, ind, lo, hi, d.dim, cfg.complement_grid / 2, &out.evals);
    out.value += full.value;
    out.error += vmax(vabs(full.value - halfres.value));
  }
  return out;
}

QuadResult<double> integrate_polar(const std::function<double(const Vec&)>& f, const Vec& center,
                                   const StarDomain& d, const QuadConfig& cfg);

}  // namespace bgk
