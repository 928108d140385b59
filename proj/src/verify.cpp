#include "bgk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bgk/decomposition.hpp"
#include "bgk/rng.hpp"

namespace bgk {

namespace {

struct Sizes {
  long pairs;
  int probes;
  long grid;
};

Sizes sizes_for(CheckLevel level) {
  return level == CheckLevel::quick ? Sizes{100, 3, 200} : Sizes{10000, 9, 1000};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// quasi-random interior points of the local domain
std::vector<Vec> interior_points(const StarDomain& d, int count, std::uint64_t seed) {
  std::vector<Vec> pts;
  Vec lo, hi;
  bounding_box(d, lo, hi);
  std::uint64_t idx = seed * 2654435761ULL;
  while (static_cast<int>(pts.size()) < count) {
    Vec x = halton_in_box(idx, lo, hi, d.dim);
    ++idx;
    if (contains(d, x)) pts.push_back(x);
  }
  return pts;
}

std::vector<Vec> exterior_points(const StarDomain& d, int count, std::uint64_t seed) {
  std::vector<Vec> pts;
  Vec lo, hi;
  bounding_box(d, lo, hi);
  Vec c = 0.5 * (lo + hi);
  std::uint64_t idx = seed * 11400714819323198485ULL;
  while (static_cast<int>(pts.size()) < count) {
    Vec x = c + ((halton_in_box(idx, lo, hi, d.dim) - c) * 1.6);
    ++idx;
    if (!contains(d, x)) pts.push_back(x);
  }
  return pts;
}

// central difference of N in y_j
Vec fd_y_N(const KernelContext& ctx, const Vec& x, const Vec& y, int j, double h) {
  Vec yp = y, ym = y;
  yp[j] += h;
  ym[j] -= h;
  return (kernel_N(ctx, x, yp) - kernel_N(ctx, x, ym)) * (1.0 / (2.0 * h));
}

CheckReport check_outside_vanishing(const PotentialField& pf, const Sizes& sz,
                                    std::uint64_t seed) {
  CheckReport rep{"outside_vanishing", false, 0.0, 1e-8, 0, ""};
  int n_pts = (sz.pairs >= 10000) ? 200 : 50;
  auto pts = exterior_points(pf.local_domain(), n_pts, seed);
  for (const Vec& z : pts) {
    Vec x = pf.to_world(z);
    rep.measured = std::max(rep.measured, vmax(vabs(pf.v_unshortcut(x).value)));
  }
  rep.samples = n_pts;
  rep.passed = rep.measured <= rep.threshold;
  rep.notes = "full integral at exterior points, no short-circuit";
  return rep;
}

CheckReport check_kernel_bound(const PotentialField& pf, const Sizes& sz, std::uint64_t seed) {
  const KernelContext& ctx = pf.ctx();
  const int n = ctx.dim();
  const double diam = diameter(ctx.domain);
  CheckReport rep{"kernel_bound_lemma4", false, 0.0,
                  std::pow(1.0 + diam, n) * ctx.psi.max_value(), 0, ""};
  Vec lo, hi;
  bounding_box(ctx.domain, lo, hi);
  Vec wlo = lo, whi = hi;
  for (int k = 0; k < n; ++k) {
    double pad = 0.25 * (hi[k] - lo[k]);
    wlo[k] -= pad;
    whi[k] += pad;
  }
  std::uint64_t idx = seed * 40503;
  long done = 0;
  while (done < sz.pairs) {
    Vec y = halton_in_box(idx, lo, hi, n);
    ++idx;
    if (!contains(ctx.domain, y)) continue;
    Vec x = halton_in_box(idx, wlo, whi, n);
    ++idx;
    double s = (x - y).norm();
    if (s < 1e-9) continue;
    ++done;
    rep.measured = std::max(rep.measured, vmax(kernel_N(ctx, x, y)) * std::pow(s, n - 1));
  }
  rep.samples = sz.pairs;
  rep.passed = rep.measured <= rep.threshold;
  rep.notes = "sup |N| |x-y|^{n-1} vs (1+diam)^n max psi";
  return rep;
}

CheckReport check_variant_equivalence(const PotentialField& pf, const Sizes& sz,
                                      std::uint64_t seed) {
  const KernelContext& ctx = pf.ctx();
  CheckReport rep{"variant_equivalence", false, 0.0, 1e-8, 0, ""};
  long n_pairs = std::min<long>(sz.pairs, 1000);
  auto xs = interior_points(ctx.domain, static_cast<int>(n_pairs), seed + 5);
  auto ys = interior_points(ctx.domain, static_cast<int>(n_pairs), seed + 6);
  for (long i = 0; i < n_pairs; ++i) {
    const Vec &x = xs[i], &y = ys[i];
    if ((x - y).norm() < 1e-6) continue;
    Vec a = kernel_N(ctx, x, y);
    Vec b = kernel_N_alpha(ctx, x, y);
    Vec c = kernel_N_r(ctx, x, y);
    Vec d = kernel_N_z(ctx, x, x - y);
    double scale = std::max({vmax(a), vmax(b), vmax(c), vmax(d)});
    double dev = std::max({vmax(vabs(a - b)), vmax(vabs(a - c)), vmax(vabs(a - d))});
    if (scale > 0.0) rep.measured = std::max(rep.measured, dev / scale);
  }
  rep.samples = n_pairs;
  rep.passed = rep.measured <= rep.threshold;
  rep.notes = "xi-form vs alpha-, r- and z-substituted forms";
  return rep;
}

CheckReport check_lemma8(const PotentialField& pf, const Sizes& sz, std::uint64_t seed) {
  const KernelContext& ctx = pf.ctx();
  const int n = ctx.dim();
  const double diam = diameter(ctx.domain);
  CheckReport rep{"lemma8_identity", false, 0.0, 1e-4, 0, ""};
  long n_pairs = std::min<long>(sz.pairs, 100);
  auto xs = interior_points(ctx.domain, static_cast<int>(n_pairs), seed + 7);
  SplitMix64 rng(seed + 8);
  std::uint64_t idx = seed * 7207;
  long done = 0;
  while (done < n_pairs) {
    Vec x = xs[done % xs.size()];
    double rho = diam * (0.05 + 0.45 * rng.uniform());
    Vec y = x + rho * halton_direction(idx, n);
    ++idx;
    if (!contains(ctx.domain, y)) continue;
    ++done;
    double s = (x - y).norm();
    double h = 1e-5 * s;
    Mat lhs = kernel_dN(ctx, x, y);
    Mat rhs = kernel_N_gradpsi(ctx, x, y);
    for (int j = 0; j < n; ++j) {
      Vec fd = fd_y_N(ctx, x, y, j, h);
      for (int i = 0; i < n; ++i) {
        double want = rhs(i, j) - fd[i];
        double got = lhs(i, j);
        double scale = std::max({std::abs(want), std::abs(got), 1e-10});
        rep.measured = std::max(rep.measured, std::abs(got - want) / scale);
      }
    }
  }
  rep.samples = n_pairs;
  rep.passed = rep.measured <= rep.threshold;
  rep.notes = "dN vs grad-psi form minus FD y-derivative";
  return rep;
}

CheckReport check_lemma12(const PotentialField& pf, const Sizes& sz, std::uint64_t seed) {
  const KernelContext& ctx = pf.ctx();
  const int n = ctx.dim();
  const double diam = diameter(ctx.domain);
  const double eps = 0.05 * diam;
  CheckReport rep{"lemma12_identity", false, 0.0, 1e-4, 0, ""};
  long n_pairs = std::min<long>(sz.pairs, 100);
  auto xs = interior_points(ctx.domain, static_cast<int>(n_pairs), seed + 9);
  SplitMix64 rng(seed + 10);
  std::uint64_t idx = seed * 8963;
  long done = 0;
  while (done < n_pairs) {
    Vec x = xs[done % xs.size()];
    // mostly inside the active band of eta', some beyond
    double rho = eps * (1.05 + 1.4 * rng.uniform());
    Vec y = x + rho * halton_direction(idx, n);
    ++idx;
    if (!contains(ctx.domain, y)) continue;
    ++done;
    double s = (x - y).norm();
    double h = 1e-5 * s;
    double et = eta_eval(s / eps);
    double etd = eta_deriv(s / eps);
    Mat dn = kernel_dN(ctx, x, y);
    Vec Nv = kernel_N(ctx, x, y);
    Mat rhs_g = kernel_N_gradpsi(ctx, x, y);
    for (int j = 0; j < n; ++j) {
      // FD of N_i eta in y_j
      Vec yp = y, ym = y;
      yp[j] += h;
      ym[j] -= h;
      Vec fp = kernel_N(ctx, x, yp) * eta_eval((x - yp).norm() / eps);
      Vec fm = kernel_N(ctx, x, ym) * eta_eval((x - ym).norm() / eps);
      Vec fd = (fp - fm) * (1.0 / (2.0 * h));
      for (int i = 0; i < n; ++i) {
        double lhs = dn(i, j) * et + Nv[i] * etd * (x[j] - y[j]) / (s * eps);
        double want = -fd[i] + et * rhs_g(i, j);
        double scale = std::max({std::abs(want), std::abs(lhs), 1e-10});
        rep.measured = std::max(rep.measured, std::abs(lhs - want) / scale);
      }
    }
  }
  rep.samples = n_pairs;
  rep.passed = rep.measured <= rep.threshold;
  rep.notes = "cutoff derivative identity at eps = 0.05 diam";
  return rep;
}

CheckReport check_homogeneity(const PotentialField& pf, const Sizes& sz, std::uint64_t seed) {
  const KernelContext& ctx = pf.ctx();
  CheckReport rep{"thm9_homogeneity", false, 0.0, 1e-8, 0, ""};
  auto xs = interior_points(ctx.domain, sz.probes + 2, seed + 11);
  std::uint64_t idx = seed * 6151;
  for (const Vec& x : xs) {
    Vec z = halton_direction(idx, ctx.dim());
    ++idx;
    Mat base = kernel_k(ctx, x, z);
    for (double t : {0.1, 1.0, 7.0}) {
      Mat other = kernel_k(ctx, x, t * z);
      rep.measured = std::max(rep.measured, vmax(other - base));
    }
    ++rep.samples;
  }
  rep.passed = rep.measured <= rep.threshold;
  rep.notes = "k(x,tz) = k(x,z) for t in {0.1, 1, 7}";
  return rep;
}

CheckReport check_bounded_k(const PotentialField& pf, const Sizes& sz, std::uint64_t seed) {
  const KernelContext& ctx = pf.ctx();
  const int n = ctx.dim();
  const double diam = diameter(ctx.domain);
  CheckReport rep{"thm9_bounded_k", false, 0.0,
                  ctx.psi.max_value() * std::pow(diam, n) +
                      ctx.psi.max_grad() * std::pow(diam, n + 1),
                  0, ""};
  auto xs = interior_points(ctx.domain, 16, seed + 12);
  std::uint64_t idx = seed * 3571;
  for (const Vec& x : xs)
    for (int k = 0; k < 16; ++k) {
      Vec z = halton_direction(idx, n);
      ++idx;
      rep.measured = std::max(rep.measured, vmax(kernel_k(ctx, x, z)));
      ++rep.samples;
    }
  rep.passed = rep.measured <= rep.threshold;
  rep.notes = "sup |k| on Omega x S^{n-1} vs the psi/grad-psi bound";
  return rep;
}

CheckReport check_sphere_mean(const PotentialField& pf, const Sizes& sz, std::uint64_t seed) {
  const KernelContext& ctx = pf.ctx();
  CheckReport rep{"thm9_sphere_mean", false, 0.0, 1e-6, 0, ""};
  auto xs = interior_points(ctx.domain, 5, seed + 13);
  for (const Vec& x : xs) {
    rep.measured =
        std::max(rep.measured, vmax(sphere_mean_k(ctx, x, pf.volume_config())));
    ++rep.samples;
  }
  rep.passed = rep.measured <= rep.threshold;
  rep.notes = "max |entry| of int_{S^{n-1}} k(x,u) du over 5 interior x";
  return rep;
}

// decade-wise maxima of w(s) = |T(x,y)| s^p over |x-y| in [1e-4, 1] * diam;
// passes when the maxima do not grow by more than 2x per decade toward 0
CheckReport decade_trend(const char* name, const PotentialField& pf, int power_is_n,
                         const Sizes& sz, std::uint64_t seed) {
  const KernelContext& ctx = pf.ctx();
  const int n = ctx.dim();
  const double diam = diameter(ctx.domain);
  CheckReport rep{name, false, 0.0, 2.0, 0, ""};
  const int decades = 4;
  std::vector<double> dmax(decades, 0.0);
  auto xs = interior_points(ctx.domain, 64, seed + 14);
  SplitMix64 rng(seed + 15);
  std::uint64_t idx = seed * 9377;
  long per_decade = std::max<long>(sz.pairs / decades, 25);
  for (int dec = 0; dec < decades; ++dec) {
    double lo = diam * std::pow(10.0, -4 + dec);
    double hi = lo * 10.0;
    long done = 0;
    while (done < per_decade) {
      Vec x = xs[static_cast<std::size_t>(rng.next() % xs.size())];
      double rho = lo * std::pow(hi / lo, rng.uniform());
      Vec y = x + rho * halton_direction(idx, n);
      ++idx;
      ++done;
      double s = (x - y).norm();
      double w;
      if (power_is_n) {
        w = vmax(kernel_dN(ctx, x, y)) * std::pow(s, n);
      } else {
        Mat g = kernel_G(ctx, x, y);
        w = vmax(g) * std::pow(s, n - 1);
      }
      dmax[dec] = std::max(dmax[dec], w);
      ++rep.samples;
    }
  }
  for (int dec = 0; dec + 1 < decades; ++dec)
    if (dmax[dec + 1] > 0.0)
      rep.measured = std::max(rep.measured, dmax[dec] / dmax[dec + 1]);
  rep.passed = rep.measured <= rep.threshold;
  std::ostringstream os;
  os << "decade maxima (small to large |x-y|):";
  for (double m : dmax) os << " " << fmt(m);
  rep.notes = os.str();
  return rep;
}

CheckReport check_divergence(const PotentialField& pf, const ScalarField& F_world,
                             const Sizes& sz, std::uint64_t seed) {
  CheckReport rep{"divergence_residual", false, 0.0, 1e-2, 0, ""};
  auto zs = interior_points(pf.local_domain(), sz.probes, seed + 16);
  double scale = 0.0, worst = 0.0;
  for (const Vec& z : zs) {
    Vec x = pf.to_world(z);
    // skip points hugging the boundary; the derivative representation is an
    // interior object
    if (boundary_distance(pf.local_domain(), z) < 0.05 * diameter(pf.local_domain()))
      continue;
    double fx = F_world.eval(x);
    double got = pf.divergence(x) + pf.div_offset(x);
    worst = std::max(worst, std::abs(got - fx));
    scale = std::max(scale, std::abs(fx));
    ++rep.samples;
  }
  rep.measured = worst / std::max(scale, 1e-12);
  rep.passed = rep.measured <= rep.threshold;
  rep.notes = "trace(grad v) + psi-term vs F at interior probes";
  return rep;
}

CheckReport check_boundary_continuity(const PotentialField& pf, const Sizes& sz,
                                      std::uint64_t seed) {
  CheckReport rep{"boundary_continuity", false, 0.0, 0.35, 0, ""};
  const StarDomain& d = pf.local_domain();
  const Vec c = d.center_ball.center;
  const double fracs[5] = {0.2, 0.1, 0.05, 0.02, 0.01};
  double vscale = 0.0, final_worst = 0.0;
  bool monotone = true;
  std::uint64_t idx = seed * 523;
  for (int line = 0; line < 20; ++line) {
    Vec u = halton_direction(idx, d.dim);
    ++idx;
    double reach = ray_exit(d, c, u);
    double prev = 1e300;
    for (double t : fracs) {
      Vec x = pf.to_world(c + (1.0 - t) * reach * u);
      double mag = vmax(vabs(pf.v(x)));
      vscale = std::max(vscale, mag);
      if (mag > 1.05 * prev + 1e-14) monotone = false;
      prev = mag;
      ++rep.samples;
    }
    final_worst = std::max(final_worst, prev);
  }
  rep.measured = vscale > 0.0 ? final_worst / vscale : 0.0;
  rep.passed = rep.measured <= rep.threshold && monotone;
  rep.notes = monotone ? "decay along inward-normal approach lines"
                       : "NOT monotone along approach lines";
  return rep;
}

CheckReport check_eps_convergence(const PotentialField& pf, const Problem& p,
                                  const Sizes& sz, std::uint64_t seed) {
  CheckReport rep{"eps_convergence", false, 0.0, 1e-2, 0, ""};
  ConvergenceTable table =
      convergence_study(p, p.eps_schedule, default_probes(p, sz.probes));
  double final_res = 0.0;
  for (const auto& row : table.rows)
    if (!row.skipped && row.eps == p.eps_schedule.back())
      final_res = std::max(final_res, row.residual);
  rep.measured = final_res;
  rep.samples = static_cast<long>(table.rows.size());
  rep.passed = table.monotone && rep.measured <= rep.threshold;
  rep.notes = table.monotone ? "residual decreases along the schedule"
                             : "residual NOT monotone along the schedule";
  return rep;
}

}  // namespace

std::vector<Vec> default_probes(const Problem& p, int count) {
  // world-coordinate interior probes, away from the boundary so the largest
  // epsilon stays admissible
  const StarDomain& d = p.is_union ? p.udomain.pieces.front() : p.domain;
  std::vector<Vec> out;
  Vec lo, hi;
  bounding_box(d, lo, hi);
  std::uint64_t idx = p.seed * 48271;
  double eps_max = p.eps_schedule.empty() ? 0.0 : p.eps_schedule.front();
  while (static_cast<int>(out.size()) < count) {
    Vec x = halton_in_box(idx, lo, hi, d.dim);
    ++idx;
    if (!contains(d, x)) continue;
    if (boundary_distance(d, x) > std::max(2.5 * eps_max, 0.1 * diameter(d)))
      out.push_back(x);
  }
  return out;
}

ConvergenceTable convergence_study(const Problem& p, const std::vector<double>& schedule,
                                   const std::vector<Vec>& probes) {
  EpsilonSchedule checked(schedule);  // validates ordering
  PotentialField pf = solve_problem(p);
  ConvergenceTable table;
  table.schedule = schedule;
  table.probes = probes;

  std::vector<double> col_max(schedule.size(), 0.0);
  for (std::size_t ei = 0; ei < schedule.size(); ++ei) {
    double eps = schedule[ei];
    for (std::size_t pi = 0; pi < probes.size(); ++pi) {
      ConvergenceRow row;
      row.eps = eps;
      row.probe = static_cast<int>(pi);
      const Vec& x = probes[pi];
      double dist = boundary_distance(pf.local_domain(), pf.to_local(x)) * pf.scale();
      if (!(eps < 0.5 * dist)) {
        row.skipped = true;
        row.note = "probe too close to the boundary for this epsilon";
        table.rows.push_back(row);
        continue;
      }
      double res =
          std::abs(pf.div_v_eps(x, eps) - p.F.eval(x) + pf.div_offset(x));
      row.residual = res;
      col_max[ei] = std::max(col_max[ei], res);
      table.rows.push_back(row);
    }
  }
  table.monotone = true;
  for (std::size_t ei = 1; ei < schedule.size(); ++ei)
    if (col_max[ei] > col_max[ei - 1]) table.monotone = false;
  return table;
}

std::vector<CheckReport> check_suite(const Problem& p, CheckLevel level) {
  if (p.is_union) return union_check_suite(p, level);
  Sizes sz = sizes_for(level);
  PotentialField pf = solve_problem(p);

  std::vector<CheckReport> reports;
  reports.push_back(check_outside_vanishing(pf, sz, p.seed));
  reports.push_back(check_kernel_bound(pf, sz, p.seed));
  reports.push_back(check_variant_equivalence(pf, sz, p.seed));
  reports.push_back(check_lemma8(pf, sz, p.seed));
  reports.push_back(check_lemma12(pf, sz, p.seed));
  reports.push_back(check_homogeneity(pf, sz, p.seed));
  reports.push_back(check_bounded_k(pf, sz, p.seed));
  reports.push_back(check_sphere_mean(pf, sz, p.seed));
  reports.push_back(decade_trend("thm9_g_weak_singularity", pf, 0, sz, p.seed));
  reports.push_back(decade_trend("thm9_dn_bound", pf, 1, sz, p.seed));
  reports.push_back(check_divergence(pf, p.F, sz, p.seed));
  reports.push_back(check_boundary_continuity(pf, sz, p.seed));
  reports.push_back(check_eps_convergence(pf, p, sz, p.seed));

  std::sort(reports.begin(), reports.end(),
            [](const CheckReport& a, const CheckReport& b) { return a.name < b.name; });
  return reports;
}

std::vector<CheckReport> union_check_suite(const Problem& p, CheckLevel level) {
  Sizes sz = sizes_for(level);
  const UnionDomain& u = p.udomain;
  Partition part = build_partition(u);
  std::vector<ScalarField> fs = localize(p.F, u, part, p.quad);
  CompositeField sol = solve_union(p.F, u, p.quad, p.br_factor);

  std::vector<CheckReport> reports;
  Vec lo, hi;
  bounding_box(u, lo, hi);

  {  // partition of unity sums to 1 on the union
    CheckReport rep{"partition_sum", false, 0.0, 1e-10, 0, ""};
    std::uint64_t idx = p.seed * 131071;
    long got = 0;
    while (got < sz.grid) {
      Vec x = halton_in_box(idx, lo, hi, u.dim);
      ++idx;
      if (!contains(u, x)) continue;
      ++got;
      double s = 0.0;
      for (const auto& chi : part.chis) s += chi(x);
      rep.measured = std::max(rep.measured, std::abs(s - 1.0));
    }
    rep.samples = sz.grid;
    rep.passed = rep.measured <= rep.threshold;
    rep.notes = "sum chi_i = 1 on union grid";
    reports.push_back(rep);
  }

  {  // each localized piece integrates to zero
    CheckReport rep{"localized_zero_mean", false, 0.0, 1e-6, 0, ""};
    QuadConfig cfg = p.quad;
    cfg.radial_grading = 1.0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      auto f = fs[i].eval;
      double m = integrate_polar_t<double>([&](const Vec& y) { return f(y); },
                                           u.pieces[i].center_ball.center, u.pieces[i], cfg)
                     .value;
      rep.measured = std::max(rep.measured, std::abs(m));
      ++rep.samples;
    }
    rep.passed = rep.measured <= rep.threshold;
    rep.notes = "int F_i = 0 per piece";
    reports.push_back(rep);
  }

  {  // support: F_i vanishes off its piece
    CheckReport rep{"localized_support", false, 0.0, 1e-14, 0, ""};
    std::uint64_t idx = p.seed * 524287;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      long got = 0;
      std::uint64_t guard = 0;
      while (got < sz.grid && guard < 200000) {
        Vec x = halton_in_box(idx, lo, hi, u.dim);
        ++idx;
        ++guard;
        if (!contains(u, x) || contains(u.pieces[i], x)) continue;
        ++got;
        rep.measured = std::max(rep.measured, std::abs(fs[i].eval(x)));
      }
      rep.samples += got;
    }
    rep.passed = rep.measured <= rep.threshold;
    rep.notes = "F_i = 0 on union minus piece i";
    reports.push_back(rep);
  }

  {  // the localized pieces sum back to F
    CheckReport rep{"localized_sum", false, 0.0, 1e-10, 0, ""};
    std::uint64_t idx = p.seed * 6700417;
    long got = 0;
    double scale = 1.0;
    while (got < sz.grid) {
      Vec x = halton_in_box(idx, lo, hi, u.dim);
      ++idx;
      if (!contains(u, x)) continue;
      ++got;
      double fsum = 0.0;
      for (const auto& f : fs) fsum += f.eval(x);
      double fx = p.F.eval(x);
      scale = std::max(scale, std::abs(fx));
      rep.measured = std::max(rep.measured, std::abs(fsum - fx));
    }
    rep.measured /= scale;
    rep.samples = sz.grid;
    rep.passed = rep.measured <= rep.threshold;
    rep.notes = "sum F_i = F on union grid (relative)";
    reports.push_back(rep);
  }

  {  // composite divergence reproduces F
    CheckReport rep{"divergence_residual", false, 0.0, 1e-2, 0, ""};
    std::uint64_t idx = p.seed * 2147483647ULL;
    double worst = 0.0, scale = 0.0;
    long got = 0;
    while (got < sz.probes) {
      Vec x = halton_in_box(idx, lo, hi, u.dim);
      ++idx;
      if (!contains(u, x)) continue;
      bool deep = false;
      for (const auto& piece : u.pieces)
        if (contains(piece, x) && boundary_distance(piece, x) > 0.08 * diameter(piece))
          deep = true;
      if (!deep) continue;
      ++got;
      double fx = p.F.eval(x);
      double offset = 0.0;
      for (const auto& part : sol.parts())
        if (part.inside(x)) offset += part.div_offset(x);
      worst = std::max(worst, std::abs(sol.divergence(x) + offset - fx));
      scale = std::max(scale, std::abs(fx));
      ++rep.samples;
    }
    rep.measured = worst / std::max(scale, 1e-12);
    rep.passed = rep.measured <= rep.threshold;
    rep.notes = "composite trace(grad v) vs F at interior probes";
    reports.push_back(rep);
  }

  {  // v -> 0 along inward-normal approach lines of the union boundary
    CheckReport rep{"boundary_continuity", false, 0.0, 0.35, 0, ""};
    const double fracs[4] = {0.2, 0.1, 0.05, 0.01};
    double vscale = 0.0, final_worst = 0.0;
    bool monotone = true;
    std::uint64_t idx = p.seed * 7529;
    int lines = 0;
    std::size_t piece_idx = 0;
    while (lines < 20) {
      const StarDomain& piece = u.pieces[piece_idx % u.pieces.size()];
      ++piece_idx;
      Vec c = piece.center_ball.center;
      Vec dir = halton_direction(idx, u.dim);
      ++idx;
      double reach = ray_exit(piece, c, dir);
      Vec b = c + reach * dir;
      // only lines that approach the *union* boundary
      bool interior_to_other = false;
      for (const auto& other : u.pieces)
        if (&other != &piece && contains(other, b) &&
            boundary_distance(other, b) > 0.05 * diameter(other))
          interior_to_other = true;
      if (interior_to_other) continue;
      ++lines;
      double prev = 1e300;
      for (double t : fracs) {
        Vec x = c + (1.0 - t) * reach * dir;
        double mag = vmax(vabs(sol.v(x)));
        vscale = std::max(vscale, mag);
        if (mag > 1.05 * prev + 1e-14) monotone = false;
        prev = mag;
        ++rep.samples;
      }
      final_worst = std::max(final_worst, prev);
    }
    rep.measured = vscale > 0.0 ? final_worst / vscale : 0.0;
    rep.passed = rep.measured <= rep.threshold && monotone;
    rep.notes = monotone ? "decay along approach lines (union boundary)"
                         : "NOT monotone along approach lines";
    reports.push_back(rep);
  }

  std::sort(reports.begin(), reports.end(),
            [](const CheckReport& a, const CheckReport& b) { return a.name < b.name; });
  return reports;
}

}  // namespace bgk
