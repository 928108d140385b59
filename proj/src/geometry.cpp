#include "bgk/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bgk/rng.hpp"

namespace bgk {

namespace {

constexpr double kBoundaryBand = 1e-12;

void check_dim(int dim) {
  if (dim < 2 || dim > 3)
    throw std::invalid_argument("domain dimension must be 2 or 3");
}

// dense set of unit directions used for sampling radial shapes
std::vector<Vec> sample_directions(int dim, int m) {
  std::vector<Vec> dirs;
  dirs.reserve(m);
  if (dim == 2) {
    for (int i = 0; i < m; ++i) {
      double t = 2.0 * M_PI * i / m;
      dirs.emplace_back(std::cos(t), std::sin(t));
    }
  } else {
    // Fibonacci sphere
    const double ga = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < m; ++i) {
      double z = 1.0 - 2.0 * (i + 0.5) / m;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double t = ga * i;
      dirs.emplace_back(r * std::cos(t), r * std::sin(t), z);
    }
  }
  return dirs;
}

double radial_value(const StarDomain& d, const Vec& u) {
  double r = d.radius_fn(u);
  if (!std::isfinite(r) || r <= 0.0)
    throw std::runtime_error("radial shape function must be positive and finite");
  return r;
}

}  // namespace

StarDomain make_ball_domain(const Ball& shape, const Ball& center_ball, int dim) {
  check_dim(dim);
  if (shape.radius <= 0.0 || center_ball.radius <= 0.0)
    throw std::invalid_argument("ball radius must be positive");
  StarDomain d;
  d.dim = dim;
  d.kind = ShapeKind::ball;
  d.ball_center = shape.center;
  d.ball_radius = shape.radius;
  d.center_ball = center_ball;
  d.cached_diameter = 2.0 * shape.radius;
  d.bound_center = shape.center;
  d.bound_radius = shape.radius;
  return d;
}

StarDomain make_box_domain(const Vec& lo, const Vec& hi, const Ball& center_ball, int dim) {
  check_dim(dim);
  for (int k = 0; k < dim; ++k)
    if (!(lo[k] < hi[k])) throw std::invalid_argument("box must have lo < hi per axis");
  if (center_ball.radius <= 0.0)
    throw std::invalid_argument("center ball radius must be positive");
  StarDomain d;
  d.dim = dim;
  d.kind = ShapeKind::box;
  d.box_lo = lo;
  d.box_hi = hi;
  d.center_ball = center_ball;
  d.cached_diameter = (hi - lo).norm();
  d.bound_center = 0.5 * (lo + hi);
  d.bound_radius = 0.5 * (hi - lo).norm();
  return d;
}

StarDomain make_radial_domain(const Vec& center, RadiusFn radius, const Ball& center_ball,
                              int dim, const std::string& source) {
  check_dim(dim);
  if (!radius) throw std::invalid_argument("radial shape needs a radius function");
  if (center_ball.radius <= 0.0)
    throw std::invalid_argument("center ball radius must be positive");
  StarDomain d;
  d.dim = dim;
  d.kind = ShapeKind::radial;
  d.radial_center = center;
  d.radius_fn = std::move(radius);
  d.center_ball = center_ball;
  d.radial_source = source;

  const int m = (dim == 2) ? 4096 : 8192;
  auto dirs = sample_directions(dim, m);
  double rmin = 1e300, rmax = 0.0;
  std::vector<Vec> boundary;
  boundary.reserve(m);
  for (const Vec& u : dirs) {
    double r = radial_value(d, u);
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
    boundary.push_back(center + r * u);
  }
  d.radial_rmin = rmin;
  d.radial_rmax = rmax;
  d.bound_center = center;
  d.bound_radius = rmax * 1.0000001;

  // diameter by dense boundary pair sampling (subsample to keep it O(10^6) pairs)
  const int stride = std::max(1, m / 1448);
  double best = 0.0;
  for (std::size_t i = 0; i < boundary.size(); i += stride)
    for (std::size_t j = i + stride; j < boundary.size(); j += stride)
      best = std::max(best, (boundary[i] - boundary[j]).norm());
  d.cached_diameter = best;
  return d;
}

bool contains(const StarDomain& d, const Vec& x) {
  switch (d.kind) {
    case ShapeKind::ball:
      return (x - d.ball_center).norm() < d.ball_radius;
    case ShapeKind::box:
      for (int k = 0; k < d.dim; ++k)
        if (x[k] <= d.box_lo[k] || x[k] >= d.box_hi[k]) return false;
      return true;
    case ShapeKind::radial: {
      Vec rel = x - d.radial_center;
      double rho = rel.norm();
      if (rho < kBoundaryBand) return true;
      return rho < radial_value(d, rel * (1.0 / rho));
    }
  }
  return false;
}

double diameter(const StarDomain& d) { return d.cached_diameter; }

double ray_exit(const StarDomain& d, const Vec& origin, const Vec& dir) {
  if (!contains(d, origin))
    throw std::invalid_argument("ray_exit: origin is outside the domain");
  switch (d.kind) {
    case ShapeKind::ball: {
      Vec oc = origin - d.ball_center;
      double b = oc.dot(dir);
      double c = oc.norm2() - d.ball_radius * d.ball_radius;
      double disc = b * b - c;
      return -b + std::sqrt(std::max(0.0, disc));
    }
    case ShapeKind::box: {
      double t = 1e300;
      for (int k = 0; k < d.dim; ++k) {
        if (dir[k] > 0.0)
          t = std::min(t, (d.box_hi[k] - origin[k]) / dir[k]);
        else if (dir[k] < 0.0)
          t = std::min(t, (d.box_lo[k] - origin[k]) / dir[k]);
      }
      return std::max(0.0, t);
    }
    case ShapeKind::radial: {
      // march to bracket the first exit, then bisect
      double tmax = d.bound_radius + (origin - d.radial_center).norm() + 1.0;
      const int steps = 1024;
      double h = tmax / steps;
      double lo = 0.0, hi = -1.0;
      for (int i = 1; i <= steps; ++i) {
        double t = i * h;
        if (!contains(d, origin + t * dir)) {
          hi = t;
          break;
        }
        lo = t;
      }
      if (hi < 0.0) return tmax;  // numerically never left; bounded anyway
      double tol = 1e-10 * d.cached_diameter;
      while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (contains(d, origin + mid * dir))
          lo = mid;
        else
          hi = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return 0.0;
}

double boundary_distance(const StarDomain& d, const Vec& x) {
  if (!contains(d, x)) return 0.0;
  switch (d.kind) {
    case ShapeKind::ball:
      return d.ball_radius - (x - d.ball_center).norm();
    case ShapeKind::box: {
      double m = 1e300;
      for (int k = 0; k < d.dim; ++k)
        m = std::min({m, x[k] - d.box_lo[k], d.box_hi[k] - x[k]});
      return m;
    }
    case ShapeKind::radial: {
      double m = 1e300;
      for (const Vec& u : sample_directions(d.dim, d.dim == 2 ? 128 : 512))
        m = std::min(m, ray_exit(d, x, u));
      return m;
    }
  }
  return 0.0;
}

bool reentrant_from(const StarDomain& d, const Vec& center, int probe_dirs) {
  if (d.kind != ShapeKind::radial) return false;
  double reach = d.bound_radius + (center - d.radial_center).norm();
  for (const Vec& u : sample_directions(d.dim, probe_dirs)) {
    double t0 = ray_exit(d, center, u);
    for (int i = 1; i <= 16; ++i) {
      double t = t0 + (reach - t0) * i / 16.0;
      if (t > t0 * (1.0 + 1e-9) && contains(d, center + t * u)) return true;
    }
  }
  return false;
}

StarReport verify_star_shaped(const StarDomain& d, const Ball& b, long n_samples,
                              std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("verify_star_shaped: n_samples >= 1");
  StarReport rep;
  Vec lo, hi;
  bounding_box(d, lo, hi);
  std::uint64_t idx = seed * 7919;
  long accepted = 0;
  while (accepted < n_samples) {
    Vec y = halton_in_box(idx, lo, hi, d.dim);
    ++idx;
    if (!contains(d, y)) continue;
    Vec z = halton_in_ball(idx, b.center, b.radius, d.dim);
    ++accepted;
    for (int j = 0; j < 32; ++j) {
      double t = j / 31.0;
      Vec p = y + t * (z - y);
      ++rep.checked;
      // endpoints themselves are in d (y sampled there, closure(b) subset of d
      // is part of what we are checking)
      if (!contains(d, p)) {
        rep.ok = false;
        rep.witness_y = y;
        rep.witness_z = z;
        return rep;
      }
    }
  }
  return rep;
}

StarDomain normalize_domain(const StarDomain& d, const Vec& x0, double R) {
  if (R <= 0.0) throw std::invalid_argument("normalize_domain: R must be positive");
  auto map = [&](const Vec& p) { return (p - x0) * (1.0 / R); };
  StarDomain out = d;
  out.center_ball.center = map(d.center_ball.center);
  out.center_ball.radius = d.center_ball.radius / R;
  out.cached_diameter = d.cached_diameter / R;
  out.bound_center = map(d.bound_center);
  out.bound_radius = d.bound_radius / R;
  switch (d.kind) {
    case ShapeKind::ball:
      out.ball_center = map(d.ball_center);
      out.ball_radius = d.ball_radius / R;
      break;
    case ShapeKind::box:
      out.box_lo = map(d.box_lo);
      out.box_hi = map(d.box_hi);
      break;
    case ShapeKind::radial: {
      out.radial_center = map(d.radial_center);
      RadiusFn base = d.radius_fn;
      out.radius_fn = [base, R](const Vec& u) { return base(u) / R; };
      out.radial_rmin = d.radial_rmin / R;
      out.radial_rmax = d.radial_rmax / R;
      break;
    }
  }
  return out;
}

UnionDomain make_union_domain(std::vector<StarDomain> pieces,
                              std::vector<UnionDomain::Overlap> overlaps) {
  if (pieces.empty()) throw std::invalid_argument("union domain needs at least one piece");
  UnionDomain u;
  u.dim = pieces.front().dim;
  for (const auto& p : pieces)
    if (p.dim != u.dim) throw std::invalid_argument("union pieces must share the dimension");
  if (pieces.size() >= 2 && overlaps.size() + 1 != pieces.size())
    throw std::invalid_argument("need one overlap witness per consecutive pair of pieces");
  for (const auto& ov : overlaps) {
    if (ov.i + 1 >= pieces.size())
      throw std::invalid_argument("overlap index out of range");
    if (ov.ball.radius <= 0.0)
      throw std::invalid_argument("empty overlap witness");
    // witness ball must lie in both pieces; sampled membership check
    for (int s = 0; s < 64; ++s) {
      Vec p = halton_in_ball(s, ov.ball.center, ov.ball.radius, u.dim);
      if (!contains(pieces[ov.i], p) || !contains(pieces[ov.i + 1], p))
        throw std::invalid_argument("overlap witness ball not contained in both pieces");
    }
  }
  u.pieces = std::move(pieces);
  u.overlaps = std::move(overlaps);
  return u;
}

bool contains(const UnionDomain& u, const Vec& x) {
  for (const auto& p : u.pieces)
    if (contains(p, x)) return true;
  return false;
}

void bounding_box(const StarDomain& d, Vec& lo, Vec& hi) {
  if (d.kind == ShapeKind::box) {
    lo = d.box_lo;
    hi = d.box_hi;
    return;
  }
  for (int k = 0; k < 3; ++k) {
    lo[k] = d.bound_center[k] - (k < d.dim ? d.bound_radius : 0.0);
    hi[k] = d.bound_center[k] + (k < d.dim ? d.bound_radius : 0.0);
  }
}

void bounding_box(const UnionDomain& u, Vec& lo, Vec& hi) {
  Vec plo, phi;
  bounding_box(u.pieces.front(), lo, hi);
  for (std::size_t i = 1; i < u.pieces.size(); ++i) {
    bounding_box(u.pieces[i], plo, phi);
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], plo[k]);
      hi[k] = std::max(hi[k], phi[k]);
    }
  }
}

}  // namespace bgk
