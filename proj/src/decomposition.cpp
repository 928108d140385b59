#include "bgk/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "bgk/bump.hpp"
#include "bgk/dini.hpp"

namespace bgk {

namespace {

// Smooth plateau of a piece: 1 on the inner core (inset >= delta), 0 outside.
// Balls and radial graphs use a step of the radial margin; boxes a product of
// per-face 1D steps, which keeps the plateau smooth at corners.
std::function<double(const Vec&)> plateau(const StarDomain& piece, double delta) {
  switch (piece.kind) {
    case ShapeKind::ball: {
      Vec c = piece.ball_center;
      double r = piece.ball_radius;
      double d = std::min(delta, 0.45 * r);
      return [c, r, d](const Vec& x) { return smooth_step((r - (x - c).norm()) / d); };
    }
    case ShapeKind::box: {
      Vec lo = piece.box_lo, hi = piece.box_hi;
      int dim = piece.dim;
      double d = delta;
      for (int k = 0; k < dim; ++k) d = std::min(d, 0.45 * 0.5 * (hi[k] - lo[k]));
      return [lo, hi, dim, d](const Vec& x) {
        double t = 1.0;
        for (int k = 0; k < dim; ++k)
          t *= smooth_step((x[k] - lo[k]) / d) * smooth_step((hi[k] - x[k]) / d);
        return t;
      };
    }
    case ShapeKind::radial: {
      auto shape = std::make_shared<StarDomain>(piece);
      double d = std::min(delta, 0.45 * piece.radial_rmin);
      return [shape, d](const Vec& x) {
        Vec rel = x - shape->radial_center;
        double rho = rel.norm();
        if (rho < 1e-14) return 1.0;
        double margin = shape->radius_fn(rel * (1.0 / rho)) - rho;
        return smooth_step(margin / d);
      };
    }
  }
  return {};
}

}  // namespace

Partition build_partition(const UnionDomain& u) {
  const std::size_t n = u.pieces.size();
  Partition part;

  // plateau width per piece: a quarter of the narrowest adjacent overlap
  std::vector<double> delta(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double w = 1e300;
    for (const auto& ov : u.overlaps)
      if (ov.i == i || ov.i + 1 == i) w = std::min(w, 2.0 * ov.ball.radius);
    if (w == 1e300) w = u.pieces[i].center_ball.radius;  // single piece
    delta[i] = 0.25 * w;
  }

  auto thetas = std::make_shared<std::vector<std::function<double(const Vec&)>>>();
  for (std::size_t i = 0; i < n; ++i) thetas->push_back(plateau(u.pieces[i], delta[i]));
  auto pieces = std::make_shared<std::vector<StarDomain>>(u.pieces);

  for (std::size_t i = 0; i < n; ++i) {
    part.chis.push_back([thetas, pieces, i](const Vec& x) -> double {
      if (!contains((*pieces)[i], x)) return 0.0;
      double ti = (*thetas)[i](x);
      double sum = 0.0;
      for (std::size_t j = 0; j < thetas->size(); ++j)
        sum += (j == i) ? ti : (contains((*pieces)[j], x) ? (*thetas)[j](x) : 0.0);
      if (sum < 1e-250) {
        // deep-underflow sliver at the union boundary: split evenly among
        // the pieces containing x so the partition still sums to one
        int cnt = 0;
        for (const auto& pc : *pieces) cnt += contains(pc, x) ? 1 : 0;
        return cnt > 0 ? 1.0 / cnt : 0.0;
      }
      return ti / sum;
    });
  }

  for (const auto& ov : u.overlaps) part.transfer_bumps.emplace_back(ov.ball, u.dim);
  return part;
}

std::vector<ScalarField> localize(const ScalarField& F, const UnionDomain& u,
                                  const Partition& p, const QuadConfig& quad) {
  const std::size_t n = u.pieces.size();
  if (p.chis.size() != n || p.transfer_bumps.size() + (n > 0 ? 1 : 0) < n)
    throw std::invalid_argument("localize: partition does not match the union");

  QuadConfig cfg = quad;
  cfg.radial_grading = 1.0;

  // cumulative means m_i = sum_{k<=i} int chi_k F
  std::vector<double> m(n, 0.0);
  double acc = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto chi = p.chis[i];
    auto base = F.eval;
    auto g = [chi, base](const Vec& y) { return chi(y) * base(y); };
    acc += integrate_polar_t<double>(g, u.pieces[i].center_ball.center, u.pieces[i], cfg).value;
    m[i] = acc;
  }
  scale = std::max(1.0, grid_max_abs(F, u.pieces.front()));
  if (std::abs(m[n - 1]) > 1e-6 * scale)
    throw std::runtime_error("compatibility condition violated: integral of F is " +
                             std::to_string(m[n - 1]));

  std::vector<ScalarField> out;
  auto bumps = std::make_shared<std::vector<Mollifier>>(p.transfer_bumps);
  for (std::size_t i = 0; i < n; ++i) {
    auto chi = p.chis[i];
    auto base = F.eval;
    double m_prev = (i > 0) ? m[i - 1] : 0.0;
    double m_cur = m[i];
    bool has_prev = i > 0;
    bool has_next = i + 1 < n;
    ScalarField f;
    f.label = F.label + "_piece" + std::to_string(i + 1);
    f.declared_zero_mean = true;
    f.eval = [chi, base, bumps, i, m_prev, m_cur, has_prev, has_next](const Vec& y) {
      double val = chi(y) * base(y);
      if (has_prev) val += m_prev * (*bumps)[i - 1](y);
      if (has_next) val -= m_cur * (*bumps)[i](y);
      return val;
    };
    out.push_back(std::move(f));
  }
  return out;
}

Vec CompositeField::v(const Vec& x) const {
  Vec acc;
  for (const auto& part : parts_) acc += part.v(x);
  return acc;
}

Mat CompositeField::grad(const Vec& x) const {
  Mat acc;
  for (const auto& part : parts_)
    if (part.inside(x)) acc += part.grad(x);
  return acc;
}

double CompositeField::divergence(const Vec& x) const { return grad(x).trace(dim()); }

CompositeField solve_union(const ScalarField& F, const UnionDomain& u, const QuadConfig& quad,
                           double br_factor) {
  Partition part = build_partition(u);
  std::vector<ScalarField> fs = localize(F, u, part, quad);
  std::vector<PotentialField> parts;
  parts.reserve(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i)
    parts.push_back(PotentialField::scaled_solve(fs[i], u.pieces[i],
                                                 u.pieces[i].center_ball, quad, br_factor));
  return CompositeField(std::move(parts), u);
}

}  // namespace bgk
