#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bgk/vec.hpp"

namespace bgk {

struct Ball {
  Vec center;
  double radius = 0.0;
};

enum class ShapeKind { ball, box, radial };

// radius over unit directions; must be positive and continuous
using RadiusFn = std::function<double(const Vec&)>;

// A bounded domain star-shaped with respect to every point of the closure of
// center_ball. Three constructive shapes: ball, axis-aligned box, and a
// radial graph r(u) about a center. Immutable after construction.
struct StarDomain {
  int dim = 2;
  ShapeKind kind = ShapeKind::ball;

  Vec ball_center;
  double ball_radius = 0.0;

  Vec box_lo, box_hi;

  Vec radial_center;
  RadiusFn radius_fn;
  double radial_rmin = 0.0;  // sampled min/max of radius_fn
  double radial_rmax = 0.0;

  Ball center_ball;

  double cached_diameter = 0.0;
  Vec bound_center;        // bounding ball, guaranteed to contain the domain
  double bound_radius = 0.0;

  std::string radial_source;  // expression text for radial shapes, if any
};

StarDomain make_ball_domain(const Ball& shape, const Ball& center_ball, int dim);
StarDomain make_box_domain(const Vec& lo, const Vec& hi, const Ball& center_ball, int dim);
StarDomain make_radial_domain(const Vec& center, RadiusFn radius, const Ball& center_ball,
                              int dim, const std::string& source = "");

// Open-set membership; boundary points may land either way within ~1e-12.
bool contains(const StarDomain& d, const Vec& x);

double diameter(const StarDomain& d);

// Largest rho* such that origin + rho*dir stays inside for all rho in [0, rho*).
// Analytic for ball/box, bisection for radial shapes (first exit only).
double ray_exit(const StarDomain& d, const Vec& origin, const Vec& dir);

// Approximate distance from an interior point to the boundary. Exact for
// ball/box; for radial shapes a sampled minimum of ray exits (valid when the
// domain is star-shaped as seen from x).
double boundary_distance(const StarDomain& d, const Vec& x);

// True if some ray from `center` leaves the domain and re-enters it; only
// radial shapes can do this. Sampled probe, used to trigger the complementary
// quadrature pass.
bool reentrant_from(const StarDomain& d, const Vec& center, int probe_dirs = 64);

struct StarReport {
  bool ok = true;
  Vec witness_y, witness_z;  // first violating pair, when !ok
  long checked = 0;
};

// Statistical star-shape check: n_samples quasi-random pairs (y in d, z in
// closure of b), 32 points per segment. Evidence, not proof.
StarReport verify_star_shaped(const StarDomain& d, const Ball& b, long n_samples,
                              std::uint64_t seed = 1);

// Maps the domain to z = (x - x0)/R coordinates (Thm-14 style normalization).
StarDomain normalize_domain(const StarDomain& d, const Vec& x0, double R);

struct UnionDomain {
  struct Overlap {
    std::size_t i = 0;  // witness ball lies inside pieces[i] and pieces[i+1]
    Ball ball;
  };
  int dim = 2;
  std::vector<StarDomain> pieces;
  std::vector<Overlap> overlaps;
};

UnionDomain make_union_domain(std::vector<StarDomain> pieces, std::vector<UnionDomain::Overlap> overlaps);

bool contains(const UnionDomain& u, const Vec& x);

// Axis-aligned bounding box of a domain (from its bounding ball for
// ball/radial shapes, exact for boxes).
void bounding_box(const StarDomain& d, Vec& lo, Vec& hi);
void bounding_box(const UnionDomain& u, Vec& lo, Vec& hi);

}  // namespace bgk
