#pragma once

#include <functional>
#include <vector>

#include "bgk/geometry.hpp"
#include "bgk/potential.hpp"

namespace bgk {

// Smooth partition of unity over the pieces of a union domain, plus one
// unit-mass transfer bump per overlap witness ball. chi_i vanishes outside
// piece i and the chis sum to 1 on the union.
struct Partition {
  std::vector<std::function<double(const Vec&)>> chis;
  std::vector<Mollifier> transfer_bumps;
};

Partition build_partition(const UnionDomain& u);

// Splits a zero-mean F into fields F_i supported in the pieces, each with
// zero mean, summing back to F (cumulative-mean transfer along the chain).
// Throws when the total mean is not zero within tolerance.
std::vector<ScalarField> localize(const ScalarField& F, const UnionDomain& u,
                                  const Partition& p, const QuadConfig& quad);

// Sum of the per-piece solves; vanishes identically outside the union.
class CompositeField {
 public:
  CompositeField(std::vector<PotentialField> parts, UnionDomain dom)
      : parts_(std::move(parts)), dom_(std::move(dom)) {}

  Vec v(const Vec& x) const;
  Mat grad(const Vec& x) const;
  double divergence(const Vec& x) const;
  bool inside(const Vec& x) const { return contains(dom_, x); }
  int dim() const { return dom_.dim; }
  const std::vector<PotentialField>& parts() const { return parts_; }
  const UnionDomain& domain() const { return dom_; }

 private:
  std::vector<PotentialField> parts_;
  UnionDomain dom_;
};

CompositeField solve_union(const ScalarField& F, const UnionDomain& u, const QuadConfig& quad,
                           double br_factor = 1.25);

}  // namespace bgk
