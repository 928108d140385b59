#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bgk/decomposition.hpp"
#include "bgk/fieldlang.hpp"
#include "bgk/geometry.hpp"
#include "bgk/potential.hpp"
#include "bgk/quadrature.hpp"

namespace bgk {

// A fully resolved problem statement: domain (single star-shaped piece or a
// chained union), the datum F, quadrature overrides, epsilon schedule, B_R
// factor, and the reproducibility seed.
struct Problem {
  int dim = 2;
  bool is_union = false;
  StarDomain domain;     // valid when !is_union
  UnionDomain udomain;   // valid when is_union
  ScalarField F;
  std::string f_source;
  QuadConfig quad;
  std::vector<double> eps_schedule{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  double br_factor = 1.25;
  std::uint64_t seed = 1;
  bool corrupt_kernel = false;  // debug hook for the mutation checks

  const Ball& mollifier_ball() const {
    return is_union ? udomain.pieces.front().center_ball : domain.center_ball;
  }
};

struct ProblemError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Problem load_problem_json(const std::string& text);
Problem load_problem_file(const std::string& path);

// builds the solver for a single-piece problem (Thm-14 normalization + gate)
PotentialField solve_problem(const Problem& p, long gate_samples = 2000);

}  // namespace bgk
