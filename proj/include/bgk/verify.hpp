#pragma once

#include <string>
#include <vector>

#include "bgk/problem.hpp"

namespace bgk {

struct CheckReport {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  long samples = 0;
  std::string notes;
};

enum class CheckLevel { quick, full };

struct ConvergenceRow {
  double eps = 0.0;
  int probe = 0;
  double residual = 0.0;
  bool skipped = false;
  std::string note;
};

struct ConvergenceTable {
  std::vector<double> schedule;
  std::vector<Vec> probes;
  std::vector<ConvergenceRow> rows;  // sorted by (eps desc, probe)
  bool monotone = false;
};

// Runs the structural checks for a single-piece problem: outside vanishing,
// kernel bound, variant equivalence, the Lemma 8/12 identities, the Thm 9
// battery, divergence residual, boundary continuity, and the epsilon trend.
// Failures are reports, not errors; reports come back sorted by name.
std::vector<CheckReport> check_suite(const Problem& p, CheckLevel level);

// Union-domain variant: partition-of-unity and localization checks plus the
// composite divergence residual and boundary behavior.
std::vector<CheckReport> union_check_suite(const Problem& p, CheckLevel level);

// |div v^eps(x) - F(x) + psi(x) int F| per epsilon per probe. Probes too
// close to the boundary for the largest epsilon are skipped with a note.
ConvergenceTable convergence_study(const Problem& p, const std::vector<double>& schedule,
                                   const std::vector<Vec>& probes);

// default interior probes for a problem (quasi-random, reproducible)
std::vector<Vec> default_probes(const Problem& p, int count);

}  // namespace bgk
