#pragma once

#include <cstdint>
#include <vector>

#include "bgk/geometry.hpp"
#include "bgk/potential.hpp"

namespace bgk {

// Sampled lower bound for the modulus of continuity omega(F, rho); omegas are
// forced nondecreasing in rho by a running max.
struct ModulusEstimate {
  std::vector<double> rhos;
  std::vector<double> omegas;
  long n_pairs = 0;
};

ModulusEstimate modulus(const ScalarField& F, const StarDomain& d,
                        const std::vector<double>& rhos, long n_pairs,
                        std::uint64_t seed = 1);

// trapezoid of omega(rho)/rho over the sampled grid [rho_min, diam]; the
// estimate cannot probe 0+, so rho_min is part of the result's meaning
double dini_integral(const ModulusEstimate& est);

// log-spaced grid, 40 points per decade over 4 decades below diam
std::vector<double> default_rho_grid(double diam);

// grid max of |F| plus the sampled Dini integral; a finite-sample lower bound
double cd_norm(const ScalarField& F, const StarDomain& d, long n_pairs = 10000,
               std::uint64_t seed = 1);

double grid_max_abs(const ScalarField& F, const StarDomain& d, std::uint64_t seed = 1);

// Advisory classification from the trend of per-decade contributions to the
// Dini integral: geometric decay reads as Dini, flat tails as possibly
// non-Dini. Sampled moduli cannot certify either way.
enum class DiniVerdict { dini, inconclusive, possibly_non_dini };

DiniVerdict dini_verdict(const ModulusEstimate& est);
const char* to_string(DiniVerdict v);

}  // namespace bgk
