#include "bgk/dini.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bgk/rng.hpp"

namespace bgk {

ModulusEstimate modulus(const ScalarField& F, const StarDomain& d,
                        const std::vector<double>& rhos, long n_pairs, std::uint64_t seed) {
  if (n_pairs < 1) throw std::invalid_argument("modulus: n_pairs >= 1");
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    if (rhos[i] <= 0.0) throw std::invalid_argument("modulus: rhos must be positive");
    if (i > 0 && rhos[i] <= rhos[i - 1])
      throw std::invalid_argument("modulus: rhos must be increasing");
  }
  ModulusEstimate est;
  est.rhos = rhos;
  est.omegas.assign(rhos.size(), 0.0);
  est.n_pairs = n_pairs;

  Vec lo, hi;
  bounding_box(d, lo, hi);
  for (std::size_t k = 0; k < rhos.size(); ++k) {
    const double rho = rhos[k];
    std::uint64_t idx = seed * 65537 + k * 1000003;
    SplitMix64 rng(seed + k);
    double sup = 0.0;
    long got = 0;
    while (got < n_pairs) {
      Vec x = halton_in_box(idx, lo, hi, d.dim);
      ++idx;
      if (!contains(d, x)) continue;
      // |x - y| < rho, uniform-ish in the ball around x
      double r = rho * std::pow(rng.uniform(), 1.0 / d.dim);
      Vec y = x + r * halton_direction(idx, d.dim);
      ++idx;
      if (!contains(d, y)) continue;
      ++got;
      sup = std::max(sup, std::abs(F.eval(x) - F.eval(y)));
    }
    est.omegas[k] = sup;
  }
  // the true modulus is nondecreasing; enforce on the sample
  for (std::size_t k = 1; k < est.omegas.size(); ++k)
    est.omegas[k] = std::max(est.omegas[k], est.omegas[k - 1]);
  return est;
}

double dini_integral(const ModulusEstimate& est) {
  if (est.rhos.empty()) throw std::invalid_argument("dini_integral: empty estimate");
  double acc = 0.0;
  for (std::size_t k = 1; k < est.rhos.size(); ++k) {
    double a = est.rhos[k - 1], b = est.rhos[k];
    double fa = est.omegas[k - 1] / a, fb = est.omegas[k] / b;
    acc += 0.5 * (fa + fb) * (b - a);
  }
  return acc;
}

std::vector<double> default_rho_grid(double diam) {
  std::vector<double> rhos;
  const int per_decade = 40, decades = 4;
  for (int i = 0; i <= per_decade * decades; ++i)
    rhos.push_back(diam * std::pow(10.0, -decades + static_cast<double>(i) / per_decade));
  return rhos;
}

double grid_max_abs(const ScalarField& F, const StarDomain& d, std::uint64_t seed) {
  Vec lo, hi;
  bounding_box(d, lo, hi);
  double m = 0.0;
  std::uint64_t idx = seed * 31337;
  long got = 0;
  while (got < 2048) {
    Vec x = halton_in_box(idx, lo, hi, d.dim);
    ++idx;
    if (!contains(d, x)) continue;
    ++got;
    m = std::max(m, std::abs(F.eval(x)));
  }
  return m;
}

double cd_norm(const ScalarField& F, const StarDomain& d, long n_pairs, std::uint64_t seed) {
  ModulusEstimate est = modulus(F, d, default_rho_grid(diameter(d)), n_pairs, seed);
  return grid_max_abs(F, d, seed) + dini_integral(est);
}

DiniVerdict dini_verdict(const ModulusEstimate& est) {
  // per-decade contributions to int omega/rho, smallest scales first
  if (est.rhos.size() < 2) return DiniVerdict::inconclusive;
  double rho_min = est.rhos.front(), rho_max = est.rhos.back();
  int decades = static_cast<int>(std::floor(std::log10(rho_max / rho_min) + 0.5));
  if (decades < 2) return DiniVerdict::inconclusive;
  std::vector<double> contrib(decades, 0.0);
  for (std::size_t k = 1; k < est.rhos.size(); ++k) {
    double mid = std::sqrt(est.rhos[k - 1] * est.rhos[k]);
    int dec = std::min(decades - 1,
                       std::max(0, static_cast<int>(std::log10(mid / rho_min))));
    double fa = est.omegas[k - 1] / est.rhos[k - 1], fb = est.omegas[k] / est.rhos[k];
    contrib[dec] += 0.5 * (fa + fb) * (est.rhos[k] - est.rhos[k - 1]);
  }
  double total = 0.0;
  for (double c : contrib) total += c;
  if (total < 1e-14) return DiniVerdict::dini;  // constant-like field

  // ratios of adjacent decade contributions, moving toward rho -> 0
  double worst = 0.0;
  for (int k = decades - 1; k > 0; --k) {
    if (contrib[k] <= 0.0) continue;
    worst = std::max(worst, contrib[k - 1] / contrib[k]);
  }
  if (worst >= 0.7) return DiniVerdict::possibly_non_dini;
  if (worst <= 0.5) return DiniVerdict::dini;
  return DiniVerdict::inconclusive;
}

const char* to_string(DiniVerdict v) {
  switch (v) {
    case DiniVerdict::dini: return "Dini";
    case DiniVerdict::inconclusive: return "inconclusive";
    case DiniVerdict::possibly_non_dini: return "possibly non-Dini";
  }
  return "?";
}

}  // namespace bgk
