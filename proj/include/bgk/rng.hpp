#pragma once

#include <cstdint>

#include "bgk/vec.hpp"

namespace bgk {

// Deterministic cross-platform PRNG. We avoid <random> distributions because
// their output is implementation-defined and reports must reproduce
// bit-for-bit given a seed.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }
};

// Van der Corput radical inverse; halton(i, 2), halton(i, 3), ... give the
// usual low-discrepancy coordinates.
inline double halton(std::uint64_t index, unsigned base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

// Quasi-random points in an axis box (bases 2,3,5 per coordinate).
inline Vec halton_in_box(std::uint64_t index, const Vec& lo, const Vec& hi, int dim) {
  static const unsigned bases[3] = {2, 3, 5};
  Vec p;
  for (int k = 0; k < dim; ++k)
    p[k] = lo[k] + (hi[k] - lo[k]) * halton(index + 1, bases[k]);
  return p;
}

// Unit direction from low-discrepancy angles (bases 7,11).
inline Vec halton_direction(std::uint64_t index, int dim) {
  const double two_pi = 6.283185307179586476925286766559;
  double theta = two_pi * halton(index + 1, 7);
  if (dim == 2) return Vec(std::cos(theta), std::sin(theta));
  double mu = 2.0 * halton(index + 1, 11) - 1.0;  // cos(polar)
  double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
  return Vec(s * std::cos(theta), s * std::sin(theta), mu);
}

// Quasi-random point in the closed ball (radius factor u^{1/dim}).
inline Vec halton_in_ball(std::uint64_t index, const Vec& center, double radius, int dim) {
  double u = halton(index + 1, 13);
  double r = radius * std::pow(u, 1.0 / dim);
  return center + r * halton_direction(index, dim);
}

}  // namespace bgk
