#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace bgk {

// Fixed-capacity 3-vector used for points and directions. Two-dimensional
// problems keep the third slot at exactly zero, so all arithmetic is
// dimension-agnostic and only I/O needs the problem dimension.
struct Vec {
  std::array<double, 3> c{0.0, 0.0, 0.0};

  Vec() = default;
  Vec(double a, double b, double d = 0.0) : c{a, b, d} {}

  double& operator[](std::size_t i) { return c[i]; }
  double operator[](std::size_t i) const { return c[i]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < 3; ++i) c[i] += o.c[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < 3; ++i) c[i] -= o.c[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < 3; ++i) c[i] *= s;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator/(Vec a, double s) { return a *= (1.0 / s); }
  friend Vec operator-(Vec a) { return a *= -1.0; }

  double dot(const Vec& o) const {
    return c[0] * o.c[0] + c[1] * o.c[1] + c[2] * o.c[2];
  }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }
  Vec normalized() const { return *this * (1.0 / norm()); }
};

// Small dense matrix, row-major, capacity 3x3; unused slots stay zero.
struct Mat {
  std::array<double, 9> m{};

  double& operator()(int i, int j) { return m[3 * i + j]; }
  double operator()(int i, int j) const { return m[3 * i + j]; }

  Mat& operator+=(const Mat& o) {
    for (int i = 0; i < 9; ++i) m[i] += o.m[i];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    for (int i = 0; i < 9; ++i) m[i] -= o.m[i];
    return *this;
  }
  Mat& operator*=(double s) {
    for (int i = 0; i < 9; ++i) m[i] *= s;
    return *this;
  }

  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator*(Mat a, double s) { return a *= s; }
  friend Mat operator*(double s, Mat a) { return a *= s; }

  double trace(int n) const {
    double t = 0.0;
    for (int i = 0; i < n; ++i) t += (*this)(i, i);
    return t;
  }
  double max_abs() const {
    double t = 0.0;
    for (double v : m) t = std::max(t, std::abs(v));
    return t;
  }
};

inline Mat outer(const Vec& a, const Vec& b) {
  Mat r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = a[i] * b[j];
  return r;
}

// Componentwise |.| and max-component, the norms the quadrature error
// estimator works with. Overloads exist for every integrable value type.
inline double vabs(double x) { return std::abs(x); }
inline double vmax(double x) { return std::abs(x); }
inline Vec vabs(Vec v) {
  for (int i = 0; i < 3; ++i) v[i] = std::abs(v[i]);
  return v;
}
inline double vmax(const Vec& v) {
  return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}
inline Mat vabs(Mat a) {
  for (double& v : a.m) v = std::abs(v);
  return a;
}
inline double vmax(const Mat& a) { return a.max_abs(); }

inline bool vfinite(double x) { return std::isfinite(x); }
inline bool vfinite(const Vec& v) {
  return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
}
inline bool vfinite(const Mat& a) {
  for (double v : a.m)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace bgk
