#include "bgk/bump.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace bgk {

namespace {

inline double profile(double s2) {  // exp(-1/(1-s^2)) for s^2 < 1
  return (s2 < 1.0) ? std::exp(-1.0 / (1.0 - s2)) : 0.0;
}

QuadConfig tight_cfg() {
  QuadConfig cfg;
  cfg.rel_tol = 1e-13;
  cfg.abs_tol = 1e-16;
  cfg.max_subdivisions = 400;
  return cfg;
}

double sphere_area(int dim) { return dim == 2 ? 2.0 * M_PI : 4.0 * M_PI; }

}  // namespace

Mollifier::Mollifier(const Ball& support, int dim) : support_(support), dim_(dim) {
  if (dim < 2 || dim > 3) throw std::invalid_argument("mollifier dimension must be 2 or 3");
  if (support.radius <= 0.0) throw std::invalid_argument("mollifier support radius must be positive");
  const double R = support.radius;
  auto radial = [dim](double s) { return profile(s * s) * std::pow(s, dim - 1); };
  double I = integrate_1d_t<double>(radial, 0.0, 1.0, tight_cfg()).value;
  norm_const_ = 1.0 / (std::pow(R, dim) * sphere_area(dim) * I);
  max_value_ = norm_const_ * std::exp(-1.0);

  // |grad psi| along the radius: C * e^{-1/(1-s^2)} * 2s/(1-s^2)^2 / R
  max_grad_ = 0.0;
  for (int i = 1; i < 100000; ++i) {
    double s = i * 1e-5;
    double g = profile(s * s) * 2.0 * s / ((1.0 - s * s) * (1.0 - s * s));
    max_grad_ = std::max(max_grad_, g);
  }
  max_grad_ *= norm_const_ / R;
}

double Mollifier::operator()(const Vec& x) const {
  Vec rel = x - support_.center;
  double s2 = rel.norm2() / (support_.radius * support_.radius);
  if (s2 >= 1.0) return 0.0;
  return norm_const_ * profile(s2);
}

Vec Mollifier::grad(const Vec& x) const {
  Vec rel = x - support_.center;
  double R2 = support_.radius * support_.radius;
  double s2 = rel.norm2() / R2;
  if (s2 >= 1.0) return Vec();
  double v = norm_const_ * profile(s2);
  double q = 1.0 - s2;
  return rel * (v * (-2.0 / (q * q)) / R2);
}

PsiSample Mollifier::sample(const Vec& x) const {
  PsiSample out;
  Vec rel = x - support_.center;
  double R2 = support_.radius * support_.radius;
  double s2 = rel.norm2() / R2;
  if (s2 >= 1.0) return out;
  out.value = norm_const_ * profile(s2);
  double q = 1.0 - s2;
  out.grad = rel * (out.value * (-2.0 / (q * q)) / R2);
  return out;
}

namespace {

// The cutoff eta is a fixed function; both it and its derivative are served
// from cumulative tables of the 1D bump, built once. Hermite interpolation on
// these tables is accurate to ~1e-13, far below every tolerance that touches
// eta.
struct EtaTables {
  static constexpr double h = 0.25;  // bump radius
  static constexpr int nphi = 4096;  // Phi table intervals on [-h, h]
  static constexpr int neta = 2048;  // eta table intervals on [1, 2]

  std::vector<double> phi_cdf;   // Phi at -h + k*(2h/nphi), normalized to [0,1]
  std::vector<double> phi_val;   // phi at the same nodes (the derivative of Phi)
  std::vector<double> eta_val;   // eta at 1 + k/neta
  std::vector<double> eta_der;   // eta' there
  double cphi = 0.0;

  static double bump_raw(double t) {  // un-normalized 1D bump on [-h, h]
    double u = t / h;
    double u2 = u * u;
    return (u2 < 1.0) ? std::exp(-1.0 / (1.0 - u2)) : 0.0;
  }

  EtaTables() {
    QuadConfig cfg = tight_cfg();
    phi_cdf.resize(nphi + 1);
    phi_val.resize(nphi + 1);
    double step = 2.0 * h / nphi;
    double acc = 0.0;
    phi_cdf[0] = 0.0;
    for (int k = 1; k <= nphi; ++k) {
      double a = -h + (k - 1) * step, b = -h + k * step;
      acc += integrate_1d_t<double>([](double t) { return bump_raw(t); }, a, b, cfg).value;
      phi_cdf[k] = acc;
    }
    double total = phi_cdf[nphi];
    cphi = 1.0 / total;
    for (int k = 0; k <= nphi; ++k) {
      phi_cdf[k] = std::min(1.0, phi_cdf[k] / total);
      phi_val[k] = bump_raw(-h + k * step) * cphi;
    }

    // eta' (t) = 2 [Phi(t-1.25) - Phi(t-1.75)]; eta = cumulative of eta' from 1
    eta_val.resize(neta + 1);
    eta_der.resize(neta + 1);
    double estep = 1.0 / neta;
    eta_val[0] = 0.0;
    eta_der[0] = deriv_exact(1.0);
    double eacc = 0.0;
    for (int k = 1; k <= neta; ++k) {
      double a = 1.0 + (k - 1) * estep, b = 1.0 + k * estep;
      eacc += integrate_1d_t<double>([this](double t) { return deriv_exact(t); }, a, b, cfg).value;
      eta_val[k] = eacc;
      eta_der[k] = deriv_exact(1.0 + k * estep);
    }
  }

  // cumulative of the normalized bump, from the table (Hermite, exact slope phi)
  double Phi(double u) const {
    if (u <= -h) return 0.0;
    if (u >= h) return 1.0;
    double step = 2.0 * h / nphi;
    double p = (u + h) / step;
    int k = std::min(nphi - 1, static_cast<int>(p));
    double t = p - k;
    return hermite(phi_cdf[k], phi_cdf[k + 1], phi_val[k] * step, phi_val[k + 1] * step, t);
  }

  double phi(double u) const { return bump_raw(u) * cphi; }

  double deriv_exact(double t) const { return 2.0 * (Phi(t - 1.25) - Phi(t - 1.75)); }

  double eta(double t) const {
    double p = (t - 1.0) * neta;
    int k = std::min(neta - 1, static_cast<int>(p));
    double t1 = p - k;
    double step = 1.0 / neta;
    return hermite(eta_val[k], eta_val[k + 1], eta_der[k] * step, eta_der[k + 1] * step, t1);
  }

  double deriv(double t) const { return deriv_exact(t); }

  static double hermite(double v0, double v1, double d0, double d1, double t) {
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * v0 + (t3 - 2 * t2 + t) * d0 +
           (-2 * t3 + 3 * t2) * v1 + (t3 - t2) * d1;
  }
};

const EtaTables& eta_tables() {
  static EtaTables tables;
  return tables;
}

}  // namespace

double eta_eval(double t) {
  if (t < 0.0) throw std::invalid_argument("eta: argument must be nonnegative");
  if (t <= 1.0) return 0.0;
  if (t >= 2.0) return 1.0;
  return eta_tables().eta(t);
}

double eta_deriv(double t) {
  if (t < 0.0) throw std::invalid_argument("eta: argument must be nonnegative");
  if (t <= 1.0 || t >= 2.0) return 0.0;
  return eta_tables().deriv(t);
}

double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return eta_eval(1.0 + s);
}

}  // namespace bgk
