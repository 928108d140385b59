#include "bgk/quadrature.hpp"

#include <map>
#include <mutex>

namespace bgk {

QuadResult<double> integrate_1d(const std::function<double(double)>& f, double a, double b,
                                const QuadConfig& cfg) {
  return integrate_1d_t<double>(f, a, b, cfg);
}

QuadResult<double> integrate_sphere(const std::function<double(const Vec&)>& f, int dim,
                                    const QuadConfig& cfg) {
  return integrate_sphere_t<double>(f, dim, cfg);
}

QuadResult<double> integrate_polar(const std::function<double(const Vec&)>& f, const Vec& center,
                                   const StarDomain& d, const QuadConfig& cfg) {
  return integrate_polar_t<double>(f, center, d, cfg);
}

std::vector<double> clenshaw_curtis_weights(int n) {
  // weights for nodes x_j = cos(j pi / n), j = 0..n, integrating over [-1,1];
  // n even. Derived from the DCT-I expansion of the integrand.
  if (n < 2 || n % 2) throw std::invalid_argument("clenshaw_curtis_weights: n must be even >= 2");
  std::vector<double> w(n + 1);
  for (int j = 0; j <= n; ++j) {
    double theta = M_PI * j / n;
    double s = 1.0;
    for (int k = 2; k <= n - 2; k += 2) s += 2.0 / (1.0 - k * k) * std::cos(k * theta);
    s += std::cos(n * theta) / (1.0 - n * n);
    double sigma = (j == 0 || j == n) ? 0.5 : 1.0;
    w[j] = sigma * 2.0 / n * s;
  }
  return w;
}

namespace {

AngularRule build_circle_rule(int m) {
  AngularRule rule;
  rule.nodes.resize(m);
  const double step = 2.0 * M_PI / m;
  for (int l = 0; l < m; ++l) {
    double t = step * l;
    AngularNode& nd = rule.nodes[l];
    nd.u = Vec(std::cos(t), std::sin(t));
    nd.w_full = step;
    nd.w_half = (l % 2 == 0) ? 2.0 * step : 0.0;
  }
  return rule;
}

AngularRule build_sphere_rule(int mu_nodes, int m_phi) {
  const int n = mu_nodes - 1;
  std::vector<double> wmu = clenshaw_curtis_weights(n);
  std::vector<double> wmu_half = clenshaw_curtis_weights(n / 2);
  AngularRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(mu_nodes) * m_phi);
  const double wphi = 2.0 * M_PI / m_phi;
  for (int j = 0; j <= n; ++j) {
    double mu = std::cos(M_PI * j / n);
    double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    for (int l = 0; l < m_phi; ++l) {
      double phi = wphi * l;
      AngularNode nd;
      nd.u = Vec(s * std::cos(phi), s * std::sin(phi), mu);
      nd.w_full = wmu[j] * wphi;
      nd.w_half = (j % 2 == 0 && l % 2 == 0) ? wmu_half[j / 2] * 2.0 * wphi : 0.0;
      rule.nodes.push_back(nd);
    }
  }
  return rule;
}

}  // namespace

const AngularRule& angular_rule(int dim, const QuadConfig& cfg) {
  cfg.validate();
  static std::mutex mtx;
  static std::map<std::tuple<int, int, int, int>, AngularRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_tuple(dim, cfg.theta_order, cfg.mu_order, cfg.phi_order);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  AngularRule rule = (dim == 2) ? build_circle_rule(cfg.theta_order)
                                : build_sphere_rule(cfg.mu_order, cfg.phi_order);
  return cache.emplace(key, std::move(rule)).first->second;
}

std::vector<double> graded_radial_partition(double hi, const QuadConfig& cfg) {
  std::vector<double> pts;
  if (cfg.radial_grading <= 1.0 + 1e-12) return pts;
  double g = cfg.radial_grading;
  int panels = static_cast<int>(std::ceil(std::log(1.0 / cfg.radial_floor) / std::log(g)));
  if (panels > cfg.max_graded_panels) {
    panels = cfg.max_graded_panels;
    g = std::pow(1.0 / cfg.radial_floor, 1.0 / panels);
  }
  pts.reserve(panels);
  double p = hi;
  for (int k = 1; k < panels; ++k) {
    p /= g;
    pts.push_back(p);
  }
  std::reverse(pts.begin(), pts.end());
  return pts;
}

}  // namespace bgk
