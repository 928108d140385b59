#include "bgk/problem.hpp"

#include <fstream>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

namespace bgk {

using nlohmann::json;

namespace {

Vec parse_vec(const json& j, int dim, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw ProblemError(std::string(what) + " must be an array of length " +
                       std::to_string(dim));
  Vec v;
  for (int k = 0; k < dim; ++k) v[k] = j[k].get<double>();
  return v;
}

Ball parse_ball(const json& j, int dim, const char* what) {
  if (!j.contains("center") || !j.contains("radius"))
    throw ProblemError(std::string(what) + " needs center and radius");
  Ball b;
  b.center = parse_vec(j["center"], dim, what);
  b.radius = j["radius"].get<double>();
  if (b.radius <= 0.0) throw ProblemError(std::string(what) + ": radius must be positive");
  return b;
}

// radial shapes give r(theta) for n=2 or r(theta, phi) for n=3 in the
// expression grammar (variables x1 = theta, x2 = phi)
RadiusFn radius_from_expr(const std::string& src, int dim) {
  auto ex = std::make_shared<Expr>(Expr::parse(src));
  if (ex->max_var() > dim - 1)
    throw ProblemError("radial expression may use x1 (theta)" +
                       std::string(dim == 3 ? " and x2 (phi)" : "") + " only");
  if (dim == 2)
    return [ex](const Vec& u) {
      return ex->eval(Vec(std::atan2(u[1], u[0]), 0.0));
    };
  return [ex](const Vec& u) {
    double theta = std::acos(std::min(1.0, std::max(-1.0, u[2])));
    double phi = std::atan2(u[1], u[0]);
    return ex->eval(Vec(theta, phi, 0.0));
  };
}

StarDomain parse_domain(const json& j) {
  if (!j.contains("dim")) throw ProblemError("domain needs \"dim\"");
  int dim = j["dim"].get<int>();
  if (dim < 2 || dim > 3) throw ProblemError("dim must be 2 or 3");
  if (!j.contains("shape") || !j.contains("center_ball"))
    throw ProblemError("domain needs \"shape\" and \"center_ball\"");
  Ball cb = parse_ball(j["center_ball"], dim, "center_ball");
  const json& s = j["shape"];
  std::string kind = s.value("kind", "");
  if (kind == "ball") {
    return make_ball_domain(parse_ball(s, dim, "ball shape"), cb, dim);
  } else if (kind == "box") {
    if (!s.contains("lo") || !s.contains("hi"))
      throw ProblemError("box shape needs lo and hi");
    return make_box_domain(parse_vec(s["lo"], dim, "box lo"),
                           parse_vec(s["hi"], dim, "box hi"), cb, dim);
  } else if (kind == "radial") {
    if (!s.contains("center") || !s.contains("radius_expr"))
      throw ProblemError("radial shape needs center and radius_expr");
    std::string src = s["radius_expr"].get<std::string>();
    return make_radial_domain(parse_vec(s["center"], dim, "radial center"),
                              radius_from_expr(src, dim), cb, dim, src);
  }
  throw ProblemError("shape kind must be \"ball\", \"box\" or \"radial\"");
}

void parse_quad(const json& j, QuadConfig& cfg) {
  if (j.contains("rel_tol")) cfg.rel_tol = j["rel_tol"].get<double>();
  if (j.contains("abs_tol")) cfg.abs_tol = j["abs_tol"].get<double>();
  if (j.contains("max_subdivisions")) cfg.max_subdivisions = j["max_subdivisions"].get<int>();
  if (j.contains("theta_order")) cfg.theta_order = j["theta_order"].get<int>();
  if (j.contains("mu_order")) cfg.mu_order = j["mu_order"].get<int>();
  if (j.contains("phi_order")) cfg.phi_order = j["phi_order"].get<int>();
  if (j.contains("radial_grading")) cfg.radial_grading = j["radial_grading"].get<double>();
  if (j.contains("radial_floor")) cfg.radial_floor = j["radial_floor"].get<double>();
  cfg.validate();
}

}  // namespace

Problem load_problem_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ProblemError(std::string("problem JSON parse error: ") + e.what());
  }
  Problem p;
  try {
    if (j.contains("domain") && j["domain"].contains("pieces")) {
      const json& dj = j["domain"];
      std::vector<StarDomain> pieces;
      for (const auto& pj : dj["pieces"]) pieces.push_back(parse_domain(pj));
      std::vector<UnionDomain::Overlap> overlaps;
      if (dj.contains("overlaps"))
        for (const auto& oj : dj["overlaps"]) {
          UnionDomain::Overlap ov;
          ov.i = oj.at("i").get<std::size_t>();
          ov.ball = parse_ball(oj.at("ball"), pieces.front().dim, "overlap ball");
          overlaps.push_back(ov);
        }
      p.udomain = make_union_domain(std::move(pieces), std::move(overlaps));
      p.is_union = true;
      p.dim = p.udomain.dim;
    } else if (j.contains("domain")) {
      p.domain = parse_domain(j["domain"]);
      p.dim = p.domain.dim;
    } else {
      throw ProblemError("problem needs a \"domain\"");
    }

    if (!j.contains("F")) throw ProblemError("problem needs \"F\" (expression string)");
    p.f_source = j["F"].get<std::string>();
    auto ex = std::make_shared<Expr>(Expr::parse(p.f_source));
    if (ex->max_var() > p.dim)
      throw ProblemError("F uses x" + std::to_string(ex->max_var()) +
                         " but the problem dimension is " + std::to_string(p.dim));
    p.F.eval = [ex](const Vec& x) { return ex->eval(x); };
    p.F.label = p.f_source;

    if (j.contains("quad")) parse_quad(j["quad"], p.quad);
    if (j.contains("epsilon_schedule")) {
      p.eps_schedule = j["epsilon_schedule"].get<std::vector<double>>();
      EpsilonSchedule check(p.eps_schedule);  // validates
    }
    if (j.contains("BR_factor")) {
      p.br_factor = j["BR_factor"].get<double>();
      if (p.br_factor < 1.0) throw ProblemError("BR_factor must be >= 1");
    }
    if (j.contains("seed")) p.seed = j["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ProblemError(std::string("problem JSON: ") + e.what());
  } catch (const ParseError& e) {
    throw ProblemError(std::string("expression error in problem: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ProblemError(std::string("invalid problem: ") + e.what());
  }
  return p;
}

Problem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProblemError("cannot open problem file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_problem_json(ss.str());
}

PotentialField solve_problem(const Problem& p, long gate_samples) {
  if (p.is_union)
    throw ProblemError("solve_problem: union domains go through solve_union");
  return PotentialField::scaled_solve(p.F, p.domain, p.domain.center_ball, p.quad,
                                      p.br_factor, p.corrupt_kernel, gate_samples);
}

}  // namespace bgk
