// bgk: evaluate the divergence-equation potential, run the structural checks,
// study the epsilon regularization, and estimate Dini moduli. Problems are
// JSON files; see README.md and docs/fieldlang.md for the formats.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bgk/decomposition.hpp"
#include "bgk/dini.hpp"
#include "bgk/kernel.hpp"
#include "bgk/parallel.hpp"
#include "bgk/problem.hpp"
#include "bgk/verify.hpp"

using nlohmann::json;

namespace {

constexpr int kExitChecksFailed = 1;
constexpr int kExitUsage = 2;

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Output {
  std::string path;  // empty = stdout
  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    out << text;
  }
};

std::vector<bgk::Vec> parse_points(const std::string& spec, int dim) {
  std::vector<bgk::Vec> pts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ';')) {
    if (tok.empty()) continue;
    bgk::Vec p;
    std::stringstream ps(tok);
    std::string c;
    int k = 0;
    while (std::getline(ps, c, ',')) {
      if (k >= dim) throw std::runtime_error("point has too many coordinates: " + tok);
      p[k++] = std::stod(c);
    }
    if (k != dim) throw std::runtime_error("point has too few coordinates: " + tok);
    pts.push_back(p);
  }
  if (pts.empty()) throw std::runtime_error("no points given");
  return pts;
}

// "grid:NxN[:margin]" over the domain bounding box, margin relative per axis
std::vector<bgk::Vec> make_grid(const std::string& spec, const bgk::Problem& p) {
  std::string body = spec.substr(5);  // skip "grid:"
  double margin = 0.25;
  auto colon = body.find(':');
  if (colon != std::string::npos) {
    margin = std::stod(body.substr(colon + 1));
    body = body.substr(0, colon);
  }
  auto x = body.find('x');
  if (x == std::string::npos) throw std::runtime_error("grid syntax: grid:NxN[:margin]");
  int nx = std::stoi(body.substr(0, x));
  int ny = std::stoi(body.substr(x + 1));
  if (nx < 1 || ny < 1) throw std::runtime_error("grid sizes must be >= 1");

  bgk::Vec lo, hi;
  if (p.is_union)
    bgk::bounding_box(p.udomain, lo, hi);
  else
    bgk::bounding_box(p.domain, lo, hi);
  for (int k = 0; k < p.dim; ++k) {
    double half = 0.5 * (hi[k] - lo[k]);
    double c = 0.5 * (hi[k] + lo[k]);
    lo[k] = c - half * (1.0 + margin);
    hi[k] = c + half * (1.0 + margin);
  }
  std::vector<bgk::Vec> pts;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      bgk::Vec q;
      q[0] = nx == 1 ? 0.5 * (lo[0] + hi[0]) : lo[0] + (hi[0] - lo[0]) * i / (nx - 1);
      q[1] = ny == 1 ? 0.5 * (lo[1] + hi[1]) : lo[1] + (hi[1] - lo[1]) * j / (ny - 1);
      pts.push_back(q);
    }
  return pts;
}

json report_to_json(const bgk::CheckReport& r) {
  return json{{"name", r.name},       {"passed", r.passed},   {"measured", r.measured},
              {"threshold", r.threshold}, {"samples", r.samples}, {"notes", r.notes}};
}

int cmd_solve(const bgk::Problem& prob, const std::string& points_spec, bool as_json,
              const Output& out) {
  std::vector<bgk::Vec> pts = (points_spec.rfind("grid:", 0) == 0)
                                  ? make_grid(points_spec, prob)
                                  : parse_points(points_spec, prob.dim);

  struct Row {
    bgk::Vec x, v;
    double div;
  };
  std::vector<Row> rows(pts.size());

  if (prob.is_union) {
    bgk::CompositeField sol = bgk::solve_union(prob.F, prob.udomain, prob.quad, prob.br_factor);
    bgk::parallel_for(pts.size(), [&](std::size_t i) {
      rows[i].x = pts[i];
      rows[i].v = sol.v(pts[i]);
      rows[i].div = sol.inside(pts[i]) ? sol.divergence(pts[i]) : 0.0;
    });
  } else {
    bgk::PotentialField sol = bgk::solve_problem(prob);
    bgk::parallel_for(pts.size(), [&](std::size_t i) {
      rows[i].x = pts[i];
      rows[i].v = sol.v(pts[i]);
      rows[i].div = sol.inside(pts[i]) ? sol.divergence(pts[i]) : 0.0;
    });
  }

  std::ostringstream os;
  if (as_json) {
    json arr = json::array();
    for (const auto& r : rows) {
      json rec;
      for (int k = 0; k < prob.dim; ++k) rec["x"].push_back(r.x[k]);
      for (int k = 0; k < prob.dim; ++k) rec["v"].push_back(r.v[k]);
      rec["div"] = r.div;
      arr.push_back(rec);
    }
    os << arr.dump(2) << "\n";
  } else {
    for (int k = 0; k < prob.dim; ++k) os << "x" << k + 1 << ",";
    for (int k = 0; k < prob.dim; ++k) os << "v" << k + 1 << ",";
    os << "div\n";
    for (const auto& r : rows) {
      for (int k = 0; k < prob.dim; ++k) os << num17(r.x[k]) << ",";
      for (int k = 0; k < prob.dim; ++k) os << num17(r.v[k]) << ",";
      os << num17(r.div) << "\n";
    }
  }
  out.write(os.str());
  return 0;
}

int cmd_verify(const bgk::Problem& prob, const std::string& level, bool as_csv,
               const Output& out) {
  bgk::CheckLevel lvl = (level == "full") ? bgk::CheckLevel::full : bgk::CheckLevel::quick;
  std::vector<bgk::CheckReport> reports = bgk::check_suite(prob, lvl);
  bool all_ok = true;
  std::ostringstream os;
  if (as_csv) {
    os << "name,passed,measured,threshold,samples,notes\n";
    for (const auto& r : reports) {
      os << r.name << "," << (r.passed ? 1 : 0) << "," << num17(r.measured) << ","
         << num17(r.threshold) << "," << r.samples << ",\"" << r.notes << "\"\n";
      all_ok = all_ok && r.passed;
    }
  } else {
    json arr = json::array();
    for (const auto& r : reports) {
      arr.push_back(report_to_json(r));
      all_ok = all_ok && r.passed;
    }
    os << arr.dump(2) << "\n";
  }
  out.write(os.str());
  return all_ok ? 0 : kExitChecksFailed;
}

int cmd_convergence(const bgk::Problem& prob, const std::string& schedule_spec,
                    const std::string& probes_spec, bool as_json, const Output& out) {
  std::vector<double> schedule = prob.eps_schedule;
  if (!schedule_spec.empty()) {
    schedule.clear();
    std::stringstream ss(schedule_spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) if (!tok.empty()) schedule.push_back(std::stod(tok));
    if (schedule.empty()) throw std::runtime_error("empty epsilon schedule");
  }
  std::vector<bgk::Vec> probes = probes_spec.empty()
                                     ? bgk::default_probes(prob, 3)
                                     : parse_points(probes_spec, prob.dim);
  bgk::ConvergenceTable table = bgk::convergence_study(prob, schedule, probes);

  std::ostringstream os;
  if (as_json) {
    json arr = json::array();
    for (const auto& row : table.rows)
      arr.push_back(json{{"epsilon", row.eps},
                         {"probe_index", row.probe},
                         {"residual", row.residual},
                         {"skipped", row.skipped},
                         {"note", row.note}});
    json doc{{"rows", arr}, {"monotone", table.monotone}};
    os << doc.dump(2) << "\n";
  } else {
    os << "epsilon,probe_index,residual\n";
    for (const auto& row : table.rows) {
      if (row.skipped) continue;
      os << num17(row.eps) << "," << row.probe << "," << num17(row.residual) << "\n";
    }
  }
  out.write(os.str());
  return 0;
}

int cmd_dini(const bgk::Problem& prob, long n_pairs, bool as_csv, const Output& out) {
  const bgk::StarDomain& d = prob.is_union ? prob.udomain.pieces.front() : prob.domain;
  std::vector<double> rhos = bgk::default_rho_grid(bgk::diameter(d));
  bgk::ModulusEstimate est = bgk::modulus(prob.F, d, rhos, n_pairs, prob.seed);
  double integral = bgk::dini_integral(est);
  double maxf = bgk::grid_max_abs(prob.F, d, prob.seed);
  bgk::DiniVerdict verdict = bgk::dini_verdict(est);

  std::ostringstream os;
  if (as_csv) {
    os << "rho,omega\n";
    for (std::size_t k = 0; k < est.rhos.size(); ++k)
      os << num17(est.rhos[k]) << "," << num17(est.omegas[k]) << "\n";
    os << "# dini_integral," << num17(integral) << "\n";
    os << "# cd_norm_lower_bound," << num17(maxf + integral) << "\n";
    os << "# verdict," << bgk::to_string(verdict) << "\n";
  } else {
    json tab = json::array();
    for (std::size_t k = 0; k < est.rhos.size(); ++k)
      tab.push_back(json{{"rho", est.rhos[k]}, {"omega", est.omegas[k]}});
    json doc{{"modulus", tab},
             {"dini_integral", integral},
             {"rho_min", est.rhos.front()},
             {"cd_norm_lower_bound", maxf + integral},
             {"verdict", bgk::to_string(verdict)}};
    os << doc.dump(2) << "\n";
  }
  out.write(os.str());
  return 0;
}

int cmd_kernel_check(const bgk::Problem& prob, long n_pairs, bool as_csv, const Output& out) {
  bgk::PotentialField pf = bgk::solve_problem(prob);
  bgk::KernelContext ctx = pf.ctx();
  bgk::KernelDiagnostics diag =
      bgk::measure_diagnostics(ctx, n_pairs, pf.volume_config(), prob.seed);
  std::ostringstream os;
  if (as_csv) {
    os << "lemma4_constant,thm9_M,g_constant,sphere_mean_residual,homogeneity_residual\n"
       << num17(diag.lemma4_constant) << "," << num17(diag.thm9_M) << ","
       << num17(diag.g_constant) << "," << num17(diag.sphere_mean_residual) << ","
       << num17(diag.homogeneity_residual) << "\n";
  } else {
    json doc{{"lemma4_constant", diag.lemma4_constant},
             {"thm9_M", diag.thm9_M},
             {"g_constant", diag.g_constant},
             {"sphere_mean_residual", diag.sphere_mean_residual},
             {"homogeneity_residual", diag.homogeneity_residual}};
    os << doc.dump(2) << "\n";
  }
  out.write(os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bogovskii potential solver and verification harness"};
  app.require_subcommand(1);

  std::string problem_path, out_path, points_spec = "grid:11x11:0.25";
  std::string level = "quick", schedule_spec, probes_spec;
  bool want_json = false, want_csv = false, corrupt = false;
  long pairs = 10000;
  std::uint64_t seed_override = 0;
  bool have_seed = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("problem", problem_path, "problem JSON file")->required();
    cmd->add_option("-o,--out", out_path, "output file (default stdout)");
    cmd->add_flag("--json", want_json, "JSON output");
    cmd->add_flag("--csv", want_csv, "CSV output");
    cmd->add_option("--seed", seed_override, "override the problem seed")
        ->each([&](const std::string&) { have_seed = true; });
  };

  CLI::App* solve = app.add_subcommand("solve", "evaluate v and div v at points");
  add_common(solve);
  solve->add_option("--points", points_spec,
                    "\"x,y;x,y;...\" or grid:NxN[:margin] (default grid:11x11:0.25)");

  CLI::App* verify = app.add_subcommand("verify", "run the structural check suite");
  add_common(verify);
  verify->add_option("--level", level, "quick | full")->check(CLI::IsMember({"quick", "full"}));
  verify->add_flag("--corrupt-kernel", corrupt,
                   "debug: drop the grad-psi kernel term (the suite must then fail)");

  CLI::App* conv = app.add_subcommand("convergence", "epsilon convergence study");
  add_common(conv);
  conv->add_option("--schedule", schedule_spec, "comma-separated epsilons, decreasing");
  conv->add_option("--probes", probes_spec, "probe points \"x,y;x,y\"");

  CLI::App* dini = app.add_subcommand("dini", "modulus of continuity / Dini report");
  add_common(dini);
  dini->add_option("--pairs", pairs, "sample pairs per rho (default 10000)");

  CLI::App* kcheck = app.add_subcommand("kernel-check", "measured kernel constants");
  add_common(kcheck);
  kcheck->add_option("--pairs", pairs, "sample pairs (default 10000)");
  kcheck->add_flag("--corrupt-kernel", corrupt, "debug: drop the grad-psi kernel term");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    bgk::Problem prob = bgk::load_problem_file(problem_path);
    if (have_seed) prob.seed = seed_override;
    prob.corrupt_kernel = corrupt;
    Output out{out_path};

    if (solve->parsed()) return cmd_solve(prob, points_spec, want_json, out);
    if (verify->parsed()) return cmd_verify(prob, level, want_csv, out);
    if (conv->parsed()) return cmd_convergence(prob, schedule_spec, probes_spec, want_json, out);
    if (dini->parsed()) return cmd_dini(prob, pairs, want_csv, out);
    if (kcheck->parsed()) return cmd_kernel_check(prob, pairs, want_csv, out);
  } catch (const bgk::GateError& e) {
    std::cerr << "geometry gate: " << e.what() << "\n";
    return kExitUsage;
  } catch (const bgk::ProblemError& e) {
    std::cerr << "problem error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
