#pragma once

// Shared loader/runner for the fieldlang golden file; used by both the unit
// suite and the acceptance binary.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bgk/fieldlang.hpp"

namespace golden {

struct Outcome {
  int total = 0;
  int failed = 0;
  std::vector<std::string> failures;
};

inline std::string data_path(const std::string& name) {
  const char* env = std::getenv("BGK_TEST_DATA");
  return (env ? std::string(env) : std::string("tests/data")) + "/" + name;
}

inline Outcome run_fieldlang_golden(const std::string& path) {
  Outcome out;
  std::ifstream in(path);
  if (!in) {
    out.failed = 1;
    out.failures.push_back("cannot open golden file " + path);
    return out;
  }
  std::string line;
  int lineno = 0;
  const std::string sep = " ;; ";
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto p1 = line.find(sep);
    if (p1 == std::string::npos) continue;
    std::string expr = line.substr(0, p1);
    std::string rest = line.substr(p1 + sep.size());
    auto p2 = rest.find(sep);
    std::string kind = (p2 == std::string::npos) ? rest : rest.substr(0, p2);
    std::string payload = (p2 == std::string::npos) ? "" : rest.substr(p2 + sep.size());
    ++out.total;
    auto fail = [&](const std::string& why) {
      ++out.failed;
      out.failures.push_back("line " + std::to_string(lineno) + " [" + expr + "]: " + why);
    };

    if (kind == "ast") {
      try {
        std::string got = bgk::Expr::parse(expr).pretty();
        if (got != payload) fail("pretty '" + got + "' != '" + payload + "'");
      } catch (const std::exception& e) {
        fail(std::string("unexpected parse error: ") + e.what());
      }
    } else if (kind == "val") {
      auto p3 = payload.find(sep);
      if (p3 == std::string::npos) {
        fail("bad val case");
        continue;
      }
      std::istringstream ps(payload.substr(0, p3));
      bgk::Vec x;
      ps >> x[0] >> x[1] >> x[2];
      double want = std::strtod(payload.substr(p3 + sep.size()).c_str(), nullptr);
      try {
        double got = bgk::Expr::parse(expr).eval(x);
        double tol = std::max(1e-12, 1e-12 * std::abs(want));
        if (!(std::abs(got - want) <= tol))
          fail("value " + std::to_string(got) + " != " + std::to_string(want));
      } catch (const std::exception& e) {
        fail(std::string("unexpected error: ") + e.what());
      }
    } else if (kind == "err") {
      int want_col = std::atoi(payload.c_str());
      try {
        (void)bgk::Expr::parse(expr);
        fail("expected a parse error, got none");
      } catch (const bgk::ParseError& e) {
        if (e.position != want_col)
          fail("error column " + std::to_string(e.position) + " != " +
               std::to_string(want_col) + " (" + e.what() + ")");
      } catch (const std::exception& e) {
        fail(std::string("wrong error type: ") + e.what());
      }
    } else {
      fail("unknown case kind '" + kind + "'");
    }
  }
  return out;
}

}  // namespace golden
