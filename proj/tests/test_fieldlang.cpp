#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "bgk/fieldlang.hpp"
#include "bgk/rng.hpp"
#include "golden_runner.hpp"

using namespace bgk;

TEST_SUITE_BEGIN("fieldlang");

TEST_CASE("golden file passes exactly") {
  auto out = golden::run_fieldlang_golden(golden::data_path("fieldlang_golden.txt"));
  CHECK(out.total == 50);
  for (const auto& f : out.failures) MESSAGE(f);
  CHECK(out.failed == 0);
}

TEST_CASE("precedence picks") {
  CHECK(Expr::parse("2+3*4").eval(Vec()) == 14.0);
  CHECK(Expr::parse("2^3^2").eval(Vec()) == 512.0);
  CHECK(Expr::parse("-2^2").eval(Vec()) == -4.0);
}

TEST_CASE("pretty/re-parse round trip evaluates identically") {
  const char* exprs[] = {
      "x1 + 2*x2",          "sin(x1)^2+cos(x2*x1)^2", "-x1^2 + x2/3 - 7",
      "exp(-(r^2))*sqrt(abs(x2)+1)", "2^-x1",          "(x1-x2)*(x1+x2)/(1+r)",
  };
  std::uint64_t idx = 3;
  for (const char* src : exprs) {
    Expr a = Expr::parse(src);
    Expr b = Expr::parse(a.pretty());
    for (int k = 0; k < 1000; ++k) {
      Vec x = halton_in_box(idx, Vec(-2, -2, -2), Vec(2, 2, 2), 3);
      ++idx;
      double va = a.eval_raw(x), vb = b.eval_raw(x);
      if (std::isnan(va) && std::isnan(vb)) continue;
      CHECK(va == doctest::Approx(vb).epsilon(1e-15));
    }
  }
}

TEST_CASE("max_var and r tracking") {
  CHECK(Expr::parse("x1+1").max_var() == 1);
  CHECK(Expr::parse("x3*x2").max_var() == 3);
  CHECK(Expr::parse("r").max_var() == 0);
  CHECK(Expr::parse("r").uses_r());
}

TEST_CASE("flagged evaluation errors") {
  Expr e = Expr::parse("log(x1)");
  CHECK_THROWS_AS(e.eval(Vec(-1, 0)), EvalError);
  CHECK(std::isnan(e.eval_raw(Vec(-1, 0))));
  Expr d = Expr::parse("1/x1");
  CHECK(std::isinf(d.eval_raw(Vec(0, 0))));
  CHECK_THROWS_AS(d.eval(Vec(0, 0)), EvalError);
}

TEST_CASE("error positions carry through exceptions") {
  try {
    Expr::parse("x1 + ");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position == 6);
  }
}

TEST_SUITE_END();
