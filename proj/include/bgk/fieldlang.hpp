#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "bgk/vec.hpp"

namespace bgk {

// error with a 1-based column; end-of-input errors point one past the source
struct ParseError : std::runtime_error {
  int position;
  ParseError(const std::string& what, int pos)
      : std::runtime_error(what + " (column " + std::to_string(pos) + ")"), position(pos) {}
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parsed scalar expression over x1..x3, r = |x|, literals, + - * / ^ and
// sin cos exp log sqrt abs. Stored in post-order; evaluation runs a small
// fixed stack and allocates nothing (it is called inside quadrature loops).
class Expr {
 public:
  static Expr parse(const std::string& src);

  double eval_raw(const Vec& x) const noexcept;  // NaN/inf propagate
  double eval(const Vec& x) const;               // throws EvalError on non-finite

  std::string pretty() const;  // fully parenthesized canonical form
  int max_var() const { return max_var_; }
  bool uses_r() const { return uses_r_; }

 private:
  enum class Op : unsigned char {
    num, var, rvar, add, sub, mul, div, pow, neg, sin, cos, exp, log, sqrt, abs
  };
  struct Node {
    Op op;
    int a = -1, b = -1;  // child node indices (post-order)
    double value = 0.0;  // literal payload
    int var = 0;         // 1-based coordinate index
  };
  std::vector<Node> nodes_;
  int max_var_ = 0;
  bool uses_r_ = false;

  std::string pretty_node(int idx) const;
  friend class Parser;
};

}  // namespace bgk
