#include "bgk/fieldlang.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

namespace bgk {

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  Tok kind = Tok::end;
  int pos = 0;  // 1-based column of the first character
  double value = 0.0;
  std::string text;
};

struct Lexer {
  const std::string& src;
  std::size_t i = 0;

  explicit Lexer(const std::string& s) : src(s) {}

  Token next() {
    while (i < src.size() && std::isspace(static_cast<unsigned char>(src[i]))) ++i;
    Token t;
    t.pos = static_cast<int>(i) + 1;
    if (i >= src.size()) return t;
    char c = src[i];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t start = i;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      if (i < src.size() && src[i] == '.') {
        ++i;
        while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t mark = i;
        ++i;
        if (i < src.size() && (src[i] == '+' || src[i] == '-')) ++i;
        if (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
          while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        } else {
          i = mark;  // not an exponent, leave 'e' for the ident lexer
        }
      }
      t.kind = Tok::number;
      t.text = src.substr(start, i - start);
      t.value = std::strtod(t.text.c_str(), nullptr);
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
        ++i;
      t.kind = Tok::ident;
      t.text = src.substr(start, i - start);
      return t;
    }
    ++i;
    switch (c) {
      case '+': t.kind = Tok::plus; return t;
      case '-': t.kind = Tok::minus; return t;
      case '*': t.kind = Tok::star; return t;
      case '/': t.kind = Tok::slash; return t;
      case '^': t.kind = Tok::caret; return t;
      case '(': t.kind = Tok::lparen; return t;
      case ')': t.kind = Tok::rparen; return t;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", t.pos);
    }
  }
};

}  // namespace

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) { advance(); }

  Expr run() {
    int root = expr();
    if (cur_.kind != Tok::end) throw ParseError("unexpected trailing input", cur_.pos);
    (void)root;  // post-order: root is the last node
    return std::move(out_);
  }

 private:
  Lexer lex_;
  Token cur_;
  Expr out_;

  using Op = Expr::Op;

  void advance() { cur_ = lex_.next(); }

  int push(Expr::Node n) {
    out_.nodes_.push_back(n);
    return static_cast<int>(out_.nodes_.size()) - 1;
  }

  int expr() {
    int lhs = term();
    while (cur_.kind == Tok::plus || cur_.kind == Tok::minus) {
      Op op = (cur_.kind == Tok::plus) ? Op::add : Op::sub;
      advance();
      int rhs = term();
      lhs = push({op, lhs, rhs});
    }
    return lhs;
  }

  int term() {
    int lhs = factor();
    while (cur_.kind == Tok::star || cur_.kind == Tok::slash) {
      Op op = (cur_.kind == Tok::star) ? Op::mul : Op::div;
      advance();
      int rhs = factor();
      lhs = push({op, lhs, rhs});
    }
    return lhs;
  }

  // unary minus binds looser than ^, so -2^2 parses as -(2^2)
  int factor() {
    if (cur_.kind == Tok::minus) {
      advance();
      int inner = factor();
      return push({Op::neg, inner, -1});
    }
    return power();
  }

  int power() {
    int base = atom();
    if (cur_.kind == Tok::caret) {
      advance();
      int e = pexp();
      return push({Op::pow, base, e});
    }
    return base;
  }

  // exponent: right-associative, unary minus allowed (2^-3, 2^3^2)
  int pexp() {
    if (cur_.kind == Tok::minus) {
      advance();
      int inner = pexp();
      return push({Op::neg, inner, -1});
    }
    return power();
  }

  int atom() {
    switch (cur_.kind) {
      case Tok::number: {
        Expr::Node n{Op::num, -1, -1};
        n.value = cur_.value;
        advance();
        return push(n);
      }
      case Tok::lparen: {
        advance();
        int inner = expr();
        if (cur_.kind != Tok::rparen) throw ParseError("expected ')'", cur_.pos);
        advance();
        return inner;
      }
      case Tok::ident:
        return ident_atom();
      case Tok::end:
        throw ParseError("expected operand, found end of input", cur_.pos);
      default:
        throw ParseError("expected operand", cur_.pos);
    }
  }

  int ident_atom() {
    const std::string name = cur_.text;
    const int pos = cur_.pos;
    advance();
    if (name == "r") {
      out_.uses_r_ = true;
      return push({Op::rvar, -1, -1});
    }
    if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '3') {
      Expr::Node n{Op::var, -1, -1};
      n.var = name[1] - '0';
      out_.max_var_ = std::max(out_.max_var_, n.var);
      return push(n);
    }
    Op op;
    if (name == "sin") op = Op::sin;
    else if (name == "cos") op = Op::cos;
    else if (name == "exp") op = Op::exp;
    else if (name == "log") op = Op::log;
    else if (name == "sqrt") op = Op::sqrt;
    else if (name == "abs") op = Op::abs;
    else throw ParseError("unknown identifier '" + name + "'", pos);
    if (cur_.kind != Tok::lparen)
      throw ParseError("expected '(' after function name", cur_.pos);
    advance();
    int arg = expr();
    if (cur_.kind != Tok::rparen) throw ParseError("expected ')'", cur_.pos);
    advance();
    return push({op, arg, -1});
  }
};

Expr Expr::parse(const std::string& src) { return Parser(src).run(); }

double Expr::eval_raw(const Vec& x) const noexcept {
  double stack[64];
  int sp = 0;
  for (const Node& n : nodes_) {
    double v = 0.0;
    switch (n.op) {
      case Op::num: v = n.value; break;
      case Op::var: v = x[static_cast<std::size_t>(n.var - 1)]; break;
      case Op::rvar: v = x.norm(); break;
      case Op::add: v = stack[sp - 2] + stack[sp - 1]; sp -= 2; break;
      case Op::sub: v = stack[sp - 2] - stack[sp - 1]; sp -= 2; break;
      case Op::mul: v = stack[sp - 2] * stack[sp - 1]; sp -= 2; break;
      case Op::div: v = stack[sp - 2] / stack[sp - 1]; sp -= 2; break;
      case Op::pow: v = std::pow(stack[sp - 2], stack[sp - 1]); sp -= 2; break;
      case Op::neg: v = -stack[sp - 1]; sp -= 1; break;
      case Op::sin: v = std::sin(stack[sp - 1]); sp -= 1; break;
      case Op::cos: v = std::cos(stack[sp - 1]); sp -= 1; break;
      case Op::exp: v = std::exp(stack[sp - 1]); sp -= 1; break;
      case Op::log: v = std::log(stack[sp - 1]); sp -= 1; break;
      case Op::sqrt: v = std::sqrt(stack[sp - 1]); sp -= 1; break;
      case Op::abs: v = std::abs(stack[sp - 1]); sp -= 1; break;
    }
    if (sp >= 63) return std::nan("");
    stack[sp++] = v;
  }
  return sp > 0 ? stack[sp - 1] : std::nan("");
}

double Expr::eval(const Vec& x) const {
  double v = eval_raw(x);
  if (!std::isfinite(v))
    throw EvalError("expression evaluated to a non-finite value at (" +
                    std::to_string(x[0]) + ", " + std::to_string(x[1]) + ", " +
                    std::to_string(x[2]) + ")");
  return v;
}

std::string Expr::pretty_node(int idx) const {
  const Node& n = nodes_[static_cast<std::size_t>(idx)];
  auto bin = [&](const char* op) {
    return "(" + pretty_node(n.a) + " " + op + " " + pretty_node(n.b) + ")";
  };
  auto fun = [&](const char* name) { return std::string(name) + "(" + pretty_node(n.a) + ")"; };
  switch (n.op) {
    case Op::num: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      return std::string(buf);
    }
    case Op::var: return "x" + std::to_string(n.var);
    case Op::rvar: return "r";
    case Op::add: return bin("+");
    case Op::sub: return bin("-");
    case Op::mul: return bin("*");
    case Op::div: return bin("/");
    case Op::pow: return bin("^");
    case Op::neg: return "(-" + pretty_node(n.a) + ")";
    case Op::sin: return fun("sin");
    case Op::cos: return fun("cos");
    case Op::exp: return fun("exp");
    case Op::log: return fun("log");
    case Op::sqrt: return fun("sqrt");
    case Op::abs: return fun("abs");
  }
  return "?";
}

std::string Expr::pretty() const {
  if (nodes_.empty()) return "";
  return pretty_node(static_cast<int>(nodes_.size()) - 1);
}

}  // namespace bgk
