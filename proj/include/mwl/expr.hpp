#pragma once

#include <cctype>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mwl/errors.hpp"
#include "mwl/jet.hpp"

namespace mwl {

// A small expression language for defining immersion components in config
// files. Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-'? power
//   power  := atom ('^' factor)?          ('^' is right-associative)
//   atom   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
// Variables u1..u9, constants pi and e, functions sin cos tan exp log sqrt
// pow atan.

struct Span {
  size_t begin = 0;
  size_t end = 0;
};

enum class NodeKind { Number, Variable, Ident, Unary, Binary, Call };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct Ast;
using AstPtr = std::shared_ptr<const Ast>;

struct Ast {
  NodeKind kind;
  Span span;
  double number = 0.0;
  int var_index = 0;     // 1-based, Variable nodes
  std::string name;      // Ident / Call nodes
  BinaryOp bop = BinaryOp::Add;
  std::vector<AstPtr> children;  // Unary: 1, Binary: 2, Call: arity
};

struct ParseError {
  size_t offset = 0;
  std::string expected;
  std::string found;

  std::string message() const {
    return "parse error at offset " + std::to_string(offset) + ": expected " +
           expected + ", found " + found;
  }
};

using ParseResult = std::variant<AstPtr, ParseError>;

struct ValidationIssue {
  Span span;
  std::string message;
};

namespace expr_detail {

struct FunctionInfo {
  const char* name;
  int arity;
};

inline const std::vector<FunctionInfo>& function_table() {
  static const std::vector<FunctionInfo> table = {
      {"sin", 1}, {"cos", 1}, {"tan", 1},  {"exp", 1},
      {"log", 1}, {"sqrt", 1}, {"pow", 2}, {"atan", 1}};
  return table;
}

inline const FunctionInfo* find_function(const std::string& name) {
  for (const auto& f : function_table())
    if (name == f.name) return &f;
  return nullptr;
}

struct Parser {
  std::string_view src;
  size_t pos = 0;
  ParseError error;
  bool failed = false;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
      ++pos;
  }

  std::string found_here() const {
    if (pos >= src.size()) return "end of input";
    size_t e = pos;
    while (e < src.size() && e < pos + 12 && !std::isspace(static_cast<unsigned char>(src[e])))
      ++e;
    return "'" + std::string(src.substr(pos, e - pos)) + "'";
  }

  AstPtr fail(const std::string& expected) {
    if (!failed) {
      failed = true;
      error = ParseError{pos, expected, found_here()};
    }
    return nullptr;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  AstPtr make(Ast node, size_t begin) const {
    node.span = Span{begin, pos};
    return std::make_shared<Ast>(std::move(node));
  }

  AstPtr parse_expr() {
    skip_ws();
    size_t begin = pos;
    AstPtr lhs = parse_term();
    if (!lhs) return nullptr;
    for (;;) {
      skip_ws();
      if (eat('+')) {
        AstPtr rhs = parse_term();
        if (!rhs) return nullptr;
        Ast n{NodeKind::Binary};
        n.bop = BinaryOp::Add;
        n.children = {lhs, rhs};
        lhs = make(std::move(n), begin);
      } else if (eat('-')) {
        AstPtr rhs = parse_term();
        if (!rhs) return nullptr;
        Ast n{NodeKind::Binary};
        n.bop = BinaryOp::Sub;
        n.children = {lhs, rhs};
        lhs = make(std::move(n), begin);
      } else {
        return lhs;
      }
    }
  }

  AstPtr parse_term() {
    skip_ws();
    size_t begin = pos;
    AstPtr lhs = parse_factor();
    if (!lhs) return nullptr;
    for (;;) {
      skip_ws();
      if (eat('*')) {
        AstPtr rhs = parse_factor();
        if (!rhs) return nullptr;
        Ast n{NodeKind::Binary};
        n.bop = BinaryOp::Mul;
        n.children = {lhs, rhs};
        lhs = make(std::move(n), begin);
      } else if (eat('/')) {
        AstPtr rhs = parse_factor();
        if (!rhs) return nullptr;
        Ast n{NodeKind::Binary};
        n.bop = BinaryOp::Div;
        n.children = {lhs, rhs};
        lhs = make(std::move(n), begin);
      } else {
        return lhs;
      }
    }
  }

  // Unary minus binds looser than '^': -u2^2 parses as -(u2^2).
  AstPtr parse_factor() {
    skip_ws();
    size_t begin = pos;
    if (eat('-')) {
      AstPtr inner = parse_power();
      if (!inner) return nullptr;
      Ast n{NodeKind::Unary};
      n.children = {inner};
      return make(std::move(n), begin);
    }
    return parse_power();
  }

  AstPtr parse_power() {
    skip_ws();
    size_t begin = pos;
    AstPtr base = parse_atom();
    if (!base) return nullptr;
    skip_ws();
    if (eat('^')) {
      AstPtr exponent = parse_factor();  // right-associative
      if (!exponent) return nullptr;
      Ast n{NodeKind::Binary};
      n.bop = BinaryOp::Pow;
      n.children = {base, exponent};
      return make(std::move(n), begin);
    }
    return base;
  }

  AstPtr parse_atom() {
    skip_ws();
    size_t begin = pos;
    if (pos >= src.size()) return fail("a number, identifier or '('");
    char c = src[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_ident_or_call();
    if (eat('(')) {
      AstPtr inner = parse_expr();
      if (!inner) return nullptr;
      if (!eat(')')) return fail("')'");
      Ast n = *inner;
      n.span = Span{begin, pos};
      return std::make_shared<Ast>(std::move(n));
    }
    return fail("a number, identifier or '('");
  }

  // Decimal with optional fraction and exponent; no hex, no underscores.
  AstPtr parse_number() {
    size_t begin = pos;
    size_t p = pos;
    while (p < src.size() && std::isdigit(static_cast<unsigned char>(src[p]))) ++p;
    if (p < src.size() && src[p] == '.') {
      ++p;
      while (p < src.size() && std::isdigit(static_cast<unsigned char>(src[p]))) ++p;
    }
    if (p > pos && p < src.size() && (src[p] == 'e' || src[p] == 'E')) {
      size_t q = p + 1;
      if (q < src.size() && (src[q] == '+' || src[q] == '-')) ++q;
      if (q < src.size() && std::isdigit(static_cast<unsigned char>(src[q]))) {
        p = q;
        while (p < src.size() && std::isdigit(static_cast<unsigned char>(src[p]))) ++p;
      }
    }
    if (p == pos || (p == pos + 1 && src[pos] == '.')) return fail("a number");
    double value = 0.0;
    try {
      value = std::stod(std::string(src.substr(pos, p - pos)));
    } catch (const std::exception&) {
      return fail("a valid number literal");
    }
    pos = p;
    Ast n{NodeKind::Number};
    n.number = value;
    return make(std::move(n), begin);
  }

  AstPtr parse_ident_or_call() {
    size_t begin = pos;
    size_t p = pos;
    while (p < src.size() && (std::isalnum(static_cast<unsigned char>(src[p])) || src[p] == '_'))
      ++p;
    std::string name(src.substr(pos, p - pos));
    pos = p;
    skip_ws();
    if (pos < src.size() && src[pos] == '(') {
      ++pos;
      Ast n{NodeKind::Call};
      n.name = name;
      for (;;) {
        AstPtr arg = parse_expr();
        if (!arg) return nullptr;
        n.children.push_back(arg);
        skip_ws();
        if (eat(',')) continue;
        if (eat(')')) break;
        return fail("')'");
      }
      return make(std::move(n), begin);
    }
    if (name.size() == 2 && name[0] == 'u' && name[1] >= '1' && name[1] <= '9') {
      Ast n{NodeKind::Variable};
      n.var_index = name[1] - '0';
      return make(std::move(n), begin);
    }
    if (name == "pi") {
      Ast n{NodeKind::Number};
      n.number = M_PI;
      return make(std::move(n), begin);
    }
    if (name == "e") {
      Ast n{NodeKind::Number};
      n.number = M_E;
      return make(std::move(n), begin);
    }
    Ast n{NodeKind::Ident};
    n.name = name;
    return make(std::move(n), begin);
  }
};

}  // namespace expr_detail

inline ParseResult parse(std::string_view source) {
  expr_detail::Parser p{source};
  AstPtr ast = p.parse_expr();
  if (!ast) return p.error;
  p.skip_ws();
  if (p.pos != source.size())
    return ParseError{p.pos, "end of input", p.found_here()};
  return ast;
}

inline void validate_walk(const AstPtr& node, int chart_dim,
                          std::vector<ValidationIssue>& out) {
  switch (node->kind) {
    case NodeKind::Variable:
      if (node->var_index > chart_dim)
        out.push_back({node->span,
                       "u" + std::to_string(node->var_index) +
                           " exceeds chart dimension " + std::to_string(chart_dim)});
      break;
    case NodeKind::Ident:
      out.push_back({node->span, "unknown identifier '" + node->name + "'"});
      break;
    case NodeKind::Call: {
      const auto* fn = expr_detail::find_function(node->name);
      if (!fn) {
        out.push_back({node->span, "unknown function '" + node->name + "'"});
      } else if (static_cast<int>(node->children.size()) != fn->arity) {
        out.push_back({node->span,
                       "function '" + node->name + "' expects " +
                           std::to_string(fn->arity) + " argument(s), got " +
                           std::to_string(node->children.size())});
      }
      break;
    }
    default:
      break;
  }
  for (const auto& c : node->children) validate_walk(c, chart_dim, out);
}

inline std::vector<ValidationIssue> validate(const AstPtr& ast, int chart_dim) {
  std::vector<ValidationIssue> issues;
  validate_walk(ast, chart_dim, issues);
  return issues;
}

namespace expr_detail {

template <class T>
struct Ops;

template <>
struct Ops<double> {
  static double constant(double c, int) { return c; }
  static double variable(const Vec& point, int idx0) { return point[idx0]; }
  static double neg(double x) { return -x; }
  static double add(double a, double b) { return a + b; }
  static double sub(double a, double b) { return a - b; }
  static double mul(double a, double b) { return a * b; }
  static double div(double a, double b) {
    if (b == 0.0) throw EvalError("division by zero");
    return a / b;
  }
  static double call(const std::string& f, const std::vector<double>& a) {
    if (f == "sin") return std::sin(a[0]);
    if (f == "cos") return std::cos(a[0]);
    if (f == "tan") return std::tan(a[0]);
    if (f == "exp") return std::exp(a[0]);
    if (f == "atan") return std::atan(a[0]);
    if (f == "log") {
      if (!(a[0] > 0.0)) throw EvalError("log of non-positive value");
      return std::log(a[0]);
    }
    if (f == "sqrt") {
      if (!(a[0] > 0.0)) throw EvalError("sqrt of non-positive value");
      return std::sqrt(a[0]);
    }
    if (f == "pow") {
      if (a[1] == std::floor(a[1])) return std::pow(a[0], a[1]);
      if (!(a[0] > 0.0))
        throw EvalError("pow with non-positive base and non-integer exponent");
      return std::pow(a[0], a[1]);
    }
    throw EvalError("unknown function '" + f + "'");
  }
  static double pw(double a, double b) {
    return call("pow", {a, b});
  }
};

template <>
struct Ops<Jet> {
  static Jet constant(double c, int dim) { return Jet::constant(c, dim); }
  static Jet variable(const Vec& point, int idx0) {
    return Jet::variable(point[idx0], idx0, static_cast<int>(point.size()));
  }
  static Jet neg(const Jet& x) { return -x; }
  static Jet add(const Jet& a, const Jet& b) { return a + b; }
  static Jet sub(const Jet& a, const Jet& b) { return a - b; }
  static Jet mul(const Jet& a, const Jet& b) { return a * b; }
  static Jet div(const Jet& a, const Jet& b) { return a / b; }
  static Jet call(const std::string& f, const std::vector<Jet>& a) {
    if (f == "sin") return sin(a[0]);
    if (f == "cos") return cos(a[0]);
    if (f == "tan") return tan(a[0]);
    if (f == "exp") return exp(a[0]);
    if (f == "atan") return atan(a[0]);
    if (f == "log") return log(a[0]);
    if (f == "sqrt") return sqrt(a[0]);
    if (f == "pow") return pow(a[0], a[1]);
    throw EvalError("unknown function '" + f + "'");
  }
  static Jet pw(const Jet& a, const Jet& b) { return pow(a, b); }
};

template <class T>
T eval_node(const Ast& node, const Vec& point, std::string_view src) {
  using O = Ops<T>;
  const int dim = static_cast<int>(point.size());
  try {
    switch (node.kind) {
      case NodeKind::Number:
        return O::constant(node.number, dim);
      case NodeKind::Variable:
        if (node.var_index > dim)
          throw EvalError("variable u" + std::to_string(node.var_index) +
                          " out of range");
        return O::variable(point, node.var_index - 1);
      case NodeKind::Unary:
        return O::neg(eval_node<T>(*node.children[0], point, src));
      case NodeKind::Binary: {
        T a = eval_node<T>(*node.children[0], point, src);
        T b = eval_node<T>(*node.children[1], point, src);
        switch (node.bop) {
          case BinaryOp::Add: return O::add(a, b);
          case BinaryOp::Sub: return O::sub(a, b);
          case BinaryOp::Mul: return O::mul(a, b);
          case BinaryOp::Div: return O::div(a, b);
          case BinaryOp::Pow: return O::pw(a, b);
        }
        throw EvalError("corrupt binary node");
      }
      case NodeKind::Call: {
        std::vector<T> args;
        args.reserve(node.children.size());
        for (const auto& c : node.children)
          args.push_back(eval_node<T>(*c, point, src));
        return O::call(node.name, args);
      }
      case NodeKind::Ident:
        throw EvalError("unknown identifier '" + node.name + "'");
    }
  } catch (EvalError& e) {
    // Attach the offending sub-expression once, at the innermost failure.
    const std::string what = e.what();
    if (what.find(" in '") == std::string::npos && !src.empty() &&
        node.span.end <= src.size()) {
      throw EvalError(what + " in '" +
                      std::string(src.substr(node.span.begin,
                                             node.span.end - node.span.begin)) +
                      "'");
    }
    throw;
  }
  throw EvalError("corrupt AST node");
}

}  // namespace expr_detail

/// Evaluates the AST over jet arithmetic; equals jet_lift of the same
/// closed-form map.
inline Jet eval_jet(const AstPtr& ast, const Vec& point,
                    std::string_view src = {}) {
  return expr_detail::eval_node<Jet>(*ast, point, src);
}

inline double eval_value(const AstPtr& ast, const Vec& point,
                         std::string_view src = {}) {
  return expr_detail::eval_node<double>(*ast, point, src);
}

/// Jet of a closed-form builtin expressed as DSL source (parse + eval).
inline Jet jet_lift(std::string_view source, const Vec& point) {
  ParseResult r = parse(source);
  if (std::holds_alternative<ParseError>(r))
    throw EvalError(std::get<ParseError>(r).message());
  return eval_jet(std::get<AstPtr>(r), point, source);
}

inline std::string pretty_print(const AstPtr& node) {
  switch (node->kind) {
    case NodeKind::Number: {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", node->number);
      return buf;
    }
    case NodeKind::Variable:
      return "u" + std::to_string(node->var_index);
    case NodeKind::Ident:
      return node->name;
    case NodeKind::Unary:
      return "(-" + pretty_print(node->children[0]) + ")";
    case NodeKind::Binary: {
      const char* op = nullptr;
      switch (node->bop) {
        case BinaryOp::Add: op = "+"; break;
        case BinaryOp::Sub: op = "-"; break;
        case BinaryOp::Mul: op = "*"; break;
        case BinaryOp::Div: op = "/"; break;
        case BinaryOp::Pow: op = "^"; break;
      }
      return "(" + pretty_print(node->children[0]) + op +
             pretty_print(node->children[1]) + ")";
    }
    case NodeKind::Call: {
      std::string s = node->name + "(";
      for (size_t i = 0; i < node->children.size(); ++i) {
        if (i) s += ",";
        s += pretty_print(node->children[i]);
      }
      return s + ")";
    }
  }
  return "?";
}

/// Structural equality ignoring spans (used by the round-trip property).
inline bool structurally_equal(const AstPtr& a, const AstPtr& b) {
  if (a->kind != b->kind) return false;
  if (a->children.size() != b->children.size()) return false;
  switch (a->kind) {
    case NodeKind::Number:
      if (a->number != b->number) return false;
      break;
    case NodeKind::Variable:
      if (a->var_index != b->var_index) return false;
      break;
    case NodeKind::Ident:
    case NodeKind::Call:
      if (a->name != b->name) return false;
      break;
    case NodeKind::Binary:
      if (a->bop != b->bop) return false;
      break;
    default:
      break;
  }
  for (size_t i = 0; i < a->children.size(); ++i)
    if (!structurally_equal(a->children[i], b->children[i])) return false;
  return true;
}

}  // namespace mwl
