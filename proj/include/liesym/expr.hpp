#pragma once

// Immutable expression trees: construction, printing, evaluation,
// symbolic differentiation, substitution and constant folding.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace liesym {

/// Raised when an expression cannot be evaluated at a binding: unbound
/// symbol, division by zero, logarithm of a non-positive number and the like.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Fn { sin, cos, exp, ln, sqrt, atan, atan2 };

inline std::string_view fn_name(Fn f) {
  switch (f) {
    case Fn::sin: return "sin";
    case Fn::cos: return "cos";
    case Fn::exp: return "exp";
    case Fn::ln: return "ln";
    case Fn::sqrt: return "sqrt";
    case Fn::atan: return "atan";
    case Fn::atan2: return "atan2";
  }
  return "?";
}

inline int fn_arity(Fn f) { return f == Fn::atan2 ? 2 : 1; }

/// Symbol -> value map used for evaluation.
using Binding = std::map<std::string, double, std::less<>>;

/// Expression tree node handle. Cheap to copy; the tree is shared and never
/// mutated after construction.
class Expr {
 public:
  enum class Kind { constant, symbol, sum, product, quotient, power, neg, call };

  Expr() : Expr(constant(0.0)) {}

  static Expr constant(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::constant;
    n->value = (v == 0.0) ? 0.0 : v;  // no negative zero
    return Expr(std::move(n));
  }
  static Expr symbol(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::symbol;
    n->name = std::move(name);
    return Expr(std::move(n));
  }
  // Raw constructors: build exactly the requested node, no folding.
  static Expr make_binary(Kind k, Expr a, Expr b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->args = {std::move(a), std::move(b)};
    return Expr(std::move(n));
  }
  static Expr make_neg(Expr a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::neg;
    n->args = {std::move(a)};
    return Expr(std::move(n));
  }
  static Expr make_call(Fn f, std::vector<Expr> args) {
    if (static_cast<int>(args.size()) != fn_arity(f))
      throw std::invalid_argument("wrong number of arguments for " + std::string(fn_name(f)));
    auto n = std::make_shared<Node>();
    n->kind = Kind::call;
    n->fn = f;
    n->args = std::move(args);
    return Expr(std::move(n));
  }

  Kind kind() const { return node_->kind; }
  double value() const { return node_->value; }
  const std::string& name() const { return node_->name; }
  Fn fn() const { return node_->fn; }
  const std::vector<Expr>& args() const { return node_->args; }
  const Expr& arg(std::size_t i) const { return node_->args.at(i); }

  bool is_constant() const { return kind() == Kind::constant; }
  bool is_constant(double v) const { return is_constant() && value() == v; }
  bool is_symbol() const { return kind() == Kind::symbol; }

  /// Node identity (same shared node); structural equality is operator==.
  bool same_node(const Expr& o) const { return node_ == o.node_; }

 private:
  struct Node {
    Kind kind = Kind::constant;
    double value = 0.0;
    std::string name;
    Fn fn = Fn::sin;
    std::vector<Expr> args;
  };
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

inline bool operator==(const Expr& a, const Expr& b) {
  if (a.same_node(b)) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expr::Kind::constant: return a.value() == b.value();
    case Expr::Kind::symbol: return a.name() == b.name();
    case Expr::Kind::call:
      if (a.fn() != b.fn()) return false;
      break;
    default: break;
  }
  if (a.args().size() != b.args().size()) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!(a.arg(i) == b.arg(i))) return false;
  return true;
}
inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

namespace detail {

inline bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

inline double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw EvalError(std::string("non-finite result in ") + what);
  return v;
}

inline double apply_power(double base, double ex) {
  if (base == 0.0 && ex < 0.0) throw EvalError("division by zero in power");
  if (base < 0.0 && !is_integer(ex)) throw EvalError("non-integer power of negative base");
  return checked(std::pow(base, ex), "power");
}

inline double apply_call(Fn f, double a, double b) {
  switch (f) {
    case Fn::sin: return std::sin(a);
    case Fn::cos: return std::cos(a);
    case Fn::exp: return checked(std::exp(a), "exp");
    case Fn::ln:
      if (a <= 0.0) throw EvalError("ln of non-positive argument");
      return std::log(a);
    case Fn::sqrt:
      if (a < 0.0) throw EvalError("sqrt of negative argument");
      return std::sqrt(a);
    case Fn::atan: return std::atan(a);
    case Fn::atan2:
      if (a == 0.0 && b == 0.0) throw EvalError("atan2(0, 0) is undefined");
      return std::atan2(a, b);
  }
  throw EvalError("unknown function");
}

}  // namespace detail

/// Evaluates with IEEE doubles. Domain errors throw EvalError; the result is
/// never a silent NaN or infinity.
inline double evaluate(const Expr& e, const Binding& b) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::constant: return e.value();
    case K::symbol: {
      auto it = b.find(e.name());
      if (it == b.end()) throw EvalError("unbound symbol '" + e.name() + "'");
      return it->second;
    }
    case K::sum: return detail::checked(evaluate(e.arg(0), b) + evaluate(e.arg(1), b), "sum");
    case K::product:
      return detail::checked(evaluate(e.arg(0), b) * evaluate(e.arg(1), b), "product");
    case K::quotient: {
      double num = evaluate(e.arg(0), b);
      double den = evaluate(e.arg(1), b);
      if (den == 0.0) throw EvalError("division by zero");
      return detail::checked(num / den, "quotient");
    }
    case K::power: return detail::apply_power(evaluate(e.arg(0), b), evaluate(e.arg(1), b));
    case K::neg: return -evaluate(e.arg(0), b);
    case K::call: {
      double a0 = evaluate(e.arg(0), b);
      double a1 = e.args().size() > 1 ? evaluate(e.arg(1), b) : 0.0;
      return detail::apply_call(e.fn(), a0, a1);
    }
  }
  throw EvalError("unsupported node");
}

// ---------------------------------------------------------------------------
// Folding builders. Each assumes its operands are already folded and applies
// the node-level rules; the result is again folded.

namespace detail {

inline Expr fold_node(Expr::Kind k, const Expr& a, const Expr& b);

inline bool try_eval_constant(const Expr& e, double& out) {
  try {
    out = evaluate(e, Binding{});
    return true;
  } catch (const EvalError&) {
    return false;
  }
}

inline Expr fold_node(Expr::Kind k, const Expr& a, const Expr& b) {
  using K = Expr::Kind;
  Expr raw = Expr::make_binary(k, a, b);
  double v = 0.0;
  if (a.is_constant() && b.is_constant() && try_eval_constant(raw, v)) return Expr::constant(v);
  switch (k) {
    case K::sum:
      if (a.is_constant(0.0)) return b;
      if (b.is_constant(0.0)) return a;
      break;
    case K::product:
      if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
      if (a.is_constant(1.0)) return b;
      if (b.is_constant(1.0)) return a;
      break;
    case K::quotient:
      if (a.is_constant(0.0)) return Expr::constant(0.0);
      if (b.is_constant(1.0)) return a;
      break;
    case K::power:
      if (b.is_constant(1.0)) return a;
      if (b.is_constant(0.0)) return Expr::constant(1.0);
      if (a.is_constant(1.0)) return Expr::constant(1.0);
      break;
    default: break;
  }
  return raw;
}

inline Expr fold_neg(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.value());
  if (a.kind() == Expr::Kind::neg) return a.arg(0);
  return Expr::make_neg(a);
}

inline Expr fold_call(Fn f, std::vector<Expr> args) {
  Expr raw = Expr::make_call(f, std::move(args));
  bool all_const = true;
  for (const auto& x : raw.args()) all_const = all_const && x.is_constant();
  double v = 0.0;
  if (all_const && try_eval_constant(raw, v)) return Expr::constant(v);
  return raw;
}

}  // namespace detail

inline Expr operator+(const Expr& a, const Expr& b) { return detail::fold_node(Expr::Kind::sum, a, b); }
inline Expr operator*(const Expr& a, const Expr& b) {
  return detail::fold_node(Expr::Kind::product, a, b);
}
inline Expr operator/(const Expr& a, const Expr& b) {
  return detail::fold_node(Expr::Kind::quotient, a, b);
}
inline Expr operator-(const Expr& a) { return detail::fold_neg(a); }
inline Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_constant(0.0)) return a;
  return a + (-b);
}
inline Expr pow(const Expr& a, const Expr& b) { return detail::fold_node(Expr::Kind::power, a, b); }

inline Expr operator+(const Expr& a, double b) { return a + Expr::constant(b); }
inline Expr operator+(double a, const Expr& b) { return Expr::constant(a) + b; }
inline Expr operator-(const Expr& a, double b) { return a - Expr::constant(b); }
inline Expr operator-(double a, const Expr& b) { return Expr::constant(a) - b; }
inline Expr operator*(double a, const Expr& b) { return Expr::constant(a) * b; }
inline Expr operator*(const Expr& a, double b) { return a * Expr::constant(b); }
inline Expr operator/(const Expr& a, double b) { return a / Expr::constant(b); }
inline Expr operator/(double a, const Expr& b) { return Expr::constant(a) / b; }
inline Expr pow(const Expr& a, double b) { return pow(a, Expr::constant(b)); }

inline Expr call(Fn f, const Expr& a) { return detail::fold_call(f, {a}); }
inline Expr sin(const Expr& a) { return call(Fn::sin, a); }
inline Expr cos(const Expr& a) { return call(Fn::cos, a); }
inline Expr exp(const Expr& a) { return call(Fn::exp, a); }
inline Expr ln(const Expr& a) { return call(Fn::ln, a); }
inline Expr sqrt(const Expr& a) { return call(Fn::sqrt, a); }
inline Expr atan(const Expr& a) { return call(Fn::atan, a); }
inline Expr atan2(const Expr& num, const Expr& den) { return detail::fold_call(Fn::atan2, {num, den}); }

inline Expr num(double v) { return Expr::constant(v); }
inline Expr sym(std::string name) { return Expr::symbol(std::move(name)); }

// ---------------------------------------------------------------------------

/// Collapses constant subtrees and applies 0*e -> 0, 1*e -> e, e+0 -> e,
/// e^1 -> e (and the analogous quotient/neg rules). Idempotent.
inline Expr fold_constants(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::constant:
    case K::symbol: return e;
    case K::neg: return detail::fold_neg(fold_constants(e.arg(0)));
    case K::call: {
      std::vector<Expr> args;
      for (const auto& a : e.args()) args.push_back(fold_constants(a));
      return detail::fold_call(e.fn(), std::move(args));
    }
    default: return detail::fold_node(e.kind(), fold_constants(e.arg(0)), fold_constants(e.arg(1)));
  }
}

inline void collect_symbols(const Expr& e, std::set<std::string>& out) {
  if (e.is_symbol()) {
    out.insert(e.name());
    return;
  }
  for (const auto& a : e.args()) collect_symbols(a, out);
}

inline std::set<std::string> symbols(const Expr& e) {
  std::set<std::string> out;
  collect_symbols(e, out);
  return out;
}

inline bool depends_on(const Expr& e, std::string_view var) {
  if (e.is_symbol()) return e.name() == var;
  for (const auto& a : e.args())
    if (depends_on(a, var)) return true;
  return false;
}

inline std::size_t node_count(const Expr& e) {
  std::size_t n = 1;
  for (const auto& a : e.args()) n += node_count(a);
  return n;
}

/// Simultaneous substitution of symbols; the result is folded.
inline Expr substitute(const Expr& e, const std::map<std::string, Expr, std::less<>>& repl) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::constant: return e;
    case K::symbol: {
      auto it = repl.find(e.name());
      return it == repl.end() ? e : it->second;
    }
    case K::neg: return -substitute(e.arg(0), repl);
    case K::call: {
      std::vector<Expr> args;
      for (const auto& a : e.args()) args.push_back(substitute(a, repl));
      return detail::fold_call(e.fn(), std::move(args));
    }
    default: return detail::fold_node(e.kind(), substitute(e.arg(0), repl), substitute(e.arg(1), repl));
  }
}

/// Replaces the given symbols by constants.
inline Expr bind(const Expr& e, const std::map<std::string, double, std::less<>>& values) {
  std::map<std::string, Expr, std::less<>> repl;
  for (const auto& [k, v] : values) repl.emplace(k, num(v));
  return substitute(e, repl);
}

/// Exact symbolic derivative; every symbol other than `var` is a constant.
inline Expr differentiate(const Expr& e, std::string_view var) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::constant: return num(0.0);
    case K::symbol: return num(e.name() == var ? 1.0 : 0.0);
    case K::sum: return differentiate(e.arg(0), var) + differentiate(e.arg(1), var);
    case K::neg: return -differentiate(e.arg(0), var);
    case K::product: {
      const Expr& a = e.arg(0);
      const Expr& b = e.arg(1);
      return differentiate(a, var) * b + a * differentiate(b, var);
    }
    case K::quotient: {
      const Expr& a = e.arg(0);
      const Expr& b = e.arg(1);
      Expr da = differentiate(a, var);
      Expr db = differentiate(b, var);
      if (db.is_constant(0.0)) return da / b;
      return (da * b - a * db) / pow(b, 2.0);
    }
    case K::power: {
      const Expr& a = e.arg(0);
      const Expr& b = e.arg(1);
      Expr da = differentiate(a, var);
      if (!depends_on(b, var)) return (b * pow(a, b - 1.0)) * da;
      Expr db = differentiate(b, var);
      if (!depends_on(a, var)) return e * (ln(a) * db);
      return e * (db * ln(a) + b * da / a);
    }
    case K::call: {
      const Expr& a = e.arg(0);
      Expr da = differentiate(a, var);
      switch (e.fn()) {
        case Fn::sin: return da * cos(a);
        case Fn::cos: return -(da * sin(a));
        case Fn::exp: return da * e;
        case Fn::ln: return da / a;
        case Fn::sqrt: return da / (2.0 * e);
        case Fn::atan: return da / (1.0 + pow(a, 2.0));
        case Fn::atan2: {
          const Expr& q = e.arg(1);
          Expr dq = differentiate(q, var);
          return (q * da - a * dq) / (pow(a, 2.0) + pow(q, 2.0));
        }
      }
    }
  }
  throw std::logic_error("differentiate: unsupported node kind");
}

/// Top-level additive terms: sums and negations are flattened.
inline void additive_terms(const Expr& e, std::vector<Expr>& out) {
  if (e.kind() == Expr::Kind::sum) {
    additive_terms(e.arg(0), out);
    additive_terms(e.arg(1), out);
  } else if (e.kind() == Expr::Kind::neg) {
    additive_terms(e.arg(0), out);
  } else {
    out.push_back(e);
  }
}

/// Value of e together with the largest absolute additive term, the scale
/// against which cancellation is judged.
struct ScaledValue {
  double value = 0.0;
  double scale = 0.0;
};

inline ScaledValue evaluate_scaled(const Expr& e, const Binding& b) {
  std::vector<Expr> terms;
  additive_terms(e, terms);
  ScaledValue out;
  out.value = evaluate(e, b);
  for (const auto& t : terms) out.scale = std::max(out.scale, std::abs(evaluate(t, b)));
  return out;
}

// ---------------------------------------------------------------------------
// Printing. Every composite node is parenthesized so that parse(print(e))
// reproduces e structurally.

inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string print(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::constant:
      return e.value() < 0 ? "(" + format_number(e.value()) + ")" : format_number(e.value());
    case K::symbol: return e.name();
    case K::sum:
      if (e.arg(1).kind() == K::neg) return "(" + print(e.arg(0)) + " - " + print(e.arg(1).arg(0)) + ")";
      return "(" + print(e.arg(0)) + " + " + print(e.arg(1)) + ")";
    case K::product: return "(" + print(e.arg(0)) + "*" + print(e.arg(1)) + ")";
    case K::quotient: return "(" + print(e.arg(0)) + "/" + print(e.arg(1)) + ")";
    case K::power: return "(" + print(e.arg(0)) + "^" + print(e.arg(1)) + ")";
    case K::neg: return "(-(" + print(e.arg(0)) + "))";
    case K::call: {
      std::string s(fn_name(e.fn()));
      s += "(";
      for (std::size_t i = 0; i < e.args().size(); ++i) {
        if (i) s += ", ";
        s += print(e.arg(i));
      }
      return s + ")";
    }
  }
  return "?";
}

}  // namespace liesym
