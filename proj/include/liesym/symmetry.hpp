#pragma once

// Point-symmetry generators xi d_x + eta1 d_y + eta2 d_z, their second
// prolongation, and the determining-equation residuals.

#include <array>
#include <optional>
#include <string>

#include "liesym/expr.hpp"
#include "liesym/mat2.hpp"
#include "liesym/odesys.hpp"
#include "liesym/sampling.hpp"

namespace liesym {

/// Coefficients stored verbatim: `xi` is the full d_x coefficient.
class Generator {
 public:
  Generator(Expr xi, Expr eta1, Expr eta2) : xi_(std::move(xi)), eta1_(std::move(eta1)), eta2_(std::move(eta2)) {
    if (depends_on(xi_, "y") || depends_on(xi_, "z"))
      throw std::invalid_argument("xi must not depend on y or z");
    for (const Expr* e : {&xi_, &eta1_, &eta2_})
      if (depends_on(*e, "yp") || depends_on(*e, "zp"))
        throw std::invalid_argument("generator coefficients must not depend on yp or zp");
  }

  const Expr& xi() const { return xi_; }
  const Expr& eta1() const { return eta1_; }
  const Expr& eta2() const { return eta2_; }

  /// X(f) = xi f_x + eta1 f_y + eta2 f_z
  Expr apply(const Expr& f) const {
    return xi_ * differentiate(f, "x") + eta1_ * differentiate(f, "y") + eta2_ * differentiate(f, "z");
  }

  Generator bound(const ParamMap& params) const {
    return Generator(bind(xi_, params), bind(eta1_, params), bind(eta2_, params));
  }

  friend Generator operator+(const Generator& a, const Generator& b) {
    return Generator(a.xi_ + b.xi_, a.eta1_ + b.eta1_, a.eta2_ + b.eta2_);
  }
  friend Generator operator*(double s, const Generator& a) {
    return Generator(s * a.xi_, s * a.eta1_, s * a.eta2_);
  }

 private:
  Expr xi_, eta1_, eta2_;
};

inline std::string print(const Generator& g) {
  return "(" + print(g.xi()) + ")*d_x + (" + print(g.eta1()) + ")*d_y + (" + print(g.eta2()) + ")*d_z";
}

/// X = 2(k1 + k2 x) d_x + (A (y,z) + zeta) . grad
struct LinearGenerator {
  double k1 = 0.0;
  double k2 = 0.0;
  Mat2 A{};
  std::array<Expr, 2> zeta{num(0), num(0)};

  bool constant_zeta() const { return symbols(zeta[0]).empty() && symbols(zeta[1]).empty(); }

  Generator expand() const {
    Expr y = sym("y"), z = sym("z");
    return Generator(2.0 * (k1 + k2 * sym("x")), A.a11 * y + A.a12 * z + zeta[0], A.a21 * y + A.a22 * z + zeta[1]);
  }
};

/// (c1..c8) in the basis X1 = d_x, X2 = x d_x, X3 = d_y, X4 = d_z,
/// X5 = y d_y, X6 = z d_z, X7 = z d_y, X8 = y d_z.
inline std::array<double, 8> to_coefficients(const LinearGenerator& g) {
  if (!g.constant_zeta()) throw std::invalid_argument("zeta must be constant");
  Binding none;
  return {2.0 * g.k1, 2.0 * g.k2, evaluate(g.zeta[0], none), evaluate(g.zeta[1], none),
          g.A.a11,    g.A.a22,    g.A.a12,                     g.A.a21};
}

inline LinearGenerator from_coefficients(const std::array<double, 8>& c) {
  return LinearGenerator{c[0] / 2.0, c[1] / 2.0, Mat2{c[4], c[6], c[7], c[5]}, {num(c[2]), num(c[3])}};
}

/// D = d_x + yp d_y + zp d_z + F d_yp + G d_zp
inline Expr total_derivative(const Expr& e, const Expr& F, const Expr& G) {
  return differentiate(e, "x") + sym("yp") * differentiate(e, "y") + sym("zp") * differentiate(e, "z") +
         F * differentiate(e, "yp") + G * differentiate(e, "zp");
}

/// On-shell residuals eta_i^(2) - X(F_i), as expressions in x, y, z, yp, zp
/// (parameters of `sys` bound).
inline std::array<Expr, 2> prolong2_residual_exprs(const OdeSystem& sys, const Generator& g) {
  Expr F = sys.bound_F(), G = sys.bound_G();
  Generator gb = g.bound(sys.params());
  Expr dxi = total_derivative(gb.xi(), F, G);
  std::array<Expr, 2> rhs{F, G};
  std::array<Expr, 2> eta{gb.eta1(), gb.eta2()};
  std::array<Expr, 2> d1{sym("yp"), sym("zp")};
  std::array<Expr, 2> out{num(0), num(0)};
  for (int i = 0; i < 2; ++i) {
    Expr e1 = total_derivative(eta[i], F, G) - d1[i] * dxi;
    Expr e2 = total_derivative(e1, F, G) - rhs[i] * dxi;
    out[i] = e2 - gb.apply(rhs[i]);
  }
  return out;
}

inline Binding point_binding(const ParamMap& params, double x, double y, double z, double yp = 0.0,
                             double zp = 0.0) {
  Binding b(params.begin(), params.end());
  b["x"] = x;
  b["y"] = y;
  b["z"] = z;
  b["yp"] = yp;
  b["zp"] = zp;
  return b;
}

inline std::array<double, 2> prolong2_residual(const OdeSystem& sys, const Generator& g,
                                               const std::array<double, 5>& point) {
  auto r = prolong2_residual_exprs(sys, g);
  Binding b = point_binding(sys.params(), point[0], point[1], point[2], point[3], point[4]);
  return {evaluate(r[0], b), evaluate(r[1], b)};
}

/// 2 xi F_x + 3 xi' F + (((A + xi' E) y + zeta) . grad) F - A F - xi''' y - zeta''
/// for X = 2 xi d_x + ((A + xi' E) y + zeta) . grad; equals minus the
/// prolongation residual of that generator.
inline std::array<Expr, 2> determining_residual_exprs(const OdeSystem& sys, const Expr& xi, const Mat2& A,
                                                      const std::array<Expr, 2>& zeta) {
  const ParamMap& pm = sys.params();
  Expr F = sys.bound_F(), G = sys.bound_G();
  Expr xib = bind(xi, pm);
  Expr dxi = differentiate(xib, "x");
  Expr d3xi = differentiate(differentiate(dxi, "x"), "x");
  std::array<Expr, 2> zb{bind(zeta[0], pm), bind(zeta[1], pm)};
  Expr y = sym("y"), z = sym("z");
  Expr v1 = (A.a11 + dxi) * y + A.a12 * z + zb[0];
  Expr v2 = A.a21 * y + (A.a22 + dxi) * z + zb[1];
  std::array<Expr, 2> rhs{F, G};
  std::array<Expr, 2> AF{A.a11 * F + A.a12 * G, A.a21 * F + A.a22 * G};
  std::array<Expr, 2> yv{y, z};
  std::array<Expr, 2> out{num(0), num(0)};
  for (int i = 0; i < 2; ++i) {
    const Expr& h = rhs[i];
    out[i] = 2.0 * xib * differentiate(h, "x") + 3.0 * dxi * h + v1 * differentiate(h, "y") +
             v2 * differentiate(h, "z") - AF[i] - d3xi * yv[i] -
             differentiate(differentiate(zb[i], "x"), "x");
  }
  return out;
}

inline std::array<double, 2> determining_residual(const OdeSystem& sys, const Expr& xi, const Mat2& A,
                                                  const std::array<Expr, 2>& zeta,
                                                  const std::array<double, 3>& point) {
  auto r = determining_residual_exprs(sys, xi, A, zeta);
  Binding b = point_binding(sys.params(), point[0], point[1], point[2]);
  return {evaluate(r[0], b), evaluate(r[1], b)};
}

/// 3 k2 F + (((A + k2 E) y + k) . grad) F - A F for autonomous systems.
inline std::array<Expr, 2> autonomous_residual_exprs(const OdeSystem& sys, double k2, const Mat2& A,
                                                     const std::array<double, 2>& k) {
  if (!sys.is_autonomous()) throw std::invalid_argument("system is not autonomous");
  Expr F = sys.bound_F(), G = sys.bound_G();
  Expr y = sym("y"), z = sym("z");
  Expr v1 = (A.a11 + k2) * y + A.a12 * z + k[0];
  Expr v2 = A.a21 * y + (A.a22 + k2) * z + k[1];
  std::array<Expr, 2> rhs{F, G};
  std::array<Expr, 2> AF{A.a11 * F + A.a12 * G, A.a21 * F + A.a22 * G};
  std::array<Expr, 2> out{num(0), num(0)};
  for (int i = 0; i < 2; ++i)
    out[i] = 3.0 * k2 * rhs[i] + v1 * differentiate(rhs[i], "y") + v2 * differentiate(rhs[i], "z") - AF[i];
  return out;
}

inline std::array<double, 2> autonomous_residual(const OdeSystem& sys, double k2, const Mat2& A,
                                                 const std::array<double, 2>& k,
                                                 const std::array<double, 3>& point) {
  auto r = autonomous_residual_exprs(sys, k2, A, k);
  Binding b = point_binding(sys.params(), point[0], point[1], point[2]);
  return {evaluate(r[0], b), evaluate(r[1], b)};
}

struct Verdict {
  bool admitted = true;
  double max_residual = 0.0;  // max over points and components of |r| / (1 + scale)
  std::optional<Binding> witness;
  std::array<double, 2> witness_residual{0.0, 0.0};
  int points = 0;
  explicit operator bool() const { return admitted; }
};

/// The relative zero test of is_zero_numeric applied jointly to both
/// prolongation residuals. yp, zp default to (-1.5, 1.5) if `dom` omits them.
inline Verdict admits(const OdeSystem& sys, const Generator& g, const SamplingDomain& dom, double tol = 1e-9) {
  SamplingDomain d = dom;
  for (const char* v : {"yp", "zp"})
    if (!d.vars.count(v)) d.set(v, -1.5, 1.5);
  auto r = prolong2_residual_exprs(sys, g);
  for (const auto& e : r)
    for (const auto& s : symbols(e))
      if (!d.vars.count(s)) throw EvalError("unbound symbol '" + s + "'");
  std::array<std::vector<Expr>, 2> terms;
  additive_terms(r[0], terms[0]);
  additive_terms(r[1], terms[1]);
  PointSampler sampler(d);
  Verdict out;
  long budget = static_cast<long>(d.samples) * d.attempts_per_sample;
  while (out.points < d.samples) {
    if (budget-- <= 0)
      throw SamplingError("only " + std::to_string(out.points) + " of " + std::to_string(d.samples) +
                          " valid sample points found");
    auto p = sampler.next();
    if (!p) continue;
    std::array<double, 2> val{}, scale{};
    try {
      for (int i = 0; i < 2; ++i) {
        val[i] = evaluate(r[i], *p);
        for (const auto& t : terms[i]) scale[i] = std::max(scale[i], std::abs(evaluate(t, *p)));
      }
    } catch (const EvalError&) {
      continue;
    }
    ++out.points;
    bool bad = false;
    for (int i = 0; i < 2; ++i) {
      out.max_residual = std::max(out.max_residual, std::abs(val[i]) / (1.0 + scale[i]));
      bad = bad || std::abs(val[i]) > tol * (1.0 + scale[i]);
    }
    if (bad) {
      out.admitted = false;
      out.witness = *p;
      out.witness_residual = val;
      return out;
    }
  }
  return out;
}

/// y~ = P y: (k1, k2, P A P^-1, P zeta).
inline LinearGenerator transform_generator(const LinearGenerator& g, const Mat2& P) {
  Mat2 Q = P.inverse();
  return LinearGenerator{g.k1, g.k2, P * g.A * Q,
                         {P.a11 * g.zeta[0] + P.a12 * g.zeta[1], P.a21 * g.zeta[0] + P.a22 * g.zeta[1]}};
}

/// General generator under y~ = P y: eta~(x, y~) = P eta(x, P^-1 y~).
inline Generator transform_generator(const Generator& g, const Mat2& P) {
  Mat2 Q = P.inverse();
  Expr y = sym("y"), z = sym("z");
  std::map<std::string, Expr, std::less<>> repl{{"y", Q.a11 * y + Q.a12 * z}, {"z", Q.a21 * y + Q.a22 * z}};
  Expr e1 = substitute(g.eta1(), repl), e2 = substitute(g.eta2(), repl);
  return Generator(g.xi(), P.a11 * e1 + P.a12 * e2, P.a21 * e1 + P.a22 * e2);
}

/// Lie bracket [g1, g2] of vector fields.
inline Generator commutator_vf(const Generator& g1, const Generator& g2) {
  return Generator(g1.apply(g2.xi()) - g2.apply(g1.xi()), g1.apply(g2.eta1()) - g2.apply(g1.eta1()),
                   g1.apply(g2.eta2()) - g2.apply(g1.eta2()));
}

}  // namespace liesym
