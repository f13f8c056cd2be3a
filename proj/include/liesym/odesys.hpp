#pragma once

// Systems y'' = F(x, y, z), z'' = G(x, y, z) and their equivalence
// transformations: linear change of the dependent variables, shifts by
// functions of x, and the reparametrization x~ = phi(x).

#include <array>
#include <map>
#include <string>

#include "liesym/expr.hpp"
#include "liesym/mat2.hpp"
#include "liesym/sampling.hpp"

namespace liesym {

using ParamMap = std::map<std::string, double, std::less<>>;

inline bool is_variable_name(std::string_view s) {
  return s == "x" || s == "y" || s == "z" || s == "yp" || s == "zp";
}

class OdeSystem {
 public:
  OdeSystem(Expr F, Expr G, ParamMap params = {})
      : F_(std::move(F)), G_(std::move(G)), params_(std::move(params)) {
    for (const Expr* e : {&F_, &G_})
      if (depends_on(*e, "yp") || depends_on(*e, "zp"))
        throw std::invalid_argument("right-hand sides must not depend on yp or zp");
  }

  const Expr& F() const { return F_; }
  const Expr& G() const { return G_; }
  const ParamMap& params() const { return params_; }

  /// F and G with the parameter bindings substituted.
  Expr bound_F() const { return bind(F_, params_); }
  Expr bound_G() const { return bind(G_, params_); }

  bool is_autonomous() const { return !depends_on(bound_F(), "x") && !depends_on(bound_G(), "x"); }

  std::array<double, 2> rhs(double x, double y, double z) const {
    Binding b(params_.begin(), params_.end());
    b["x"] = x;
    b["y"] = y;
    b["z"] = z;
    return {evaluate(F_, b), evaluate(G_, b)};
  }

  OdeSystem with(Expr F, Expr G) const { return OdeSystem(std::move(F), std::move(G), params_); }

 private:
  Expr F_;
  Expr G_;
  ParamMap params_;
};

/// y~ = P y: returns F~(y~) = P F(P^-1 y~).
inline OdeSystem linear_change(const OdeSystem& sys, const Mat2& P) {
  Mat2 Q = P.inverse();
  Expr y = sym("y"), z = sym("z");
  std::map<std::string, Expr, std::less<>> repl{{"y", Q.a11 * y + Q.a12 * z}, {"z", Q.a21 * y + Q.a22 * z}};
  Expr f = substitute(sys.F(), repl);
  Expr g = substitute(sys.G(), repl);
  return sys.with(P.a11 * f + P.a12 * g, P.a21 * f + P.a22 * g);
}

/// Pulls a sampling domain through y~ = P y: the (y~, z~) box is the bounding
/// box of the image, and points whose preimage leaves the original box are
/// rejected. Loci are rewritten in the new variables.
inline SamplingDomain transform_domain(const SamplingDomain& dom, const Mat2& P) {
  Mat2 Q = P.inverse();
  Expr y = sym("y"), z = sym("z");
  std::map<std::string, Expr, std::less<>> repl{{"y", Q.a11 * y + Q.a12 * z}, {"z", Q.a21 * y + Q.a22 * z}};
  SamplingDomain out = dom;
  out.excluded.clear();
  out.required.clear();
  for (const auto& e : dom.excluded) out.excluded.push_back(substitute(e, repl));
  for (const auto& [e, iv] : dom.required) out.required.emplace_back(substitute(e, repl), iv);
  auto iy = dom.vars.find("y");
  auto iz = dom.vars.find("z");
  if (iy == dom.vars.end() || iz == dom.vars.end()) return out;
  Interval by = iy->second, bz = iz->second;
  double lo[2] = {INFINITY, INFINITY}, hi[2] = {-INFINITY, -INFINITY};
  for (double cy : {by.lo, by.hi})
    for (double cz : {bz.lo, bz.hi}) {
      auto v = P.apply({cy, cz});
      for (int i = 0; i < 2; ++i) {
        lo[i] = std::min(lo[i], v[i]);
        hi[i] = std::max(hi[i], v[i]);
      }
    }
  out.set("y", lo[0], hi[0]).set("z", lo[1], hi[1]);
  out.require(repl.at("y"), by.lo, by.hi).require(repl.at("z"), bz.lo, bz.hi);
  return out;
}

/// y~ = y + phi(x), z~ = z + psi(x).
inline OdeSystem shift_change(const OdeSystem& sys, const Expr& phi, const Expr& psi) {
  for (const Expr* e : {&phi, &psi})
    for (const char* v : {"y", "z", "yp", "zp"})
      if (depends_on(*e, v)) throw std::invalid_argument("shift functions must depend on x only");
  std::map<std::string, Expr, std::less<>> repl{{"y", sym("y") - phi}, {"z", sym("z") - psi}};
  Expr phi2 = differentiate(differentiate(phi, "x"), "x");
  Expr psi2 = differentiate(differentiate(psi, "x"), "x");
  return sys.with(substitute(sys.F(), repl) + phi2, substitute(sys.G(), repl) + psi2);
}

/// x~ = phi(x), y~ = y psi(x), z~ = z psi(x) with psi = sqrt(phi'), the
/// solution of phi''/phi' = 2 psi'/psi normalized to unit constant.
/// `phi_inv` must be the inverse of phi (an expression in x); both phi' > 0
/// and phi(phi_inv(x)) = x are checked at points of `check_dom` (over x).
inline OdeSystem reparam_change(const OdeSystem& sys, const Expr& phi, const Expr& phi_inv,
                                const SamplingDomain& check_dom) {
  for (const Expr* e : {&phi, &phi_inv})
    for (const char* v : {"y", "z", "yp", "zp"})
      if (depends_on(*e, v)) throw std::invalid_argument("phi must depend on x only");
  Expr dphi = differentiate(phi, "x");
  PointSampler sampler(check_dom, Binding(sys.params().begin(), sys.params().end()));
  for (int i = 0; i < check_dom.samples; ++i) {
    auto p = sampler.next();
    if (!p) throw SamplingError("no admissible point for reparametrization check");
    if (!(evaluate(dphi, *p) > 0.0))
      throw std::invalid_argument("phi' must be positive (fails at x = " + format_number(p->at("x")) + ")");
    Binding q = *p;
    q["x"] = evaluate(phi, *p);
    double back = evaluate(phi_inv, q);
    if (std::abs(back - p->at("x")) > 1e-9 * (1.0 + std::abs(back)))
      throw std::invalid_argument("phi_inv is not the inverse of phi");
  }
  Expr psi = sqrt(dphi);
  Expr dpsi = differentiate(psi, "x");
  Expr ddpsi = differentiate(dpsi, "x");
  Expr corr = ddpsi - 2.0 * pow(dpsi, 2.0) / psi;
  Expr psi4 = pow(psi, 4.0);
  Expr f = (psi * sys.F() + sym("y") * corr) / psi4;
  Expr g = (psi * sys.G() + sym("z") * corr) / psi4;
  Expr psi_new = substitute(psi, {{"x", phi_inv}});
  std::map<std::string, Expr, std::less<>> repl{
      {"x", phi_inv}, {"y", sym("y") / psi_new}, {"z", sym("z") / psi_new}};
  return sys.with(substitute(f, repl), substitute(g, repl));
}

enum class ReducibilityHint { ReducibleFPrimeGPrimeZero, ReducibleProportional, NoHint };

inline std::string_view to_string(ReducibilityHint h) {
  switch (h) {
    case ReducibilityHint::ReducibleFPrimeGPrimeZero: return "ReducibleFPrimeGPrimeZero";
    case ReducibilityHint::ReducibleProportional: return "ReducibleProportional";
    case ReducibilityHint::NoHint: return "NoHint";
  }
  return "?";
}

/// Hint for the pair f(u), g(u): f' or g' identically zero, or g a constant
/// multiple of f (vanishing Wronskian f g' - f' g). Probabilistic.
inline ReducibilityHint reducibility_hint(const Expr& f, const Expr& g, const SamplingDomain& dom,
                                          double tol = 1e-10) {
  Expr df = differentiate(f, "u");
  Expr dg = differentiate(g, "u");
  if (is_zero_numeric(df, dom, tol) || is_zero_numeric(dg, dom, tol))
    return ReducibilityHint::ReducibleFPrimeGPrimeZero;
  if (is_zero_numeric(f * dg - df * g, dom, tol)) return ReducibilityHint::ReducibleProportional;
  return ReducibilityHint::NoHint;
}

enum class SystemHint { ReducibleLinear, ReducibleProportional, NoHint };

/// System-level hint: F, G affine in (y, z), or F, G proportional with a
/// constant ratio (one constant combination of the equations is trivial).
inline SystemHint system_reducibility_hint(const OdeSystem& sys, const SamplingDomain& dom,
                                           double tol = 1e-10) {
  Expr F = sys.bound_F(), G = sys.bound_G();
  bool linear = true;
  for (const Expr& h : {F, G})
    for (const char* a : {"y", "z"})
      for (const char* b : {"y", "z"})
        linear = linear && is_zero_numeric(differentiate(differentiate(h, a), b), dom, tol).zero;
  if (linear) return SystemHint::ReducibleLinear;
  bool prop_y = is_zero_numeric(F * differentiate(G, "y") - G * differentiate(F, "y"), dom, tol).zero;
  bool prop_z = is_zero_numeric(F * differentiate(G, "z") - G * differentiate(F, "z"), dom, tol).zero;
  if (prop_y && prop_z) return SystemHint::ReducibleProportional;
  return SystemHint::NoHint;
}

}  // namespace liesym
