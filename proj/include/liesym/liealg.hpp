#pragma once

// The 8-dimensional algebra L8 = {X1..X8} of linear generators
//   X1 = d_x, X2 = x d_x, X3 = d_y, X4 = d_z,
//   X5 = y d_y, X6 = z d_z, X7 = z d_y, X8 = y d_z,
// its inner automorphisms and the optimal systems of one-dimensional
// subalgebras of L4 = {X5..X8}, L6 = {X3..X8} and L8.

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "liesym/jordan.hpp"
#include "liesym/symmetry.hpp"

namespace liesym {

using AlgebraElement = std::array<double, 8>;

inline AlgebraElement basis(int i) {
  if (i < 1 || i > 8) throw std::out_of_range("basis index must be in 1..8");
  AlgebraElement e{};
  e[i - 1] = 1.0;
  return e;
}

inline Generator to_generator(const AlgebraElement& c) {
  Expr x = sym("x"), y = sym("y"), z = sym("z");
  return Generator(c[0] + c[1] * x, c[2] + c[4] * y + c[6] * z, c[3] + c[7] * y + c[5] * z);
}

/// [X_i, X_j] = sum_k C[i][j][k] X_k, zero-based indices.
struct StructureConstants {
  std::array<std::array<std::array<int, 8>, 8>, 8> C{};

  int operator()(int i, int j, int k) const { return C[i][j][k]; }
};

inline const StructureConstants& structure_constants() {
  static const StructureConstants sc = [] {
    StructureConstants s;
    auto put = [&s](int i, int j, int k, int v) {
      s.C[i - 1][j - 1][k - 1] += v;
      s.C[j - 1][i - 1][k - 1] -= v;
    };
    put(1, 2, 1, 1);
    put(3, 5, 3, 1);
    put(3, 8, 4, 1);
    put(4, 6, 4, 1);
    put(4, 7, 3, 1);
    put(5, 7, 7, -1);
    put(5, 8, 8, 1);
    put(6, 7, 7, 1);
    put(6, 8, 8, -1);
    put(7, 8, 6, 1);
    put(7, 8, 5, -1);
    return s;
  }();
  return sc;
}

inline AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b) {
  const auto& sc = structure_constants();
  AlgebraElement out{};
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      double p = a[i] * b[j];
      if (p == 0.0) continue;
      for (int k = 0; k < 8; ++k) out[k] += p * sc.C[i][j][k];
    }
  return out;
}

/// A_i with parameter a, coordinate formulas as published.
inline AlgebraElement automorphism(int i, double a, const AlgebraElement& e) {
  AlgebraElement c = e;
  auto& [c1, c2, c3, c4, c5, c6, c7, c8] = c;
  switch (i) {
    case 1: c1 = e[0] - a * e[1]; break;
    case 2: c1 = std::exp(a) * e[0]; break;
    case 3:
      c3 = e[2] - a * e[4];
      c4 = e[3] - a * e[7];
      break;
    case 4:
      c3 = e[2] - a * e[6];
      c4 = e[3] - a * e[5];
      break;
    case 5:
      c3 = std::exp(a) * e[2];
      c7 = std::exp(a) * e[6];
      c8 = std::exp(-a) * e[7];
      break;
    case 6:
      c4 = std::exp(a) * e[3];
      c7 = std::exp(-a) * e[6];
      c8 = std::exp(a) * e[7];
      break;
    case 7:
      c3 = e[2] + a * e[3];
      c5 = e[4] + a * e[7];
      c6 = e[5] - a * e[7];
      c7 = e[6] - a * a * e[7] + a * e[5] - a * e[4];
      break;
    case 8:
      c4 = e[3] + a * e[2];
      c5 = e[4] - a * e[6];
      c6 = e[5] + a * e[6];
      c8 = e[7] - a * a * e[6] - a * e[5] + a * e[4];
      break;
    default: throw std::out_of_range("automorphism index must be in 1..8");
  }
  (void)c2;
  return c;
}

/// E1: z -> -z, E2: y -> -y, E3: x -> -x, E4: y <-> z.
inline AlgebraElement involution(int k, const AlgebraElement& e) {
  AlgebraElement c = e;
  switch (k) {
    case 1:
      c[3] = -e[3];
      c[6] = -e[6];
      c[7] = -e[7];
      break;
    case 2:
      c[2] = -e[2];
      c[6] = -e[6];
      c[7] = -e[7];
      break;
    case 3: c[0] = -e[0]; break;
    case 4:
      std::swap(c[2], c[3]);
      std::swap(c[4], c[5]);
      std::swap(c[6], c[7]);
      break;
    default: throw std::out_of_range("involution index must be in 1..4");
  }
  return c;
}

namespace detail {

using Mat8 = std::array<std::array<double, 8>, 8>;

inline Mat8 mul8(const Mat8& a, const Mat8& b) {
  Mat8 r{};
  for (int i = 0; i < 8; ++i)
    for (int k = 0; k < 8; ++k) {
      if (a[i][k] == 0.0) continue;
      for (int j = 0; j < 8; ++j) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

// Scaling and squaring with a Taylor series.
inline Mat8 expm8(Mat8 T) {
  double norm = 0.0;
  for (int j = 0; j < 8; ++j) {
    double col = 0.0;
    for (int i = 0; i < 8; ++i) col += std::abs(T[i][j]);
    norm = std::max(norm, col);
  }
  int squarings = 0;
  while (norm > 0.5) {
    norm /= 2.0;
    ++squarings;
  }
  double f = std::ldexp(1.0, -squarings);
  for (auto& row : T)
    for (auto& v : row) v *= f;
  Mat8 E{}, term{};
  for (int i = 0; i < 8; ++i) E[i][i] = term[i][i] = 1.0;
  for (int n = 1; n <= 30; ++n) {
    term = mul8(term, T);
    double mx = 0.0;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        term[i][j] /= n;
        E[i][j] += term[i][j];
        mx = std::max(mx, std::abs(term[i][j]));
      }
    if (mx < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) E = mul8(E, E);
  return E;
}

}  // namespace detail

/// exp(t ad_{X_i}) e, i.e. the solution at t of e' = [X_i, e].
inline AlgebraElement adjoint_exp(int i, double t, const AlgebraElement& e) {
  if (i < 1 || i > 8) throw std::out_of_range("basis index must be in 1..8");
  const auto& sc = structure_constants();
  detail::Mat8 T{};
  for (int j = 0; j < 8; ++j)
    for (int k = 0; k < 8; ++k) T[j][k] = t * sc.C[i - 1][j][k];
  auto E = detail::expm8(T);
  AlgebraElement out{};
  for (int j = 0; j < 8; ++j)
    for (int k = 0; k < 8; ++k) out[k] += e[j] * E[j][k];
  return out;
}

/// automorphism(i, a, .) == adjoint_exp(i, kAutomorphismSign[i-1] * a, .)
inline constexpr std::array<int, 8> kAutomorphismSign{-1, -1, -1, -1, -1, -1, -1, -1};

// ---------------------------------------------------------------------------
// optimal systems

struct WordStep {
  enum class Kind { automorphism, involution, kernel } kind = Kind::automorphism;
  int index = 0;       // A_i or E_k
  double param = 0.0;  // automorphism parameter; unused otherwise

  std::string name() const {
    switch (kind) {
      case Kind::automorphism: return "A" + std::to_string(index);
      case Kind::involution: return "E" + std::to_string(index);
      case Kind::kernel: return "kernel";
    }
    return "?";
  }
};

inline AlgebraElement apply_step(const WordStep& s, const AlgebraElement& e) {
  switch (s.kind) {
    case WordStep::Kind::automorphism: return automorphism(s.index, s.param, e);
    case WordStep::Kind::involution: return involution(s.index, e);
    case WordStep::Kind::kernel: {
      AlgebraElement c = e;
      c[0] = 0.0;  // X1 is admitted by every autonomous system
      return c;
    }
  }
  return e;
}

struct OptimalRep {
  std::string algebra;  // "L4", "L6" or "L8"
  int family = 0;
  std::string label;
  std::map<std::string, double> params;  // alpha, beta, gamma as applicable
  std::vector<WordStep> word;
  double scale = 1.0;
  AlgebraElement representative{};
};

/// scale * (word applied to e)
inline AlgebraElement replay(const AlgebraElement& e, const OptimalRep& r) {
  AlgebraElement c = e;
  for (const auto& s : r.word) c = apply_step(s, c);
  for (auto& v : c) v *= r.scale;
  return c;
}

namespace detail {

inline std::string l4_label(int family) {
  switch (family) {
    case 1: return "X5 + alpha*X6";
    case 2: return "alpha*(X5 + X6) + X8 - X7";
    case 3: return "beta*(X5 + X6) + X7";
    default: return "0";
  }
}

inline std::string l6_label(int family) {
  switch (family) {
    case 1: return "X5 + alpha*X6";
    case 2: return "X4 + X5";
    case 3: return "X8 - X7";
    case 4: return "beta*X3 + alpha*(X5 + X6) + X8 - X7";
    case 5: return "beta*X4 + X7";
    case 6: return "X5 + X6 + X7";
    case 7: return "X3";
    default: return "0";
  }
}

inline std::string l8_label(int family) {
  switch (family) {
    case 8: return "X2";
    case 9: return "X1";
    case 10: return "0";
    default: return "gamma*X2 + " + l6_label(family);
  }
}

inline double par(const std::map<std::string, double>& p, const char* k) {
  auto it = p.find(k);
  return it == p.end() ? 0.0 : it->second;
}

}  // namespace detail

/// Canonical element of a listed family.
inline AlgebraElement representative(const std::string& algebra, int family,
                                     const std::map<std::string, double>& p) {
  double al = detail::par(p, "alpha"), be = detail::par(p, "beta"), ga = detail::par(p, "gamma");
  AlgebraElement c{};
  auto l6 = [&](int f) {
    switch (f) {
      case 1: c[4] = 1; c[5] = al; break;
      case 2: c[3] = 1; c[4] = 1; break;
      case 3: c[6] = -1; c[7] = 1; break;
      case 4: c[2] = be; c[4] = al; c[5] = al; c[6] = -1; c[7] = 1; break;
      case 5: c[3] = be; c[6] = 1; break;
      case 6: c[4] = 1; c[5] = 1; c[6] = 1; break;
      case 7: c[2] = 1; break;
      default: break;
    }
  };
  if (algebra == "L4") {
    switch (family) {
      case 1: c[4] = 1; c[5] = al; break;
      case 2: c[4] = al; c[5] = al; c[6] = -1; c[7] = 1; break;
      case 3: c[4] = be; c[5] = be; c[6] = 1; break;
      default: break;
    }
  } else if (algebra == "L6") {
    l6(family);
  } else {
    if (family <= 7) {
      l6(family);
      c[1] = ga;
    } else if (family == 8) {
      c[1] = 1;
    } else if (family == 9) {
      c[0] = 1;
    }
  }
  return c;
}

/// Published parameter ranges of the family.
inline bool in_published_list(const OptimalRep& r) {
  double al = detail::par(r.params, "alpha"), be = detail::par(r.params, "beta");
  bool l4 = r.algebra == "L4", l6 = r.algebra == "L6", l8 = r.algebra == "L8";
  if (!(l4 || l6 || l8)) return false;
  int f = r.family;
  if (l4 && (f < 1 || f > 4)) return false;
  if (l6 && (f < 1 || f > 8)) return false;
  if (l8 && (f < 1 || f > 10)) return false;
  bool ok = true;
  if (f == 1) ok = al >= -1.0 && al <= 1.0;
  if (l4 && f == 2) ok = al >= 0.0;
  if (l4 && f == 3) ok = be == 0.0 || be == 1.0;
  if (!l4 && f == 4) ok = al > 0.0 && (be == -1.0 || be == 0.0 || be == 1.0);
  if (!l4 && f == 5) ok = be == 0.0 || be == 1.0;
  return ok && representative(r.algebra, r.family, r.params) == r.representative;
}

namespace detail {

inline double max_abs8(const AlgebraElement& c, int from = 0) {
  double m = 0.0;
  for (int i = from; i < 8; ++i) m = std::max(m, std::abs(c[i]));
  return m;
}

inline constexpr double kRelZero = 1e-12;

class Normalizer {
 public:
  explicit Normalizer(const AlgebraElement& e) : c(e) {}

  AlgebraElement c;
  std::vector<WordStep> word;

  void A(int i, double a) {
    if (a == 0.0) return;
    word.push_back({WordStep::Kind::automorphism, i, a});
    c = automorphism(i, a, c);
  }
  void E(int k) {
    word.push_back({WordStep::Kind::involution, k, 0.0});
    c = involution(k, c);
  }
  void kernel() {
    word.push_back({WordStep::Kind::kernel, 0, 0.0});
    c[0] = 0.0;
  }
  bool small(double v, int from = 2) const { return std::abs(v) <= kRelZero * max_abs8(c, from); }

  // L4 part; acts on the whole vector but decides from c5..c8 only.
  // Returns the family and sets the scale and parameters.
  int l4(double& scale, double& alpha, double& beta) {
    scale = 1.0;
    alpha = beta = 0.0;
    Mat2 M{c[4], c[6], c[7], c[5]};
    if (M.max_abs() == 0.0) return 4;
    auto& c5 = c[4];
    auto& c6 = c[5];
    auto& c7 = c[6];
    auto& c8 = c[7];
    switch (classify2x2(M).kind) {
      case JordanKind::J1: {
        if (!(c7 == 0.0 && c8 == 0.0)) {
          double sq = std::sqrt((c5 - c6) * (c5 - c6) + 4.0 * c7 * c8);
          if (std::abs(c8) >= std::abs(c7)) {
            if (c7 != 0.0) {
              double q = c5 - c6;
              double Q = -0.5 * (q + (q >= 0 ? sq : -sq));
              A(7, -c7 / Q);
            }
            A(8, c8 / (c6 - c5));
          } else {
            if (c8 != 0.0) {
              double q = c6 - c5;
              double Q = -0.5 * (q + (q >= 0 ? sq : -sq));
              A(8, -c8 / Q);
            }
            A(7, c7 / (c5 - c6));
          }
        }
        if (std::abs(c6) > std::abs(c5)) E(4);
        scale = 1.0 / c5;
        alpha = c6 / c5;
        if (std::abs(alpha) <= kRelZero) alpha = 0.0;
        return 1;
      }
      case JordanKind::J2: {
        if (c5 != c6) A(7, (c6 - c5) / (2.0 * c8));
        A(5, 0.5 * std::log(std::abs(c8 / c7)));
        double m = 0.5 * (c5 + c6);
        double sigma = m < 0 ? -1.0 : 1.0;
        if ((c8 < 0 ? -1.0 : 1.0) != sigma) E(1);
        scale = 1.0 / c8;
        alpha = std::abs(m / c8);
        if (alpha <= kRelZero) alpha = 0.0;
        return 2;
      }
      case JordanKind::J3: {
        if (std::abs(c7) >= std::abs(c8)) {
          if (c8 != 0.0) A(8, (c5 - c6) / (2.0 * c7));
        } else {
          if (c7 != 0.0) A(7, (c6 - c5) / (2.0 * c8));
          E(4);
        }
        double lambda = 0.5 * (c5 + c6);
        if (std::abs(lambda) <= kRelZero * std::abs(c7)) {
          scale = 1.0 / c7;
          beta = 0.0;
          return 3;
        }
        if ((c7 < 0) != (lambda < 0)) E(2);
        A(5, std::log(lambda / c7));
        scale = 1.0 / lambda;
        beta = 1.0;
        return 3;
      }
    }
    return 4;
  }

  // Removes (c3, c4) with A3, A4 when M is invertible.
  void kill_translation() {
    Mat2 M{c[4], c[6], c[7], c[5]};
    auto ab = M.inverse().apply({c[2], c[3]});
    A(3, ab[0]);
    A(4, ab[1]);
  }

  int l6(double& scale, double& alpha, double& beta) {
    int f4 = l4(scale, alpha, beta);
    switch (f4) {
      case 1:
        if (alpha != 0.0) {
          kill_translation();
          return 1;
        }
        A(3, c[2] / c[4]);
        if (small(c[3])) return 1;
        if (c[3] / c[4] < 0) E(1);
        A(6, std::log(c[4] / c[3]));
        scale = 1.0 / c[4];
        return 2;
      case 2:
        kill_translation();
        beta = 0.0;
        return alpha == 0.0 ? 3 : 4;
      case 3:
        if (beta == 1.0) {
          kill_translation();
          return 6;
        }
        A(4, c[2] / c[6]);
        if (small(c[3])) {
          beta = 0.0;
          return 5;
        }
        if (c[3] / c[6] < 0) E(2);
        A(6, 0.5 * std::log(c[6] / c[3]));
        scale = 1.0 / c[6];
        beta = 1.0;
        return 5;
      default:
        if (c[2] == 0.0 && c[3] == 0.0) return 8;
        if (std::abs(c[2]) < std::abs(c[3])) E(4);
        A(8, -c[3] / c[2]);
        scale = 1.0 / c[2];
        return 7;
    }
  }
};

inline OptimalRep finish(const std::string& algebra, int family, std::string label,
                         std::map<std::string, double> params, Normalizer& n, double scale) {
  OptimalRep r;
  r.algebra = algebra;
  r.family = family;
  r.label = std::move(label);
  r.params = std::move(params);
  r.word = std::move(n.word);
  r.scale = scale;
  r.representative = representative(algebra, family, r.params);
  return r;
}

inline void require_zero_prefix(const AlgebraElement& e, int n, const char* algebra) {
  for (int i = 0; i < n; ++i)
    if (e[i] != 0.0)
      throw std::invalid_argument(std::string(algebra) + " elements must have c1..c" + std::to_string(n) +
                                  " equal to zero");
}

}  // namespace detail

inline OptimalRep normalize_L4(const AlgebraElement& e) {
  detail::require_zero_prefix(e, 4, "L4");
  detail::Normalizer n(e);
  double s, al, be;
  int f = n.l4(s, al, be);
  std::map<std::string, double> p;
  if (f == 1 || f == 2) p["alpha"] = al;
  if (f == 3) p["beta"] = be;
  return detail::finish("L4", f, detail::l4_label(f), p, n, s);
}

inline OptimalRep normalize_L6(const AlgebraElement& e) {
  detail::require_zero_prefix(e, 2, "L6");
  detail::Normalizer n(e);
  double s, al, be;
  int f = n.l6(s, al, be);
  std::map<std::string, double> p;
  if (f == 1 || f == 4) p["alpha"] = al;
  if (f == 4 || f == 5) p["beta"] = be;
  return detail::finish("L6", f, detail::l6_label(f), p, n, s);
}

/// Families 1-8 as listed; 9 is the kernel direction X1, 10 the zero element.
inline OptimalRep normalize_L8(const AlgebraElement& e) {
  detail::Normalizer n(e);
  double s = 1.0, al = 0.0, be = 0.0;
  std::map<std::string, double> p;
  double c2 = e[1];
  if (c2 != 0.0) {
    n.A(1, n.c[0] / c2);
    int f = n.l6(s, al, be);
    if (f == 8) {
      return detail::finish("L8", 8, detail::l8_label(8), p, n, 1.0 / c2);
    }
    if (f == 1 || f == 4) p["alpha"] = al;
    if (f == 4 || f == 5) p["beta"] = be;
    p["gamma"] = s * c2;
    return detail::finish("L8", f, detail::l8_label(f), p, n, s);
  }
  if (detail::max_abs8(e, 1) == 0.0) {
    if (e[0] == 0.0) return detail::finish("L8", 10, detail::l8_label(10), p, n, 1.0);
    return detail::finish("L8", 9, detail::l8_label(9), p, n, 1.0 / e[0]);
  }
  if (n.c[0] != 0.0) n.kernel();
  int f = n.l6(s, al, be);
  if (f == 1 || f == 4) p["alpha"] = al;
  if (f == 4 || f == 5) p["beta"] = be;
  p["gamma"] = 0.0;
  return detail::finish("L8", f, detail::l8_label(f), p, n, s);
}

/// Jordan kind -> L4 family (the Remark's correspondence).
inline OptimalRep kind_to_L4_rep(const Jordan2Result& r) {
  OptimalRep out;
  out.algebra = "L4";
  switch (r.kind) {
    case JordanKind::J1: {
      double big = std::abs(r.a11) >= std::abs(r.a22) ? r.a11 : r.a22;
      double other = std::abs(r.a11) >= std::abs(r.a22) ? r.a22 : r.a11;
      if (big == 0.0) {
        out.family = 4;
        break;
      }
      out.family = 1;
      out.params["alpha"] = other / big;
      break;
    }
    case JordanKind::J2:
      out.family = 2;
      out.params["alpha"] = std::abs(r.a11);
      break;
    case JordanKind::J3:
      out.family = 3;
      out.params["beta"] = r.a11 == 0.0 ? 0.0 : 1.0;
      break;
  }
  out.label = detail::l4_label(out.family);
  out.representative = representative("L4", out.family, out.params);
  return out;
}

}  // namespace liesym
