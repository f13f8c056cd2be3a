#pragma once

// Real Jordan forms of 2x2 matrices under conjugation A -> P A P^-1:
//   J1 = diag(l1, l2),  J2 = [[a, b], [-b, a]] (b > 0),  J3 = [[l, 1], [0, l]].

#include <algorithm>
#include <cmath>
#include <string_view>

#include "liesym/mat2.hpp"

namespace liesym {

enum class JordanKind { J1, J2, J3 };

inline std::string_view to_string(JordanKind k) {
  switch (k) {
    case JordanKind::J1: return "J1";
    case JordanKind::J2: return "J2";
    case JordanKind::J3: return "J3";
  }
  return "?";
}

struct Jordan2Result {
  JordanKind kind = JordanKind::J1;
  // J1: eigenvalues (a11, a22). J2: a11 = a / b, the diagonal after the
  // rotation part is scaled to 1. J3: a11 = a22 = the double eigenvalue.
  double a11 = 0.0;
  double a22 = 0.0;
  double re = 0.0;        // J2 only: real part a
  double rotation = 0.0;  // J2 only: b > 0
  Mat2 J{};
  Mat2 P = Mat2::identity();

  double residual(const Mat2& A) const { return max_abs_diff(P * A * P.inverse(), J); }
};

namespace detail {

// Largest-magnitude component made positive.
inline void orient(double& u, double& v) {
  double big = std::abs(u) >= std::abs(v) ? u : v;
  if (big < 0) {
    u = -u;
    v = -v;
  }
}

}  // namespace detail

/// Default band: 1e-9 * max(1, |A|_max)^2 on the discriminant.
inline double default_tol_defect(const Mat2& A) {
  double s = std::max(1.0, A.max_abs());
  return 1e-9 * s * s;
}

inline Jordan2Result classify2x2(const Mat2& A, double tol_defect = -1.0) {
  if (tol_defect < 0) tol_defect = default_tol_defect(A);
  Jordan2Result r;
  double tr = A.trace();
  double dt = A.det();
  // (a11 - a22)^2 + 4 a12 a21 == tr^2 - 4 det, without the cancellation
  double d = A.a11 - A.a22;
  double disc = d * d + 4.0 * A.a12 * A.a21;

  if (A.a12 == 0.0 && A.a21 == 0.0) {
    r.kind = JordanKind::J1;
    r.a11 = A.a11;
    r.a22 = A.a22;
    r.J = Mat2::diag(A.a11, A.a22);
    return r;
  }

  if (disc > tol_defect) {
    double sq = std::sqrt(disc);
    double t = 0.5 * (tr + (tr >= 0 ? sq : -sq));
    double l1 = t;
    double l2 = t != 0.0 ? dt / t : tr - t;
    if (std::abs(l2 - A.a11) < std::abs(l1 - A.a11)) std::swap(l1, l2);
    auto left_vec = [&](double l, double& u, double& v) {
      double u1 = A.a21, v1 = l - A.a11;
      double u2 = l - A.a22, v2 = A.a12;
      if (std::hypot(u1, v1) >= std::hypot(u2, v2)) {
        u = u1;
        v = v1;
      } else {
        u = u2;
        v = v2;
      }
      double n = std::hypot(u, v);
      u /= n;
      v /= n;
      detail::orient(u, v);
    };
    left_vec(l1, r.P.a11, r.P.a12);
    left_vec(l2, r.P.a21, r.P.a22);
    r.kind = JordanKind::J1;
    r.a11 = l1;
    r.a22 = l2;
    r.J = Mat2::diag(l1, l2);
    return r;
  }

  if (disc < -tol_defect) {
    double a = 0.5 * tr;
    double b = 0.5 * std::sqrt(-disc);
    Mat2 N = A - Mat2::diag(a, a);
    // p1 = e1 or e2, p2 = p1 (A - a I) / b
    if (std::abs(A.a12) >= std::abs(A.a21))
      r.P = {1.0, 0.0, N.a11 / b, N.a12 / b};
    else
      r.P = {0.0, 1.0, N.a21 / b, N.a22 / b};
    r.kind = JordanKind::J2;
    r.re = a;
    r.rotation = b;
    r.a11 = a / b;
    r.a22 = a / b;
    r.J = {a, b, -b, a};
    return r;
  }

  // defective: p1 N = p2, p2 N ~ 0
  double l = 0.5 * tr;
  Mat2 N = A - Mat2::diag(l, l);
  if (std::abs(N.a12) >= std::abs(N.a21))
    r.P = {1.0, 0.0, N.a11, N.a12};
  else
    r.P = {0.0, 1.0, N.a21, N.a22};
  r.kind = JordanKind::J3;
  r.a11 = l;
  r.a22 = l;
  r.J = {l, 1.0, 0.0, l};
  return r;
}

}  // namespace liesym
