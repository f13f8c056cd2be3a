#include <gtest/gtest.h>

#include <random>

#include "liesym/odesys.hpp"
#include "liesym/parse.hpp"

using namespace liesym;

namespace {

// classic RK4 on (y, z, y', z')
struct State {
  double y, z, yp, zp;
};

State rk4(const OdeSystem& s, double x0, double x1, State u, int steps = 2000) {
  double h = (x1 - x0) / steps;
  auto f = [&](double x, const State& v) {
    auto a = s.rhs(x, v.y, v.z);
    return State{v.yp, v.zp, a[0], a[1]};
  };
  auto add = [](const State& a, const State& b, double k) {
    return State{a.y + k * b.y, a.z + k * b.z, a.yp + k * b.yp, a.zp + k * b.zp};
  };
  double x = x0;
  for (int i = 0; i < steps; ++i) {
    State k1 = f(x, u);
    State k2 = f(x + h / 2, add(u, k1, h / 2));
    State k3 = f(x + h / 2, add(u, k2, h / 2));
    State k4 = f(x + h, add(u, k3, h));
    u = State{u.y + h / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y), u.z + h / 6 * (k1.z + 2 * k2.z + 2 * k3.z + k4.z),
              u.yp + h / 6 * (k1.yp + 2 * k2.yp + 2 * k3.yp + k4.yp),
              u.zp + h / 6 * (k1.zp + 2 * k2.zp + 2 * k3.zp + k4.zp)};
    x += h;
  }
  return u;
}

OdeSystem sample_system() {
  return OdeSystem(parse("-y + 0.3*sin(x)*z^2/(1+y^2)"), parse("-0.5*z + 0.2*y*z*cos(x)"));
}

Mat2 random_P(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-2, 2);
  for (;;) {
    Mat2 P{d(rng), d(rng), d(rng), d(rng)};
    if (std::abs(P.det()) > 0.3) return P;
  }
}

}  // namespace

TEST(LinearChange, IdentityIsStructuralNoOp) {
  OdeSystem s(parse("exp(y)*z"), parse("y^2 - z"));
  OdeSystem t = linear_change(s, Mat2::identity());
  EXPECT_EQ(fold_constants(t.F()), fold_constants(s.F()));
  EXPECT_EQ(fold_constants(t.G()), fold_constants(s.G()));
}

TEST(LinearChange, SwapMatchesDirectSubstitution) {
  OdeSystem s(parse("z"), parse("y"));
  Mat2 P{0, 1, 1, 0};
  OdeSystem t = linear_change(s, P);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-3, 3);
  for (int i = 0; i < 100; ++i) {
    double yt = d(rng), zt = d(rng);
    auto v = t.rhs(0, yt, zt);
    // original at (y, z) = (zt, yt), then components swapped
    auto o = s.rhs(0, zt, yt);
    EXPECT_EQ(v[0], o[1]);
    EXPECT_EQ(v[1], o[0]);
  }
}

TEST(LinearChange, RandomMatrixMatchesPointOracle) {
  OdeSystem s(parse("exp(y/4)*z + x*y"), parse("sin(y*z) - z^3"));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(-1, 1);
  for (int k = 0; k < 10; ++k) {
    Mat2 P = random_P(rng);
    Mat2 Q = P.inverse();
    OdeSystem t = linear_change(s, P);
    for (int i = 0; i < 20; ++i) {
      double x = d(rng), yt = d(rng), zt = d(rng);
      auto pre = Q.apply({yt, zt});
      auto o = s.rhs(x, pre[0], pre[1]);
      auto want = P.apply(o);
      auto got = t.rhs(x, yt, zt);
      EXPECT_NEAR(got[0], want[0], 1e-12 * (1 + std::abs(want[0])));
      EXPECT_NEAR(got[1], want[1], 1e-12 * (1 + std::abs(want[1])));
    }
  }
}

TEST(LinearChange, DiagonalScaling) {
  OdeSystem s(parse("y"), parse("z"));
  OdeSystem t = linear_change(s, Mat2::diag(2, 1));
  EXPECT_DOUBLE_EQ(t.rhs(0, 2, 1)[0], 2.0);
}

TEST(LinearChange, InverseRoundTripAndAutonomy) {
  OdeSystem s(parse("y^2*exp(-z) + 1"), parse("y*z/(1+z^2)"), {{"c", 1.0}});
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(-2, 2);
  for (int k = 0; k < 10; ++k) {
    Mat2 P = random_P(rng);
    OdeSystem t = linear_change(s, P);
    EXPECT_TRUE(t.is_autonomous());
    OdeSystem back = linear_change(t, P.inverse());
    for (int i = 0; i < 100; ++i) {
      double y = d(rng), z = d(rng);
      auto a = s.rhs(0, y, z), b = back.rhs(0, y, z);
      EXPECT_NEAR(b[0], a[0], 1e-9 * (1 + std::abs(a[0])));
      EXPECT_NEAR(b[1], a[1], 1e-9 * (1 + std::abs(a[1])));
    }
  }
  EXPECT_FALSE(linear_change(OdeSystem(parse("x*y"), parse("z")), Mat2{1, 1, 0, 1}).is_autonomous());
}

TEST(LinearChange, SingularMatrixRejected) {
  OdeSystem s(parse("y"), parse("z"));
  EXPECT_THROW(linear_change(s, Mat2{1, 2, 2, 4}), SingularMatrixError);
}

TEST(TransformDomain, PreimagesStayInsideOriginalBox) {
  SamplingDomain d = SamplingDomain::standard();
  d.exclude(parse("y - z"));
  Mat2 P{1, 2, -1, 1};
  SamplingDomain t = transform_domain(d, P);
  PointSampler s(t);
  Mat2 Q = P.inverse();
  for (int i = 0; i < 200; ++i) {
    auto p = s.next();
    if (!p) continue;
    auto pre = Q.apply({p->at("y"), p->at("z")});
    EXPECT_GT(pre[0], 0.2);
    EXPECT_LT(pre[0], 3.0);
    EXPECT_GT(pre[1], 0.2);
    EXPECT_LT(pre[1], 3.0);
    EXPECT_GT(std::abs(pre[0] - pre[1]), d.guard * 0.999);
  }
}

TEST(ShiftChange, ZeroShiftUnchanged) {
  OdeSystem s = sample_system();
  OdeSystem t = shift_change(s, num(0), num(0));
  EXPECT_EQ(fold_constants(t.F()), fold_constants(s.F()));
  EXPECT_EQ(fold_constants(t.G()), fold_constants(s.G()));
}

TEST(ShiftChange, ConstantForcing) {
  OdeSystem t = shift_change(OdeSystem(num(0), num(0)), parse("x^2"), num(0));
  EXPECT_DOUBLE_EQ(t.rhs(0.3, 1, 1)[0], 2.0);
  EXPECT_DOUBLE_EQ(t.rhs(0.3, 1, 1)[1], 0.0);
}

TEST(ShiftChange, RejectsDependenceOnY) {
  EXPECT_THROW(shift_change(sample_system(), parse("y*x"), num(0)), std::invalid_argument);
}

TEST(ShiftChange, SolutionsMapToSolutions) {
  OdeSystem s = sample_system();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> c(-1, 1);
  for (int k = 0; k < 3; ++k) {
    // random cubic shifts
    Expr x = sym("x");
    Expr phi = c(rng) + c(rng) * x + c(rng) * pow(x, 2.0) + c(rng) * pow(x, 3.0);
    Expr psi = c(rng) + c(rng) * x + c(rng) * pow(x, 2.0);
    OdeSystem t = shift_change(s, phi, psi);
    Expr dphi = differentiate(phi, "x"), dpsi = differentiate(psi, "x");
    auto ev = [](const Expr& e, double xv) { return evaluate(e, {{"x", xv}}); };
    State u0{c(rng), c(rng), c(rng), c(rng)};
    State t0{u0.y + ev(phi, 0), u0.z + ev(psi, 0), u0.yp + ev(dphi, 0), u0.zp + ev(dpsi, 0)};
    for (double x1 : {0.25, 0.5, 1.0}) {
      State a = rk4(s, 0, x1, u0), b = rk4(t, 0, x1, t0);
      EXPECT_NEAR(b.y, a.y + ev(phi, x1), 1e-6);
      EXPECT_NEAR(b.z, a.z + ev(psi, x1), 1e-6);
      EXPECT_NEAR(b.yp, a.yp + ev(dphi, x1), 1e-6);
    }
  }
}

TEST(ReparamChange, IdentityMap) {
  OdeSystem s = sample_system();
  SamplingDomain d;
  d.set("x", -1, 1);
  OdeSystem t = reparam_change(s, sym("x"), sym("x"), d);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 50; ++i) {
    double x = u(rng), y = u(rng), z = u(rng);
    auto a = s.rhs(x, y, z), b = t.rhs(x, y, z);
    EXPECT_NEAR(a[0], b[0], 1e-14);
    EXPECT_NEAR(a[1], b[1], 1e-14);
  }
}

TEST(ReparamChange, ConstraintHoldsForExponential) {
  Expr phi = parse("exp(2*x)");
  Expr psi = sqrt(differentiate(phi, "x"));
  SamplingDomain d;
  d.set("x", -1, 1);
  Expr c = differentiate(differentiate(phi, "x"), "x") / differentiate(phi, "x") -
           2.0 * differentiate(psi, "x") / psi;
  EXPECT_TRUE(is_zero_numeric(c, d, 1e-12).zero);
  // psi = sqrt(2) e^x
  EXPECT_NEAR(evaluate(psi, {{"x", 0.4}}), std::sqrt(2.0) * std::exp(0.4), 1e-12);
}

TEST(ReparamChange, RejectsDecreasingPhiAndWrongInverse) {
  SamplingDomain d;
  d.set("x", -1, 1);
  EXPECT_THROW(reparam_change(sample_system(), parse("-x"), parse("-x"), d), std::invalid_argument);
  EXPECT_THROW(reparam_change(sample_system(), parse("exp(x)"), parse("x"), d), std::invalid_argument);
}

TEST(ReparamChange, SolutionsMapToSolutions) {
  OdeSystem s = sample_system();
  SamplingDomain d;
  d.set("x", 0, 1);
  struct Case {
    const char* phi;
    const char* inv;
  };
  for (Case cs : {Case{"exp(x)", "ln(x)"}, Case{"2*x + 1", "(x - 1)/2"}, Case{"exp(2*x)/2", "ln(2*x)/2"}}) {
    Expr phi = parse(cs.phi);
    OdeSystem t = reparam_change(s, phi, parse(cs.inv), d);
    Expr dphi = differentiate(phi, "x");
    Expr psi = sqrt(dphi);
    Expr dpsi = differentiate(psi, "x");
    auto ev = [](const Expr& e, double xv) { return evaluate(e, {{"x", xv}}); };
    State u0{0.4, -0.3, 0.2, 0.5};
    // y~ = y psi, dy~/dx~ = (y' psi + y psi') / phi'
    auto map = [&](double x, const State& u) {
      double p = ev(psi, x), dp = ev(dpsi, x), f1 = ev(dphi, x);
      return State{u.y * p, u.z * p, (u.yp * p + u.y * dp) / f1, (u.zp * p + u.z * dp) / f1};
    };
    State t0 = map(0.0, u0);
    for (double x1 : {0.5, 1.0}) {
      State a = map(x1, rk4(s, 0, x1, u0));
      State b = rk4(t, ev(phi, 0), ev(phi, x1), t0, 4000);
      EXPECT_NEAR(b.y, a.y, 1e-6) << cs.phi;
      EXPECT_NEAR(b.z, a.z, 1e-6) << cs.phi;
      EXPECT_NEAR(b.yp, a.yp, 1e-6) << cs.phi;
      EXPECT_NEAR(b.zp, a.zp, 1e-6) << cs.phi;
    }
  }
}

TEST(Reducibility, Hints) {
  SamplingDomain d;
  d.set("u", 0.2, 3.0);
  EXPECT_EQ(reducibility_hint(parse("u^2"), parse("5"), d), ReducibilityHint::ReducibleFPrimeGPrimeZero);
  EXPECT_EQ(reducibility_hint(parse("u^3"), parse("2*u^3"), d), ReducibilityHint::ReducibleProportional);
  EXPECT_EQ(reducibility_hint(parse("u^(-3)"), parse("u*u^(-3)"), d), ReducibilityHint::NoHint);
  EXPECT_EQ(to_string(ReducibilityHint::NoHint), "NoHint");
}

TEST(Reducibility, SystemLevel) {
  SamplingDomain d = SamplingDomain::standard();
  EXPECT_EQ(system_reducibility_hint(OdeSystem(parse("2*y - z + 1"), parse("x*z")), d), SystemHint::ReducibleLinear);
  EXPECT_EQ(system_reducibility_hint(OdeSystem(parse("exp(y*z)"), parse("3*exp(y*z)")), d),
            SystemHint::ReducibleProportional);
  EXPECT_EQ(system_reducibility_hint(OdeSystem(parse("exp(y)"), parse("exp(z)")), d), SystemHint::NoHint);
}

TEST(OdeSystemTest, Invariants) {
  EXPECT_THROW(OdeSystem(parse("yp"), parse("z")), std::invalid_argument);
  OdeSystem s(parse("gamma*y"), parse("z"), {{"gamma", 2.0}});
  EXPECT_TRUE(s.is_autonomous());
  EXPECT_FALSE(OdeSystem(parse("x"), parse("z")).is_autonomous());
  EXPECT_DOUBLE_EQ(s.rhs(0, 3, 1)[0], 6.0);
  EXPECT_TRUE(symbols(s.bound_F()).count("gamma") == 0);
}
