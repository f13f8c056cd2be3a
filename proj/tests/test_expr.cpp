#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "liesym/parse.hpp"
#include "liesym/sampling.hpp"

using namespace liesym;

namespace {

// Plain recursion over the node kinds with std:: calls and no checks.
double ref_eval(const Expr& e, const Binding& b) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::constant: return e.value();
    case K::symbol: return b.at(e.name());
    case K::sum: return ref_eval(e.arg(0), b) + ref_eval(e.arg(1), b);
    case K::product: return ref_eval(e.arg(0), b) * ref_eval(e.arg(1), b);
    case K::quotient: return ref_eval(e.arg(0), b) / ref_eval(e.arg(1), b);
    case K::power: return std::pow(ref_eval(e.arg(0), b), ref_eval(e.arg(1), b));
    case K::neg: return -ref_eval(e.arg(0), b);
    case K::call:
      switch (e.fn()) {
        case Fn::sin: return std::sin(ref_eval(e.arg(0), b));
        case Fn::cos: return std::cos(ref_eval(e.arg(0), b));
        case Fn::exp: return std::exp(ref_eval(e.arg(0), b));
        case Fn::ln: return std::log(ref_eval(e.arg(0), b));
        case Fn::sqrt: return std::sqrt(ref_eval(e.arg(0), b));
        case Fn::atan: return std::atan(ref_eval(e.arg(0), b));
        case Fn::atan2: return std::atan2(ref_eval(e.arg(0), b), ref_eval(e.arg(1), b));
      }
  }
  return NAN;
}

// Random raw trees that stay finite on y, z in (0.2, 3): no folding involved.
Expr random_tree(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 11);
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  switch (pick(rng)) {
    case 0: return Expr::constant(std::round(c(rng) * 4) / 4);
    case 1: return Expr::symbol("y");
    case 2: return Expr::symbol("z");
    case 3: return Expr::make_binary(Expr::Kind::sum, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 4: return Expr::make_binary(Expr::Kind::product, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 5:
      return Expr::make_binary(Expr::Kind::quotient, random_tree(rng, depth - 1),
                               Expr::make_binary(Expr::Kind::sum, Expr::constant(1.0),
                                                 Expr::make_call(Fn::exp, {random_tree(rng, depth - 1)})));
    case 6: return Expr::make_binary(Expr::Kind::power, Expr::symbol("y"), Expr::constant(std::round(c(rng) * 2) / 2));
    case 7: return Expr::make_neg(random_tree(rng, depth - 1));
    case 8: return Expr::make_call(Fn::sin, {random_tree(rng, depth - 1)});
    case 9: return Expr::make_call(Fn::atan2, {Expr::symbol("z"), random_tree(rng, depth - 1)});
    case 10:
      return Expr::make_call(Fn::sqrt, {Expr::make_binary(Expr::Kind::sum, Expr::constant(1.0),
                                                          Expr::make_binary(Expr::Kind::power, random_tree(rng, depth - 1),
                                                                            Expr::constant(2.0)))});
    default: return Expr::make_call(Fn::atan, {random_tree(rng, depth - 1)});
  }
}

Binding at(double y, double z, double x = 0.0) { return {{"x", x}, {"y", y}, {"z", z}}; }

}  // namespace

TEST(Parse, NegativeExponentIsConstant) {
  Expr e = parse("y^(-3)");
  ASSERT_EQ(e.kind(), Expr::Kind::power);
  EXPECT_TRUE(e.arg(0).is_symbol());
  EXPECT_EQ(e.arg(0).name(), "y");
  EXPECT_TRUE(e.arg(1).is_constant(-3.0));
}

TEST(Parse, TauAtAlphaZero) {
  Expr e = parse("exp(4*alpha*atan2(z,y))*(y^2+z^2)^(-2)");
  EXPECT_DOUBLE_EQ(evaluate(e, {{"alpha", 0.0}, {"y", 1.0}, {"z", 1.0}}), 0.25);
}

TEST(Parse, SyntaxErrorReportsOffendingToken) {
  try {
    parse("y + * z");
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
    EXPECT_NE(std::string(e.what()).find('*'), std::string::npos);
  }
}

TEST(Parse, UnknownFunctionRejected) { EXPECT_THROW(parse("tan(y)"), ParseError); }

TEST(Parse, UnboundSymbolOnlyAtEvaluation) {
  Expr e = parse("q*y");
  EXPECT_THROW(evaluate(e, at(1, 1)), EvalError);
}

TEST(Parse, Precedence) {
  EXPECT_DOUBLE_EQ(evaluate(parse("2^3^2"), {}), 512.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("-y^2"), at(3, 0)), -9.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("1 - 2 - 3"), {}), -4.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("8/4/2"), {}), 1.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("2*y^2/4"), at(2, 0)), 2.0);
}

TEST(Parse, PrintRoundTripIsStructurallyStable) {
  for (const char* s : {"y^(-3)", "exp(4*alpha*atan2(z,y))*(y^2+z^2)^(-2)", "-y^2 + sin(2*x)*z - 3/z",
                        "kappa*y + f0*y/z^4*(z/y)^(-4/(gamma-1))", "--y", "sqrt(y)-(-2)"}) {
    Expr e = parse(s);
    EXPECT_EQ(parse(print(e)), e) << s;
    EXPECT_EQ(print(parse(print(e))), print(e)) << s;
  }
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    Expr e = random_tree(rng, 4);
    EXPECT_EQ(parse(print(e)), e) << print(e);
  }
}

TEST(Differentiate, PowerRule) {
  Expr d = differentiate(parse("u^(-3)"), "u");
  for (double u : {0.5, 1.0, 2.5}) EXPECT_NEAR(evaluate(d, {{"u", u}}), -3.0 * std::pow(u, -4.0), 1e-12);
  EXPECT_EQ(fold_constants(d), fold_constants(parse("-3*u^(-4)")));
}

TEST(Differentiate, ChainRule) {
  Expr d = differentiate(parse("sin(2*x)"), "x");
  EXPECT_EQ(fold_constants(d), fold_constants(parse("2*cos(2*x)")));
}

TEST(Differentiate, MatchesCentralDifference) {
  Expr e = parse("exp(4*alpha*atan2(z,y))");
  Binding b{{"y", 1.0}, {"z", 2.0}, {"alpha", 0.5}};
  double h = 1e-6;
  Binding bp = b, bm = b;
  bp["y"] += h;
  bm["y"] -= h;
  double fd = (evaluate(e, bp) - evaluate(e, bm)) / (2 * h);
  double an = evaluate(differentiate(e, "y"), b);
  EXPECT_NEAR(an, fd, 1e-6 * std::abs(fd));
}

TEST(Differentiate, RandomTreesAgainstFiniteDifferences) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pt(0.4, 2.8);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    Expr e = random_tree(rng, 4);
    Expr d = differentiate(e, "z");
    Binding b = at(pt(rng), pt(rng));
    double h = 1e-5;
    Binding bp = b, bm = b;
    bp["z"] += h;
    bm["z"] -= h;
    double fp = ref_eval(e, bp), fm = ref_eval(e, bm), an = ref_eval(d, b);
    if (!std::isfinite(fp) || !std::isfinite(fm) || !std::isfinite(an) || std::abs(an) > 1e4) continue;
    double fd = (fp - fm) / (2 * h);
    EXPECT_NEAR(an, fd, 1e-5 * (1 + std::abs(fd))) << print(e);
    ++checked;
  }
  EXPECT_GT(checked, 150);
}

TEST(Differentiate, ParametersAreConstants) {
  Expr d = differentiate(parse("gamma*y^2 + gamma"), "y");
  EXPECT_DOUBLE_EQ(evaluate(d, {{"gamma", 3.0}, {"y", 2.0}}), 12.0);
  EXPECT_DOUBLE_EQ(evaluate(differentiate(parse("gamma*y^2"), "gamma"), {{"y", 2.0}}), 4.0);
}

TEST(Differentiate, Linearity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pt(0.3, 2.9), co(-3, 3);
  for (int i = 0; i < 100; ++i) {
    Expr e1 = random_tree(rng, 3), e2 = random_tree(rng, 3);
    double a = co(rng), b = co(rng);
    Expr lhs = differentiate(a * e1 + b * e2, "y");
    Expr rhs = a * differentiate(e1, "y") + b * differentiate(e2, "y");
    Binding p = at(pt(rng), pt(rng));
    double l, r;
    try {
      l = evaluate(lhs, p);
      r = evaluate(rhs, p);
    } catch (const EvalError&) {
      continue;
    }
    EXPECT_NEAR(l, r, 1e-10 * (1 + std::abs(r)));
  }
}

TEST(Evaluate, Basics) {
  EXPECT_EQ(evaluate(num(7), at(1, 2)), 7.0);
  EXPECT_EQ(evaluate(parse("y^2+z^2"), at(3, 4)), 25.0);
  EXPECT_EQ(evaluate(parse("z/y"), at(2, 5)), 2.5);
}

TEST(Evaluate, DomainErrorsAreReported) {
  EXPECT_THROW(evaluate(parse("ln(y)"), at(-1, 1)), EvalError);
  EXPECT_THROW(evaluate(parse("ln(y)"), at(0, 1)), EvalError);
  EXPECT_THROW(evaluate(parse("1/(y-1)"), at(1, 1)), EvalError);
  EXPECT_THROW(evaluate(parse("y^0.5"), at(-2, 1)), EvalError);
  EXPECT_THROW(evaluate(parse("sqrt(y)"), at(-2, 1)), EvalError);
  EXPECT_THROW(evaluate(parse("exp(y)"), at(1000, 1)), EvalError);
  EXPECT_DOUBLE_EQ(evaluate(parse("y^3"), at(-2, 1)), -8.0);
}

TEST(Evaluate, AgreesWithReferenceEvaluatorBitForBit) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pt(0.2, 3.0);
  int n = 0;
  for (int i = 0; i < 500; ++i) {
    Expr e = random_tree(rng, 5);
    Binding b = at(pt(rng), pt(rng));
    double r = ref_eval(e, b);
    if (!std::isfinite(r)) continue;
    double v = 0;
    try {
      v = evaluate(e, b);
    } catch (const EvalError&) {
      continue;  // only where the reference is itself invalid
    }
    EXPECT_EQ(v, r) << print(e);
    ++n;
  }
  EXPECT_GT(n, 400);
}

TEST(FoldConstants, Examples) {
  EXPECT_EQ(fold_constants(parse("2*3*y")), fold_constants(parse("6*y")));
  EXPECT_EQ(fold_constants(parse("2*3*y")).kind(), Expr::Kind::product);
  EXPECT_TRUE(fold_constants(parse("2*3*y")).arg(0).is_constant(6.0));
  EXPECT_EQ(fold_constants(parse("y + 0")), sym("y"));
  EXPECT_TRUE(fold_constants(parse("(1-1)*exp(x)")).is_constant(0.0));
  EXPECT_EQ(fold_constants(parse("y^1")), sym("y"));
  EXPECT_EQ(fold_constants(parse("1*z")), sym("z"));
}

TEST(FoldConstants, IdempotentAndSemanticsPreserving) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> pt(0.2, 3.0);
  for (int i = 0; i < 100; ++i) {
    Expr e = random_tree(rng, 5);
    Expr f = fold_constants(e);
    EXPECT_EQ(fold_constants(f), f);
    Binding b = at(pt(rng), pt(rng));
    double r = ref_eval(e, b);
    if (!std::isfinite(r)) continue;
    EXPECT_NEAR(evaluate(f, b), r, 1e-12 * (1 + std::abs(r))) << print(e);
  }
}

TEST(ZeroTest, ConstantZero) {
  SamplingDomain d;
  d.set("x", 0, 1);
  EXPECT_TRUE(is_zero_numeric(num(0), d, 1e-12).zero);
}

TEST(ZeroTest, PythagoreanIdentity) {
  SamplingDomain d;
  d.set("x", 0, 10);
  EXPECT_TRUE(is_zero_numeric(parse("sin(x)^2 + cos(x)^2 - 1"), d, 1e-10).zero);
}

TEST(ZeroTest, NonzeroGivesWitness) {
  SamplingDomain d;
  d.set("x", 0, 10).set("y", 0, 10);
  Expr e = parse("x*y - 1");
  auto r = is_zero_numeric(e, d, 1e-10);
  ASSERT_FALSE(r.zero);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_NE(evaluate(e, *r.witness), 0.0);
  EXPECT_DOUBLE_EQ(evaluate(e, *r.witness), r.witness_value);
}

TEST(ZeroTest, RelativeToLargestTerm) {
  SamplingDomain d;
  d.set("y", 1e6, 2e6);
  // cancellation at magnitude 1e24 leaves rounding noise far above 1e-10 absolute
  EXPECT_TRUE(is_zero_numeric(parse("(y^2 + 1)^2 - y^4 - 2*y^2 - 1"), d, 1e-10).zero);
}

TEST(ZeroTest, ExcludedLociAndFailure) {
  SamplingDomain d;
  d.set("y", -1, 1).exclude(parse("y"));
  d.guard = 0.5;
  auto r = is_zero_numeric(parse("y/y - 1"), d, 1e-12);
  EXPECT_TRUE(r.zero);
  SamplingDomain bad;
  bad.set("y", -1, 1).exclude(parse("y"));
  bad.guard = 5.0;  // excludes everything
  EXPECT_THROW(is_zero_numeric(parse("y"), bad, 1e-12), SamplingError);
  EXPECT_THROW(is_zero_numeric(parse("w"), d, 1e-12), EvalError);
}

TEST(ZeroTest, DeterministicForSeed) {
  SamplingDomain d;
  d.set("x", 0, 10).set("y", 0, 10);
  auto a = is_zero_numeric(parse("x - y"), d, 1e-10);
  auto b = is_zero_numeric(parse("x - y"), d, 1e-10);
  EXPECT_EQ(*a.witness, *b.witness);
}

TEST(SamplingDomainTest, Validation) {
  SamplingDomain d;
  d.set("x", 1, 1);
  EXPECT_THROW(d.validate(), std::invalid_argument);
  SamplingDomain e = SamplingDomain::standard();
  e.samples = 0;
  EXPECT_THROW(e.validate(), std::invalid_argument);
}
