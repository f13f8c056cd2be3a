#pragma once

// Deterministic rejection sampling of evaluation points and the
// probabilistic identically-zero test built on it.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "liesym/expr.hpp"

namespace liesym {

class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

inline constexpr std::uint64_t kDefaultSeed = 20140615;

/// Box of per-variable intervals plus excluded loci: a point is rejected when
/// |locus(p)| <= guard for any locus, or when a locus cannot be evaluated.
/// `required` restricts derived quantities to open intervals (used for
/// domains pulled back through a change of variables).
struct SamplingDomain {
  std::map<std::string, Interval, std::less<>> vars;
  std::vector<Expr> excluded;
  std::vector<std::pair<Expr, Interval>> required;
  double guard = 1e-3;
  int samples = 200;
  std::uint64_t seed = kDefaultSeed;
  int attempts_per_sample = 50;

  SamplingDomain& set(const std::string& var, double lo, double hi) {
    vars[var] = Interval{lo, hi};
    return *this;
  }
  SamplingDomain& exclude(Expr locus) {
    excluded.push_back(std::move(locus));
    return *this;
  }
  SamplingDomain& require(Expr e, double lo, double hi) {
    required.emplace_back(std::move(e), Interval{lo, hi});
    return *this;
  }

  void validate() const {
    for (const auto& [name, iv] : vars)
      if (!(iv.lo < iv.hi)) throw std::invalid_argument("empty interval for '" + name + "'");
    if (!(guard > 0.0)) throw std::invalid_argument("guard must be positive");
    if (samples < 1) throw std::invalid_argument("sample count must be >= 1");
  }

  /// Open positive quadrant (0.2, 3) for y, z; x in (-1, 1); y', z' in (-1.5, 1.5).
  static SamplingDomain standard() {
    SamplingDomain d;
    d.set("x", -1.0, 1.0).set("y", 0.2, 3.0).set("z", 0.2, 3.0).set("yp", -1.5, 1.5).set("zp", -1.5, 1.5);
    return d;
  }
};

/// Stateful point generator; deterministic for a given domain and seed.
class PointSampler {
 public:
  explicit PointSampler(const SamplingDomain& dom, Binding fixed = {})
      : dom_(dom), fixed_(std::move(fixed)), rng_(dom.seed) {
    dom_.validate();
  }

  /// Draws a point that avoids the excluded loci; nullopt when the attempt
  /// budget for one sample is exhausted.
  std::optional<Binding> next() {
    for (int attempt = 0; attempt < dom_.attempts_per_sample; ++attempt) {
      Binding p = fixed_;
      for (const auto& [name, iv] : dom_.vars) {
        std::uniform_real_distribution<double> dist(iv.lo, iv.hi);
        p[name] = dist(rng_);
      }
      if (admissible(p)) return p;
    }
    return std::nullopt;
  }

  bool admissible(const Binding& p) const {
    for (const auto& locus : dom_.excluded) {
      try {
        if (std::abs(evaluate(locus, p)) <= dom_.guard) return false;
      } catch (const EvalError&) {
        return false;
      }
    }
    for (const auto& [e, iv] : dom_.required) {
      try {
        double v = evaluate(e, p);
        if (!(v > iv.lo && v < iv.hi)) return false;
      } catch (const EvalError&) {
        return false;
      }
    }
    return true;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  SamplingDomain dom_;
  Binding fixed_;
  std::mt19937_64 rng_;
};

struct ZeroTest {
  bool zero = true;
  double max_ratio = 0.0;  // max over points of |value| / (1 + scale)
  std::optional<Binding> witness;
  double witness_value = 0.0;
  int points = 0;
  explicit operator bool() const { return zero; }
};

/// True iff |e(p)| <= tol * (1 + scale(p)) at `dom.samples` admissible points,
/// scale(p) being the largest absolute top-level additive term of e. Points
/// where e itself cannot be evaluated are rejected like excluded loci.
/// Stops at the first violating point, which is reported as the witness.
inline ZeroTest is_zero_numeric(const Expr& e, const SamplingDomain& dom, double tol,
                                const Binding& fixed = {}) {
  ZeroTest out;
  for (const auto& s : symbols(e))
    if (!dom.vars.count(s) && !fixed.count(s)) throw EvalError("unbound symbol '" + s + "'");
  PointSampler sampler(dom, fixed);
  std::vector<Expr> terms;
  additive_terms(e, terms);
  long budget = static_cast<long>(dom.samples) * dom.attempts_per_sample;
  while (out.points < dom.samples) {
    if (budget-- <= 0)
      throw SamplingError("only " + std::to_string(out.points) + " of " + std::to_string(dom.samples) +
                          " valid sample points found");
    auto p = sampler.next();
    if (!p) continue;
    double value = 0.0;
    double scale = 0.0;
    try {
      value = evaluate(e, *p);
      for (const auto& t : terms) scale = std::max(scale, std::abs(evaluate(t, *p)));
    } catch (const EvalError&) {
      continue;
    }
    ++out.points;
    double ratio = std::abs(value) / (1.0 + scale);
    out.max_ratio = std::max(out.max_ratio, ratio);
    if (std::abs(value) > tol * (1.0 + scale)) {
      out.zero = false;
      out.witness = *p;
      out.witness_value = value;
      return out;
    }
  }
  return out;
}

}  // namespace liesym
