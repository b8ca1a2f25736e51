#pragma once
// Zero testing: symbolic when the canonical form is empty, otherwise by
// evaluation at seeded pseudo-random points.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "supergeo/expr.hpp"

namespace sgeo {

enum class Certainty { symbolic, numeric, nonzero };

inline const char* certainty_name(Certainty c) {
  switch (c) {
    case Certainty::symbolic: return "symbolic-zero";
    case Certainty::numeric: return "numeric-zero";
    default: return "nonzero";
  }
}

struct ZeroTest {
  Certainty certainty = Certainty::symbolic;
  double max_abs = 0;
  std::string witness;  // sample point where the value was largest (nonzero case)

  bool zero() const { return certainty != Certainty::nonzero; }
  explicit operator bool() const { return zero(); }
};

struct SampleOptions {
  int samples = 8;
  double tolerance = 1e-9;
  int max_attempts = 32;
};

/// Thrown internally when a sample point hits a pole or an infeasible relation.
class RejectSample : public Error {
 public:
  using Error::Error;
};

/// One random point. Atom values are drawn lazily, so every atom an
/// expression touches gets one consistent value per point.
class SamplePoint {
 public:
  explicit SamplePoint(std::mt19937_64& rng) : rng_(rng) {}

  double value(AtomId id) {
    if (auto it = values_.find(id); it != values_.end()) return it->second;
    const AtomInfo& info = atom_info(id);
    double v = 0;
    switch (info.kind) {
      case AtomKind::even_coordinate: v = uniform(-1, 1); break;
      case AtomKind::parameter: {
        if (auto rel = RelationRegistry::global().find(id)) {
          double a = eval(rel->num, fn());
          double b = eval(rel->den, fn());
          if (std::abs(b) < 1e-12 || a / b < 0) throw RejectSample("relation has no real value at the sample point");
          v = std::sqrt(a / b);
        } else {
          v = uniform(-2, 2);
        }
        break;
      }
      case AtomKind::function_value: v = uniform(0.5, 2); break;
      case AtomKind::sine: v = std::sin(eval(info.trig, fn())); break;
      case AtomKind::cosine: v = std::cos(eval(info.trig, fn())); break;
      default: throw Error("cannot sample atom " + info.name);
    }
    values_.emplace(id, v);
    return v;
  }

  AtomValues fn() {
    return [this](AtomId id) { return value(id); };
  }

  double eval_coeff(const Coeff& c) {
    double d = eval(c.den(), fn());
    if (!std::isfinite(d) || std::abs(d) < 1e-12) throw RejectSample("pole");
    double n = eval(c.num(), fn());
    double r = n / d;
    if (!std::isfinite(r)) throw RejectSample("overflow");
    return r;
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(6);
    bool first = true;
    for (const auto& [id, v] : values_) {
      auto k = atom_kind(id);
      if (k != AtomKind::even_coordinate && k != AtomKind::parameter && k != AtomKind::function_value) continue;
      os << (first ? "" : ", ") << atom_string(id) << "=" << v;
      first = false;
    }
    return os.str();
  }

 private:
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  std::mt19937_64& rng_;
  std::map<AtomId, double> values_;
};

/// Runs f(point) at `samples` accepted points, resampling on rejection.
template <class F>
void for_each_sample(std::mt19937_64& rng, const SampleOptions& opts, F&& f) {
  int accepted = 0;
  int rejected = 0;
  while (accepted < opts.samples) {
    SamplePoint pt(rng);
    try {
      f(pt);
      ++accepted;
    } catch (const RejectSample& r) {
      if (++rejected >= opts.max_attempts)
        throw Error(std::string("numeric evaluation failed after repeated resampling: ") + r.what());
    }
  }
}

/// Jointly tests a list of expressions (one shared set of sample points).
inline ZeroTest is_zero(const std::vector<GradedExpr>& es, std::mt19937_64& rng, const SampleOptions& opts = {}) {
  ZeroTest t;
  bool all_empty = true;
  for (const auto& e : es) all_empty = all_empty && e.is_zero();
  if (all_empty) return t;
  t.certainty = Certainty::numeric;
  for_each_sample(rng, opts, [&](SamplePoint& pt) {
    std::vector<double> vals;
    for (const auto& e : es)
      for (const auto& [m, c] : e.terms()) vals.push_back(pt.eval_coeff(c));
    for (double v : vals) {
      if (std::abs(v) > t.max_abs) {
        t.max_abs = std::abs(v);
        if (t.max_abs >= opts.tolerance) t.witness = pt.describe();
      }
    }
  });
  if (t.max_abs >= opts.tolerance) t.certainty = Certainty::nonzero;
  return t;
}

inline ZeroTest is_zero(const GradedExpr& e, std::mt19937_64& rng, const SampleOptions& opts = {}) {
  return is_zero(std::vector<GradedExpr>{e}, rng, opts);
}

/// Numeric value of a scalar expression at one point.
inline double evaluate_body(const GradedExpr& e, SamplePoint& pt) { return pt.eval_coeff(e.body()); }

}  // namespace sgeo
