#pragma once
// Simultaneous substitution of even parameters and opaque functions.
// A binding h -> f rewrites h^(k)(x) to the k-th x-derivative of f.

#include <map>
#include <optional>

#include "supergeo/expr.hpp"

namespace sgeo {

struct Bindings {
  std::map<AtomId, Coeff> parameters;  // parameter atom -> value
  std::map<AtomId, Coeff> functions;   // function symbol -> value

  void bind_parameter(AtomId p, const GradedExpr& v) { parameters[p] = even_value(v); }
  void bind_function(AtomId fn, const GradedExpr& v) { functions[fn] = even_value(v); }

  static Coeff even_value(const GradedExpr& v) {
    if (!v.has_parity(Parity::even)) throw Error("parity mismatch: bindings must be even");
    if (!v.is_scalar()) throw Error("bindings must be free of odd symbols");
    return v.body();
  }
};

namespace subst_detail {

class Substituter {
 public:
  explicit Substituter(const Bindings& b) : b_(b) {}

  Coeff atom(AtomId id) {
    if (auto it = cache_.find(id); it != cache_.end()) return it->second;
    Coeff v = compute(id);
    cache_.emplace(id, v);
    return v;
  }

  std::optional<ArgPoly> arg(const ArgPoly& a, bool& changed) {
    changed = false;
    for (const auto& [pp, c] : a.terms)
      for (const auto& [x, e] : pp)
        if (b_.parameters.count(x)) changed = true;
    if (!changed) return a;
    Coeff v = poly(Poly::from_arg(a));
    if (!v.is_polynomial()) return std::nullopt;
    return to_arg(v.num());
  }

  Coeff poly(const Poly& p) {
    Coeff sum;
    for (const auto& [m, c] : p.terms()) {
      Coeff t(c);
      for (const auto& [x, e] : m.pp) t *= atom(x).pow(e);
      if (!m.ex.empty()) {
        bool changed = false;
        auto u = arg(m.ex, changed);
        if (!u) throw Error("substitution leaves a non-polynomial exponent");
        t *= Coeff(u->empty() ? Poly(1) : Poly::exponential(*u));
      }
      sum += t;
    }
    return sum;
  }

  Coeff coeff(const Coeff& c) {
    Coeff n = poly(c.num());
    if (c.den().is_one()) return n;
    Coeff d = poly(c.den());
    if (d.is_zero()) throw Error("substitution makes a denominator vanish");
    return n / d;
  }

 private:
  Coeff compute(AtomId id) {
    const AtomInfo& info = atom_info(id);
    switch (info.kind) {
      case AtomKind::parameter:
        if (auto it = b_.parameters.find(id); it != b_.parameters.end()) return it->second;
        return Coeff::atom(id);
      case AtomKind::function_value: {
        auto it = b_.functions.find(info.base);
        if (it == b_.functions.end()) return Coeff::atom(id);
        Coeff v = it->second;
        for (std::uint32_t k = 0; k < info.order; ++k) v = v.derive(info.arg);
        return v;
      }
      case AtomKind::sine:
      case AtomKind::cosine: {
        bool changed = false;
        auto u = arg(info.trig, changed);
        if (!changed) return Coeff::atom(id);
        if (!u) throw Error("substitution leaves a non-polynomial trig argument");
        return Coeff(info.kind == AtomKind::sine ? sine_of(*u) : cosine_of(*u));
      }
      default:
        return Coeff::atom(id);
    }
  }

  const Bindings& b_;
  std::map<AtomId, Coeff> cache_;
};

}  // namespace subst_detail

inline Coeff substitute(const Coeff& c, const Bindings& b) { return subst_detail::Substituter(b).coeff(c); }

inline GradedExpr substitute(const GradedExpr& e, const Bindings& b) {
  subst_detail::Substituter s(b);
  std::vector<GradedExpr::Term> out;
  for (const auto& [m, c] : e.terms()) out.push_back({m, s.coeff(c)});
  return GradedExpr::from_terms(std::move(out));
}

}  // namespace sgeo
