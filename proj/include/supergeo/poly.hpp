#pragma once
// Sparse multivariate polynomials over Q whose monomials carry an optional
// exponential factor exp(u). exp(u)*exp(v) merges to exp(u+v), so the
// exponential parts form a group and are units of the ring.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "supergeo/atoms.hpp"

namespace sgeo {

struct Monomial {
  PowerProduct pp;
  ArgPoly ex;  // exponent of the exponential factor; empty means exp(0) = 1

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.pp == b.pp && a.ex == b.ex; }
};

inline int mono_compare(const Monomial& a, const Monomial& b) {
  if (int c = pp_compare(a.pp, b.pp)) return c;
  return arg_compare(a.ex, b.ex);
}

inline Monomial mono_mul(const Monomial& a, const Monomial& b) { return {pp_mul(a.pp, b.pp), a.ex + b.ex}; }

class Poly {
 public:
  using Term = std::pair<Monomial, mpq_class>;

  Poly() = default;
  Poly(const mpq_class& c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) terms_.push_back({Monomial{}, c});
  }
  Poly(long c) : Poly(mpq_class(c)) {}  // NOLINT(google-explicit-constructor)

  static Poly atom(AtomId id, std::uint32_t e = 1) {
    Poly p;
    if (e == 0) return Poly(1);
    p.terms_.push_back({Monomial{{{id, e}}, {}}, mpq_class(1)});
    return p;
  }

  static Poly exponential(const ArgPoly& u) {
    Poly p;
    p.terms_.push_back({Monomial{{}, u}, mpq_class(1)});
    return p;
  }

  static Poly from_arg(const ArgPoly& a) {
    Poly p;
    for (const auto& [pp, c] : a.terms) p.terms_.push_back({Monomial{pp, {}}, c});
    p.terms_ = canonical(std::move(p.terms_));
    return p;
  }

  /// Sorts terms, merges equal monomials and drops zeros.
  static Poly from_terms(std::vector<Term> terms) {
    Poly p;
    p.terms_ = canonical(std::move(terms));
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].first.pp.empty() && terms_[0].first.ex.empty());
  }
  bool is_one() const { return is_constant() && !terms_.empty() && terms_[0].second == 1; }
  mpq_class constant_value() const { return terms_.empty() ? mpq_class(0) : terms_[0].second; }
  bool is_monomial() const { return terms_.size() == 1; }
  const Term& leading() const { return terms_.back(); }

  bool has_exponentials() const {
    return std::any_of(terms_.begin(), terms_.end(), [](const Term& t) { return !t.first.ex.empty(); });
  }

  std::uint32_t degree(AtomId x) const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, pp_degree(t.first.pp, x));
    return d;
  }

  bool contains(AtomId x) const { return degree(x) > 0; }

  /// Atoms of the power products (exponent arguments excluded).
  std::set<AtomId> atoms() const {
    std::set<AtomId> s;
    for (const auto& t : terms_)
      for (const auto& f : t.first.pp) s.insert(f.first);
    return s;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly operator-() const {
    Poly p = *this;
    for (auto& t : p.terms_) t.second = -t.second;
    return p;
  }

  friend Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, 1); }
  friend Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, -1); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_constant()) return b.scaled(a.constant_value());
    if (b.is_constant()) return a.scaled(b.constant_value());
    std::vector<Term> out;
    out.reserve(a.size() * b.size());
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.push_back({mono_mul(ma, mb), ca * cb});
    return from_terms(std::move(out));
  }

  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly scaled(const mpq_class& k) const {
    if (k == 0) return {};
    Poly p = *this;
    for (auto& t : p.terms_) t.second *= k;
    return p;
  }

  Poly times_monomial(const Monomial& m, const mpq_class& c) const {
    Poly p;
    p.terms_.reserve(terms_.size());
    for (const auto& [mono, k] : terms_) p.terms_.push_back({mono_mul(mono, m), k * c});
    // Multiplying by a monomial preserves the order in both components.
    return p;
  }

  Poly pow(std::uint32_t e) const {
    Poly result(1);
    Poly base = *this;
    while (e) {
      if (e & 1u) result *= base;
      e >>= 1u;
      if (e) base *= base;
    }
    return result;
  }

 private:
  static std::vector<Term> canonical(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& x, const Term& y) { return mono_compare(x.first, y.first) < 0; });
    std::vector<Term> out;
    out.reserve(terms.size());
    for (auto& t : terms) {
      if (!out.empty() && out.back().first == t.first) {
        out.back().second += t.second;
      } else {
        if (!out.empty() && out.back().second == 0) out.pop_back();
        out.push_back(std::move(t));
      }
    }
    if (!out.empty() && out.back().second == 0) out.pop_back();
    return out;
  }

  static Poly merge(const Poly& a, const Poly& b, int sign) {
    Poly out;
    out.terms_.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
      int c = 0;
      if (i == a.size())
        c = 1;
      else if (j == b.size())
        c = -1;
      else
        c = mono_compare(a.terms_[i].first, b.terms_[j].first);
      if (c < 0) {
        out.terms_.push_back(a.terms_[i++]);
      } else if (c > 0) {
        out.terms_.push_back({b.terms_[j].first, sign * b.terms_[j].second});
        ++j;
      } else {
        mpq_class s = a.terms_[i].second + sign * b.terms_[j].second;
        if (s != 0) out.terms_.push_back({a.terms_[i].first, s});
        ++i;
        ++j;
      }
    }
    return out;
  }

  std::vector<Term> terms_;
};

/// Converts to an exponent/trig argument; fails on exponentials,
/// function values and trig atoms.
inline std::optional<ArgPoly> to_arg(const Poly& p) {
  ArgPoly a;
  for (const auto& [m, c] : p.terms()) {
    if (!m.ex.empty()) return std::nullopt;
    for (const auto& f : m.pp) {
      auto k = atom_kind(f.first);
      if (k != AtomKind::even_coordinate && k != AtomKind::parameter) return std::nullopt;
    }
    a.terms.emplace_back(m.pp, c);
  }
  return a;
}

inline ArgPoly derive_arg(const ArgPoly& a, AtomId x) {
  std::vector<std::pair<PowerProduct, mpq_class>> raw;
  for (const auto& [pp, c] : a.terms) {
    auto e = pp_degree(pp, x);
    if (e == 0) continue;
    auto rest = pp_without(pp, x);
    raw.emplace_back(pp_with(rest, x, e - 1), c * e);
  }
  // Differentiation by one atom keeps the remaining products distinct.
  std::sort(raw.begin(), raw.end(), [](const auto& l, const auto& r) { return pp_compare(l.first, r.first) < 0; });
  return ArgPoly{std::move(raw)};
}

/// sin(u) with the argument normalized so that its leading coefficient is positive.
inline Poly sine_of(const ArgPoly& u) {
  if (u.empty()) return {};
  if (u.leading_coefficient() < 0) return -Poly::atom(AtomTable::global().trig(AtomKind::sine, u.scaled(-1)));
  return Poly::atom(AtomTable::global().trig(AtomKind::sine, u));
}

inline Poly cosine_of(const ArgPoly& u) {
  if (u.empty()) return Poly(1);
  if (u.leading_coefficient() < 0) return Poly::atom(AtomTable::global().trig(AtomKind::cosine, u.scaled(-1)));
  return Poly::atom(AtomTable::global().trig(AtomKind::cosine, u));
}

/// d(atom)/dx for an even coordinate x.
inline Poly derive_atom(AtomId a, AtomId x) {
  if (a == x) return Poly(1);
  const AtomInfo& info = atom_info(a);
  switch (info.kind) {
    case AtomKind::function_value:
      if (info.arg != x) return {};
      return Poly::atom(AtomTable::global().function_value(info.base, info.order + 1, info.arg));
    case AtomKind::sine: {
      auto du = derive_arg(info.trig, x);
      if (du.empty()) return {};
      return Poly::from_arg(du) * cosine_of(info.trig);
    }
    case AtomKind::cosine: {
      auto du = derive_arg(info.trig, x);
      if (du.empty()) return {};
      return -(Poly::from_arg(du) * sine_of(info.trig));
    }
    case AtomKind::lattice:
      throw Error("internal: differentiation of a lattice atom");
    default:
      return {};
  }
}

/// Partial derivative with respect to the even coordinate x.
inline Poly derive(const Poly& p, AtomId x) {
  std::vector<Poly::Term> out;
  Poly extra;
  for (const auto& [m, c] : p.terms()) {
    auto du = derive_arg(m.ex, x);
    if (!du.empty()) {
      for (const auto& [pp, k] : du.terms) out.push_back({Monomial{pp_mul(pp, m.pp), m.ex}, c * k});
    }
    for (std::size_t i = 0; i < m.pp.size(); ++i) {
      auto [a, e] = m.pp[i];
      Poly da = derive_atom(a, x);
      if (da.is_zero()) continue;
      PowerProduct rest = m.pp;
      if (e == 1)
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      else
        rest[i].second = e - 1;
      if (da.is_constant()) {
        out.push_back({Monomial{rest, m.ex}, c * e * da.constant_value()});
      } else {
        extra += da.times_monomial(Monomial{rest, m.ex}, c * e);
      }
    }
  }
  return Poly::from_terms(std::move(out)) + extra;
}

// ---------------------------------------------------------------------------
// printing

inline std::string rational_string(const mpq_class& q) { return q.get_str(); }

std::string to_string(const ArgPoly& a);

inline std::string atom_string(AtomId id) {
  const AtomInfo& info = atom_info(id);
  switch (info.kind) {
    case AtomKind::function_value:
      return info.name + std::string(info.order, '\'') + "(" + atom_info(info.arg).name + ")";
    case AtomKind::sine:
    case AtomKind::cosine:
      return info.name + "(" + to_string(info.trig) + ")";
    default:
      return info.name;
  }
}

namespace detail {

inline std::string factors_string(const PowerProduct& pp, const ArgPoly* ex) {
  std::string s;
  for (const auto& [a, e] : pp) {
    if (!s.empty()) s += "*";
    s += atom_string(a);
    if (e > 1) s += "^" + std::to_string(e);
  }
  if (ex && !ex->empty()) {
    if (!s.empty()) s += "*";
    s += "exp(" + to_string(*ex) + ")";
  }
  return s;
}

template <class Range, class FactorsFn>
std::string sum_string(const Range& terms, FactorsFn factors) {
  if (terms.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    const mpq_class& c = it->second;
    std::string f = factors(it->first);
    mpq_class mag = abs(c);
    std::string body;
    if (f.empty())
      body = rational_string(mag);
    else if (mag == 1)
      body = f;
    else
      body = rational_string(mag) + "*" + f;
    if (first)
      s += (c < 0 ? "-" : "") + body;
    else
      s += (c < 0 ? " - " : " + ") + body;
    first = false;
  }
  return s;
}

}  // namespace detail

inline std::string to_string(const ArgPoly& a) {
  return detail::sum_string(a.terms, [](const PowerProduct& pp) { return detail::factors_string(pp, nullptr); });
}

inline std::string to_string(const Poly& p) {
  return detail::sum_string(p.terms(), [](const Monomial& m) { return detail::factors_string(m.pp, &m.ex); });
}

// ---------------------------------------------------------------------------
// numeric evaluation

using AtomValues = std::function<double(AtomId)>;

inline double eval(const ArgPoly& a, const AtomValues& value) {
  double s = 0;
  for (const auto& [pp, c] : a.terms) {
    double t = c.get_d();
    for (const auto& [atom, e] : pp) t *= std::pow(value(atom), static_cast<double>(e));
    s += t;
  }
  return s;
}

inline double eval(const Poly& p, const AtomValues& value) {
  double s = 0;
  for (const auto& [m, c] : p.terms()) {
    double t = c.get_d();
    for (const auto& [atom, e] : m.pp) t *= std::pow(value(atom), static_cast<double>(e));
    if (!m.ex.empty()) t *= std::exp(eval(m.ex, value));
    s += t;
  }
  return s;
}

}  // namespace sgeo
