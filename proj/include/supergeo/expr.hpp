#pragma once
// Graded expressions: finite sums c_I * xi^I where xi^I is a product of
// distinct odd coordinates in increasing id order and c_I is a Coeff.

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "supergeo/coeff.hpp"

namespace sgeo {

/// Strictly increasing list of odd coordinate ids.
using OddMono = std::vector<AtomId>;

inline bool odd_mono_less(const OddMono& a, const OddMono& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

/// Product of two odd monomials: returns the sign (0 if a generator repeats).
inline int odd_mono_mul(const OddMono& a, const OddMono& b, OddMono& out) {
  out.clear();
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  int inversions = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j] < a[i]) {
      // b[j] moves past the remaining elements of a
      inversions += static_cast<int>(a.size() - i);
      out.push_back(b[j++]);
    } else {
      return 0;
    }
  }
  return inversions % 2 ? -1 : 1;
}

inline Parity odd_mono_parity(const OddMono& m) { return m.size() % 2 ? Parity::odd : Parity::even; }

class GradedExpr {
 public:
  using Term = std::pair<OddMono, Coeff>;

  GradedExpr() = default;
  GradedExpr(const Coeff& c) {  // NOLINT(google-explicit-constructor)
    if (!c.is_zero()) terms_.push_back({{}, c});
  }
  GradedExpr(long c) : GradedExpr(Coeff(c)) {}               // NOLINT(google-explicit-constructor)
  GradedExpr(const mpq_class& c) : GradedExpr(Coeff(c)) {}  // NOLINT(google-explicit-constructor)

  /// The generator for an odd coordinate, or the coefficient atom otherwise.
  static GradedExpr atom(AtomId id) {
    if (atom_kind(id) != AtomKind::odd_coordinate) return GradedExpr(Coeff::atom(id));
    GradedExpr e;
    e.terms_.push_back({{id}, Coeff(1)});
    return e;
  }

  static GradedExpr from_terms(std::vector<Term> terms) {
    GradedExpr e;
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return odd_mono_less(a.first, b.first); });
    for (auto& t : terms) {
      if (!e.terms_.empty() && e.terms_.back().first == t.first)
        e.terms_.back().second += t.second;
      else {
        if (!e.terms_.empty() && e.terms_.back().second.is_zero()) e.terms_.pop_back();
        e.terms_.push_back(std::move(t));
      }
    }
    if (!e.terms_.empty() && e.terms_.back().second.is_zero()) e.terms_.pop_back();
    return e;
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// The coefficient of the empty odd monomial.
  Coeff body() const {
    if (!terms_.empty() && terms_[0].first.empty()) return terms_[0].second;
    return {};
  }

  bool is_scalar() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.empty()); }

  /// True when every term has parity p (vacuously true for 0).
  bool has_parity(Parity p) const {
    return std::all_of(terms_.begin(), terms_.end(), [p](const Term& t) { return odd_mono_parity(t.first) == p; });
  }

  /// The parity if homogeneous; zero counts as even.
  std::optional<Parity> parity() const {
    if (has_parity(Parity::even)) return Parity::even;
    if (has_parity(Parity::odd)) return Parity::odd;
    return std::nullopt;
  }

  GradedExpr part(Parity p) const {
    GradedExpr e;
    for (const auto& t : terms_)
      if (odd_mono_parity(t.first) == p) e.terms_.push_back(t);
    return e;
  }

  /// f_even + (-1)^p f_odd
  GradedExpr twist(Parity p) const {
    if (!is_odd(p)) return *this;
    GradedExpr e = *this;
    for (auto& t : e.terms_)
      if (t.first.size() % 2) t.second = -t.second;
    return e;
  }

  friend bool operator==(const GradedExpr& a, const GradedExpr& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].first != b.terms_[i].first || a.terms_[i].second != b.terms_[i].second) return false;
    return true;
  }
  friend bool operator!=(const GradedExpr& a, const GradedExpr& b) { return !(a == b); }

  GradedExpr operator-() const {
    GradedExpr e = *this;
    for (auto& t : e.terms_) t.second = -t.second;
    return e;
  }

  friend GradedExpr operator+(const GradedExpr& a, const GradedExpr& b) { return merge(a, b, false); }
  friend GradedExpr operator-(const GradedExpr& a, const GradedExpr& b) { return merge(a, b, true); }

  friend GradedExpr operator*(const GradedExpr& a, const GradedExpr& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (b.is_scalar()) return a.scaled(b.body());
    if (a.is_scalar()) return b.scaled(a.body());
    std::vector<Term> out;
    OddMono m;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        int s = odd_mono_mul(ma, mb, m);
        if (s == 0) continue;
        Coeff c = ca * cb;
        if (s < 0) c = -c;
        out.push_back({m, std::move(c)});
      }
    return from_terms(std::move(out));
  }

  friend GradedExpr operator/(const GradedExpr& a, const GradedExpr& b) {
    if (b.is_scalar()) {
      if (b.is_zero()) throw Error("division by zero");
      Coeff inv = b.body().inverse();
      return a.scaled(inv);
    }
    return a * b.inverse();
  }

  GradedExpr& operator+=(const GradedExpr& o) { return *this = *this + o; }
  GradedExpr& operator-=(const GradedExpr& o) { return *this = *this - o; }
  GradedExpr& operator*=(const GradedExpr& o) { return *this = *this * o; }

  GradedExpr scaled(const Coeff& k) const {
    if (k.is_zero()) return {};
    if (k.is_one()) return *this;
    GradedExpr e;
    for (const auto& [m, c] : terms_) {
      Coeff p = c * k;
      if (!p.is_zero()) e.terms_.push_back({m, std::move(p)});
    }
    return e;
  }

  /// Inverse of an even element with invertible body.
  GradedExpr inverse() const {
    if (!has_parity(Parity::even)) throw Error("only even elements can be inverted");
    Coeff b = body();
    if (b.is_zero()) throw Error("element with zero body is not invertible");
    Coeff binv = b.inverse();
    GradedExpr step = -(*this - GradedExpr(b)).scaled(binv);
    GradedExpr sum(1);
    GradedExpr power(1);
    while (true) {
      power = power * step;
      if (power.is_zero()) break;
      sum += power;
    }
    return sum.scaled(binv);
  }

  GradedExpr pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    GradedExpr r(1);
    for (long i = 0; i < e; ++i) r *= *this;
    return r;
  }

  /// Left partial derivative with respect to coordinate x.
  GradedExpr derive(AtomId x) const {
    if (atom_kind(x) == AtomKind::odd_coordinate) {
      std::vector<Term> out;
      for (const auto& [m, c] : terms_) {
        auto it = std::find(m.begin(), m.end(), x);
        if (it == m.end()) continue;
        auto pos = it - m.begin();
        OddMono rest = m;
        rest.erase(rest.begin() + pos);
        out.push_back({std::move(rest), pos % 2 ? -c : c});
      }
      return from_terms(std::move(out));
    }
    GradedExpr e;
    for (const auto& [m, c] : terms_) {
      Coeff d = c.derive(x);
      if (!d.is_zero()) e.terms_.push_back({m, std::move(d)});
    }
    return e;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      std::string mono;
      for (AtomId a : m) mono += (mono.empty() ? "" : "*") + atom_info(a).name;
      std::string cs = c.to_string();
      bool single = c.is_polynomial() && c.num().size() == 1;
      bool negative = single && cs[0] == '-';
      if (negative) cs = cs.substr(1);
      std::string body;
      if (mono.empty())
        body = cs;
      else if (cs == "1")
        body = mono;
      else
        body = (single ? cs : "(" + cs + ")") + "*" + mono;
      if (first)
        s += (negative ? "-" : "") + body;
      else
        s += (negative ? " - " : " + ") + body;
      first = false;
    }
    return s;
  }

 private:
  static GradedExpr merge(const GradedExpr& a, const GradedExpr& b, bool subtract) {
    GradedExpr out;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      int c = 0;
      if (i == a.terms_.size())
        c = 1;
      else if (j == b.terms_.size())
        c = -1;
      else if (a.terms_[i].first == b.terms_[j].first)
        c = 0;
      else
        c = odd_mono_less(a.terms_[i].first, b.terms_[j].first) ? -1 : 1;
      if (c < 0) {
        out.terms_.push_back(a.terms_[i++]);
      } else if (c > 0) {
        out.terms_.push_back({b.terms_[j].first, subtract ? -b.terms_[j].second : b.terms_[j].second});
        ++j;
      } else {
        Coeff s = subtract ? a.terms_[i].second - b.terms_[j].second : a.terms_[i].second + b.terms_[j].second;
        if (!s.is_zero()) out.terms_.push_back({a.terms_[i].first, std::move(s)});
        ++i;
        ++j;
      }
    }
    return out;
  }

  std::vector<Term> terms_;
};

/// Every atom e depends on, looking through function values, exponents and
/// trig arguments down to coordinates and parameters.
inline std::set<AtomId> atoms_of(const GradedExpr& e) {
  std::set<AtomId> out;
  std::function<void(const PowerProduct&)> visit_pp;
  auto visit_atom = [&](AtomId id) {
    if (!out.insert(id).second) return;
    const AtomInfo& info = atom_info(id);
    if (info.kind == AtomKind::function_value) out.insert(info.arg);
    if (info.kind == AtomKind::sine || info.kind == AtomKind::cosine)
      for (const auto& [pp, c] : info.trig.terms) visit_pp(pp);
  };
  visit_pp = [&](const PowerProduct& pp) {
    for (const auto& [id, k] : pp) visit_atom(id);
  };
  auto visit_poly = [&](const Poly& p) {
    for (const auto& [m, c] : p.terms()) {
      visit_pp(m.pp);
      for (const auto& [pp, k] : m.ex.terms) visit_pp(pp);
    }
  };
  for (const auto& [mono, c] : e.terms()) {
    for (AtomId id : mono) out.insert(id);
    visit_poly(c.num());
    visit_poly(c.den());
  }
  return out;
}

}  // namespace sgeo
