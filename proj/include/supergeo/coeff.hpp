#pragma once
// The coefficient field: fractions of polynomials over even atoms, kept in
// lowest terms with a normalized denominator, and reduced modulo registered
// square-root relations s^2 = A/B.

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "supergeo/gcd.hpp"

namespace sgeo {

/// s^2 = num/den with num, den free of every relation symbol.
struct Relation {
  AtomId symbol = 0;
  Poly num;
  Poly den;
};

class RelationRegistry {
 public:
  static RelationRegistry& global() {
    static RelationRegistry r;
    return r;
  }

  void add(Relation rel) {
    std::lock_guard lock(mutex_);
    if (relations_.count(rel.symbol)) throw Error("relation already registered for " + atom_info(rel.symbol).name);
    relations_.emplace(rel.symbol, std::move(rel));
  }

  std::optional<Relation> find(AtomId s) const {
    std::lock_guard lock(mutex_);
    if (auto it = relations_.find(s); it != relations_.end()) return it->second;
    return std::nullopt;
  }

  bool empty() const {
    std::lock_guard lock(mutex_);
    return relations_.empty();
  }

  std::vector<Relation> all() const {
    std::lock_guard lock(mutex_);
    std::vector<Relation> out;
    for (const auto& [s, r] : relations_) out.push_back(r);
    return out;
  }

 private:
  mutable std::mutex mutex_;
  std::map<AtomId, Relation> relations_;
};

namespace coeff_detail {

/// Returns (p', scale) with p = p'/scale and deg_s(p') <= 1.
inline std::pair<Poly, Poly> reduce_relation(const Poly& p, const Relation& rel) {
  auto d = p.degree(rel.symbol);
  if (d < 2) return {p, Poly(1)};
  auto coeffs = gcd_detail::coefficients_in(p, rel.symbol);
  std::uint32_t m = d / 2;
  Poly out;
  for (std::uint32_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k].is_zero()) continue;
    Poly term = coeffs[k] * rel.num.pow(k / 2) * rel.den.pow(m - k / 2);
    if (k % 2) term *= Poly::atom(rel.symbol);
    out += term;
  }
  return {out, rel.den.pow(m)};
}

inline mpq_class rational_gcd(const mpq_class& a, const mpq_class& b) {
  mpz_class n;
  mpz_class d;
  mpz_gcd(n.get_mpz_t(), a.get_num_mpz_t(), b.get_num_mpz_t());
  mpz_lcm(d.get_mpz_t(), a.get_den_mpz_t(), b.get_den_mpz_t());
  return mpq_class(n, d);
}

/// Embeds the exponential group generated by the exponents of a set of
/// polynomials into a Laurent lattice of scratch atoms, so that the
/// exponential-free gcd applies.
struct Lattice {
  std::vector<PowerProduct> basis;
  std::vector<mpq_class> step;
  std::vector<long> shift;
  std::vector<AtomId> vars;

  static Lattice build(const std::vector<const Poly*>& polys) {
    Lattice l;
    std::map<std::vector<std::pair<AtomId, std::uint32_t>>, mpq_class> steps;
    for (const Poly* p : polys)
      for (const auto& [m, c] : p->terms())
        for (const auto& [pp, k] : m.ex.terms) {
          auto it = steps.find(pp);
          if (it == steps.end())
            steps.emplace(pp, abs(k));
          else
            it->second = rational_gcd(it->second, k);
        }
    std::size_t idx = 0;
    for (const auto& [pp, st] : steps) {
      l.basis.push_back(pp);
      l.step.push_back(st);
      l.shift.push_back(0);
      l.vars.push_back(AtomTable::global().lattice(idx++));
    }
    for (const Poly* p : polys)
      for (const auto& [m, c] : p->terms()) {
        auto coords = l.coordinates(m.ex);
        for (std::size_t j = 0; j < coords.size(); ++j) l.shift[j] = std::min(l.shift[j], coords[j]);
      }
    return l;
  }

  std::vector<long> coordinates(const ArgPoly& ex) const {
    std::vector<long> out(basis.size(), 0);
    for (const auto& [pp, k] : ex.terms) {
      std::size_t j = std::find(basis.begin(), basis.end(), pp) - basis.begin();
      mpq_class q = k / step[j];
      out[j] = q.get_num().get_si();
    }
    return out;
  }

  Poly to_plain(const Poly& p) const {
    std::vector<Poly::Term> out;
    for (const auto& [m, c] : p.terms()) {
      auto coords = coordinates(m.ex);
      PowerProduct extra;
      for (std::size_t j = 0; j < coords.size(); ++j)
        if (coords[j] - shift[j] > 0) extra.emplace_back(vars[j], static_cast<std::uint32_t>(coords[j] - shift[j]));
      out.push_back({Monomial{pp_mul(m.pp, extra), {}}, c});
    }
    return Poly::from_terms(std::move(out));
  }

  Poly from_plain(const Poly& p) const {
    std::vector<Poly::Term> out;
    for (const auto& [m, c] : p.terms()) {
      PowerProduct pp;
      ArgPoly ex;
      for (const auto& [a, e] : m.pp) {
        std::size_t j = 0;
        while (j < vars.size() && vars[j] != a) ++j;
        if (j == vars.size()) {
          pp.emplace_back(a, e);
        } else {
          ArgPoly piece;
          piece.terms.emplace_back(basis[j], step[j] * e);
          ex = ex + piece;
        }
      }
      out.push_back({Monomial{std::move(pp), std::move(ex)}, c});
    }
    return Poly::from_terms(std::move(out));
  }
};

}  // namespace coeff_detail

class Coeff {
 public:
  Coeff() : den_(1) {}
  Coeff(const mpq_class& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  Coeff(long c) : num_(c), den_(1) {}              // NOLINT(google-explicit-constructor)
  explicit Coeff(Poly num) : num_(std::move(num)), den_(1) { normalize(); }

  static Coeff fraction(Poly num, Poly den) {
    Coeff c;
    c.num_ = std::move(num);
    c.den_ = std::move(den);
    c.normalize();
    return c;
  }

  static Coeff atom(AtomId id) { return Coeff(Poly::atom(id)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return den_.is_one() && num_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }
  std::optional<mpq_class> rational() const {
    if (num_.is_constant() && den_.is_one()) return num_.constant_value();
    return std::nullopt;
  }

  friend bool operator==(const Coeff& a, const Coeff& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const Coeff& a, const Coeff& b) { return !(a == b); }

  Coeff operator-() const {
    Coeff c = *this;
    c.num_ = -c.num_;
    return c;
  }

  friend Coeff operator+(const Coeff& a, const Coeff& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_.is_one() && b.den_.is_one()) return raw(a.num_ + b.num_, Poly(1));
    if (a.den_ == b.den_) return fraction(a.num_ + b.num_, a.den_);
    return fraction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }

  friend Coeff operator-(const Coeff& a, const Coeff& b) { return a + (-b); }

  friend Coeff operator*(const Coeff& a, const Coeff& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (auto q = a.rational()) return b.scaled(*q);
    if (auto q = b.rational()) return a.scaled(*q);
    if (a.den_.is_one() && b.den_.is_one()) return Coeff(a.num_ * b.num_);
    return fraction(a.num_ * b.num_, a.den_ * b.den_);
  }

  friend Coeff operator/(const Coeff& a, const Coeff& b) {
    if (b.is_zero()) throw Error("division by zero");
    if (auto q = b.rational()) return a.scaled(1 / *q);
    return fraction(a.num_ * b.den_, a.den_ * b.num_);
  }

  Coeff& operator+=(const Coeff& o) { return *this = *this + o; }
  Coeff& operator-=(const Coeff& o) { return *this = *this - o; }
  Coeff& operator*=(const Coeff& o) { return *this = *this * o; }

  Coeff scaled(const mpq_class& k) const {
    if (k == 0) return {};
    Coeff c = *this;
    c.num_ = c.num_.scaled(k);
    return c;
  }

  Coeff inverse() const { return Coeff(1) / *this; }

  Coeff pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Coeff r(1);
    Coeff b = *this;
    while (e) {
      if (e & 1) r *= b;
      e >>= 1;
      if (e) b *= b;
    }
    return r;
  }

  /// Partial derivative in the even coordinate x.
  Coeff derive(AtomId x) const {
    Poly dn = sgeo::derive(num_, x);
    if (den_.is_one()) return Coeff(dn);
    Poly dd = sgeo::derive(den_, x);
    if (dd.is_zero()) return fraction(dn, den_);
    return fraction(dn * den_ - num_ * dd, den_ * den_);
  }

  std::string to_string() const {
    if (den_.is_one()) return sgeo::to_string(num_);
    std::string n = sgeo::to_string(num_);
    std::string d = sgeo::to_string(den_);
    const auto& [dm, dc] = den_.leading();
    bool single_factor = den_.size() == 1 && dc == 1 && dm.pp.size() + (dm.ex.empty() ? 0 : 1) == 1;
    return (num_.size() == 1 ? n : "(" + n + ")") + "/" + (single_factor ? d : "(" + d + ")");
  }

  double eval(const AtomValues& values) const { return sgeo::eval(num_, values) / sgeo::eval(den_, values); }

 private:
  static Coeff raw(Poly num, Poly den) {
    Coeff c;
    c.num_ = std::move(num);
    c.den_ = std::move(den);
    return c;
  }

  void reduce_relations() {
    auto& registry = RelationRegistry::global();
    if (registry.empty()) return;
    for (const Relation& rel : registry.all()) {
      if (num_.degree(rel.symbol) < 2 && !den_.contains(rel.symbol)) continue;
      auto [nr, ns] = coeff_detail::reduce_relation(num_, rel);
      auto [dr, ds] = coeff_detail::reduce_relation(den_, rel);
      num_ = nr * ds;
      den_ = dr * ns;
      if (den_.contains(rel.symbol)) {
        auto dc = gcd_detail::coefficients_in(den_, rel.symbol);
        Poly d0 = dc.size() > 0 ? dc[0] : Poly();
        Poly d1 = dc.size() > 1 ? dc[1] : Poly();
        Poly conj = d0 - d1 * Poly::atom(rel.symbol);
        num_ = num_ * conj * rel.den;
        den_ = d0 * d0 * rel.den - d1 * d1 * rel.num;
        if (den_.is_zero()) throw Error("denominator is a zero divisor modulo the relation for " + atom_info(rel.symbol).name);
        auto [n2, s2] = coeff_detail::reduce_relation(num_, rel);
        num_ = n2;
        den_ = den_ * s2;
      }
    }
  }

  void normalize() {
    if (den_.is_zero()) throw Error("division by zero");
    if (num_.is_zero()) {
      den_ = Poly(1);
      return;
    }
    reduce_relations();
    if (num_.is_zero()) {
      den_ = Poly(1);
      return;
    }
    if (den_.is_constant()) {
      if (!den_.is_one()) {
        num_ = num_.scaled(1 / den_.constant_value());
        den_ = Poly(1);
      }
      return;
    }
    if (num_.has_exponentials() || den_.has_exponentials()) {
      auto lattice = coeff_detail::Lattice::build({&num_, &den_});
      Poly n = lattice.to_plain(num_);
      Poly d = lattice.to_plain(den_);
      Poly g = poly_gcd(n, d);
      if (!g.is_constant()) {
        n = *divide_exact(n, g);
        d = *divide_exact(d, g);
      }
      num_ = lattice.from_plain(n);
      den_ = lattice.from_plain(d);
    } else {
      Poly g = poly_gcd(num_, den_);
      if (!g.is_constant()) {
        num_ = *divide_exact(num_, g);
        den_ = *divide_exact(den_, g);
      }
    }
    const auto& [lead, lc] = den_.leading();
    Monomial unit{{}, lead.ex.scaled(-1)};
    mpq_class k = 1 / lc;
    num_ = num_.times_monomial(unit, k);
    den_ = den_.times_monomial(unit, k);
  }

  Poly num_;
  Poly den_;
};

}  // namespace sgeo
