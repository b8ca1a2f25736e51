#pragma once
// Exact division and gcd for polynomials without exponential factors.
// The gcd is the recursive primitive polynomial remainder sequence over Q,
// normalized to leading coefficient 1.

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "supergeo/poly.hpp"

namespace sgeo {

inline Poly monic(const Poly& p) { return p.is_zero() ? p : p.scaled(1 / p.leading().second); }

inline Poly monomial_poly(const PowerProduct& pp) {
  return Poly::from_terms({{Monomial{pp, {}}, mpq_class(1)}});
}

/// Largest power product dividing every term.
inline PowerProduct monomial_content(const Poly& p) {
  if (p.is_zero()) return {};
  PowerProduct c = p.terms().front().first.pp;
  for (const auto& [m, k] : p.terms()) {
    PowerProduct next;
    std::size_t j = 0;
    for (const auto& [a, e] : c) {
      while (j < m.pp.size() && m.pp[j].first < a) ++j;
      if (j < m.pp.size() && m.pp[j].first == a) next.emplace_back(a, std::min(e, m.pp[j].second));
    }
    c = std::move(next);
    if (c.empty()) break;
  }
  return c;
}

inline PowerProduct pp_gcd(const PowerProduct& a, const PowerProduct& b) {
  PowerProduct out;
  std::size_t j = 0;
  for (const auto& [x, e] : a) {
    while (j < b.size() && b[j].first < x) ++j;
    if (j < b.size() && b[j].first == x) out.emplace_back(x, std::min(e, b[j].second));
  }
  return out;
}

inline Poly divide_by_pp(const Poly& p, const PowerProduct& d) {
  if (d.empty()) return p;
  std::vector<Poly::Term> out;
  out.reserve(p.size());
  for (const auto& [m, c] : p.terms()) out.push_back({Monomial{pp_div(m.pp, d), m.ex}, c});
  return Poly::from_terms(std::move(out));
}

/// a / b when b divides a exactly (exponential-free operands).
inline std::optional<Poly> divide_exact(Poly r, const Poly& b) {
  if (b.is_zero()) throw Error("division by the zero polynomial");
  if (r.is_zero()) return Poly{};
  if (b.is_constant()) return r.scaled(1 / b.constant_value());
  for (AtomId x : b.atoms())
    if (b.degree(x) > r.degree(x)) return std::nullopt;
  const auto& [lb, cb] = b.leading();
  std::vector<Poly::Term> q;
  while (!r.is_zero()) {
    const auto& [lr, cr] = r.leading();
    if (!pp_divides(lb.pp, lr.pp)) return std::nullopt;
    Monomial m{pp_div(lr.pp, lb.pp), {}};
    mpq_class c = cr / cb;
    r -= b.times_monomial(m, c);
    q.push_back({std::move(m), std::move(c)});
  }
  return Poly::from_terms(std::move(q));
}

namespace gcd_detail {

inline std::vector<Poly> coefficients_in(const Poly& p, AtomId x) {
  std::map<std::uint32_t, std::vector<Poly::Term>> buckets;
  for (const auto& [m, c] : p.terms()) {
    auto e = pp_degree(m.pp, x);
    buckets[e].push_back({Monomial{pp_without(m.pp, x), m.ex}, c});
  }
  std::vector<Poly> out(p.is_zero() ? 0 : p.degree(x) + 1);
  for (auto& [e, terms] : buckets) out[e] = Poly::from_terms(std::move(terms));
  return out;
}

/// Coefficients of p viewed as a polynomial in the atoms of `vars`.
inline std::vector<Poly> coefficients_wrt(const Poly& p, const std::set<AtomId>& vars) {
  std::map<PowerProduct, std::vector<Poly::Term>> buckets;
  for (const auto& [m, c] : p.terms()) {
    PowerProduct key;
    PowerProduct rest;
    for (const auto& f : m.pp) (vars.count(f.first) ? key : rest).push_back(f);
    buckets[key].push_back({Monomial{std::move(rest), m.ex}, c});
  }
  std::vector<Poly> out;
  for (auto& [k, terms] : buckets) out.push_back(Poly::from_terms(std::move(terms)));
  // smallest first keeps the running gcd cheap
  std::sort(out.begin(), out.end(), [](const Poly& a, const Poly& b) { return a.size() < b.size(); });
  return out;
}

inline Poly leading_coefficient_in(const Poly& p, AtomId x) {
  auto d = p.degree(x);
  std::vector<Poly::Term> out;
  for (const auto& [m, c] : p.terms())
    if (pp_degree(m.pp, x) == d) out.push_back({Monomial{pp_without(m.pp, x), m.ex}, c});
  return Poly::from_terms(std::move(out));
}

/// Pseudo-remainder of a by b with respect to x.
inline Poly pseudo_remainder(Poly a, const Poly& b, AtomId x) {
  auto db = b.degree(x);
  Poly lcb = leading_coefficient_in(b, x);
  while (!a.is_zero() && a.degree(x) >= db) {
    auto da = a.degree(x);
    Poly lca = leading_coefficient_in(a, x);
    a = lcb * a - lca * Poly::atom(x, da - db) * b;
  }
  return a;
}

}  // namespace gcd_detail

Poly poly_gcd(const Poly& a, const Poly& b);

/// gcd of the coefficients of p viewed as a polynomial in x.
inline Poly content_in(const Poly& p, AtomId x) {
  auto coeffs = gcd_detail::coefficients_in(p, x);
  Poly g;
  for (const auto& c : coeffs) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? monic(c) : poly_gcd(g, c);
    if (g.is_constant()) return Poly(1);
  }
  return g;
}

inline Poly primitive_in(const Poly& p, AtomId x) {
  Poly c = content_in(p, x);
  if (c.is_constant()) return monic(p);
  return monic(*divide_exact(p, c));
}

inline Poly poly_gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  if (a.is_constant() || b.is_constant()) return Poly(1);
  PowerProduct ca = monomial_content(a);
  PowerProduct cb = monomial_content(b);
  PowerProduct g0 = pp_gcd(ca, cb);
  if (a.is_monomial() || b.is_monomial()) return monomial_poly(g0);
  Poly pa = divide_by_pp(a, ca);
  Poly pb = divide_by_pp(b, cb);
  if (monic(pa) == monic(pb)) return monic(pa * monomial_poly(g0));

  auto sa = pa.atoms();
  auto sb = pb.atoms();
  // Atoms present on one side only: the gcd divides every coefficient with
  // respect to those atoms, and those coefficients involve shared atoms only.
  auto reduce_by_coefficients = [&](const Poly& p, const std::set<AtomId>& own, const std::set<AtomId>& other,
                                    const Poly& q) -> std::optional<Poly> {
    std::set<AtomId> extra;
    for (AtomId x : own)
      if (!other.count(x)) extra.insert(x);
    if (extra.empty()) return std::nullopt;
    Poly g = q;
    for (const Poly& c : gcd_detail::coefficients_wrt(p, extra)) {
      g = poly_gcd(g, c);
      if (g.is_constant()) break;
    }
    return monic(g * monomial_poly(g0));
  };
  if (auto g = reduce_by_coefficients(pa, sa, sb, pb)) return *g;
  if (auto g = reduce_by_coefficients(pb, sb, sa, pa)) return *g;
  if (sa.empty()) return monomial_poly(g0);
  if (pa.size() >= pb.size()) {
    if (divide_exact(pa, pb)) return monic(pb * monomial_poly(g0));
  } else if (divide_exact(pb, pa)) {
    return monic(pa * monomial_poly(g0));
  }

  AtomId x = *sa.begin();
  Poly conta = content_in(pa, x);
  Poly contb = content_in(pb, x);
  Poly gc = poly_gcd(conta, contb);
  Poly A = conta.is_constant() ? pa : *divide_exact(pa, conta);
  Poly B = contb.is_constant() ? pb : *divide_exact(pb, contb);
  if (A.degree(x) < B.degree(x)) std::swap(A, B);
  Poly last;
  while (true) {
    Poly r = gcd_detail::pseudo_remainder(A, B, x);
    if (r.is_zero()) {
      last = B;
      break;
    }
    if (r.degree(x) == 0) {
      last = Poly(1);
      break;
    }
    A = std::move(B);
    B = primitive_in(r, x);
  }
  if (!last.is_constant()) last = primitive_in(last, x);
  return monic(last * gc * monomial_poly(g0));
}

}  // namespace sgeo
