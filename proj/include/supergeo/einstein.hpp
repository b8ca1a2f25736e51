#pragma once
// Einstein conditions Ric = lambda * g_mu for warped products over the line
// R^(1,0) and over R^(1,2), with a fiber that is Einstein with constant c0
// (Ric^N = c0 * g2). Constants are always the literal ones of Ric = lambda g.

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "supergeo/substitute.hpp"
#include "supergeo/suite.hpp"
#include "supergeo/warped.hpp"

namespace sgeo {

enum class Family { r10, r12 };

inline const char* family_name(Family f) { return f == Family::r10 ? "r10" : "r12"; }

inline Family parse_family(const std::string& s) {
  if (s == "r10") return Family::r10;
  if (s == "r12") return Family::r12;
  throw Error("unknown family '" + s + "' (expected r10 or r12)");
}

/// Parametric when `fiber` is empty: d = q - n is an expression (often the
/// parameter d) and the fiber enters only through c0. With a concrete fiber
/// the residual is computed directly on the product chart and c0, d are unused.
struct EinsteinProblem {
  Family family = Family::r10;
  ConnectionKind kind = ConnectionKind::semi_symmetric;
  Scope scope;
  Metric base;
  GradedExpr h;  // the generic h(t) unless replaced
  GradedExpr lambda, c0, d;
  std::optional<Metric> fiber;

  bool parametric() const { return !fiber.has_value(); }
  VectorField torsion_vector() const { return VectorField::basis(base.chart(), 0); }

  /// Fixes q - n; the name d in later expressions then means this value.
  void set_dimension(long value) {
    d = GradedExpr(value);
    fixed_d = value;
  }

  Bindings dimension_binding() const {
    Bindings b;
    if (fixed_d) b.bind_parameter(scope.require("d"), GradedExpr(*fixed_d));
    return b;
  }

  GradedExpr read(const std::string& text) { return substitute(parse(text, scope), dimension_binding()); }

  std::optional<long> fixed_d;
};

/// A problem with symbolic lambda, c0, d and generic warping function h(t).
/// The scope is lenient, so later expressions may introduce constants.
inline EinsteinProblem make_problem(Family family, ConnectionKind kind) {
  EinsteinProblem p;
  p.family = family;
  p.kind = kind;
  ManifoldSpec spec = suite_detail::spec(family == Family::r10 ? suite_detail::r10 : suite_detail::r12);
  p.scope = spec.scope;
  p.scope.lenient = true;
  p.base = spec.metric;
  p.h = parse("h(t)", p.scope);
  p.lambda = parse("lambda", p.scope);
  p.c0 = parse("c0", p.scope);
  p.d = parse("d", p.scope);
  return p;
}

struct ResidualEntry {
  std::string label;
  GradedExpr value;
};

inline std::vector<ResidualEntry> einstein_residual(const EinsteinProblem& p) {
  const Chart& bc = p.base.chart();
  std::optional<VectorField> pv;
  if (p.kind == ConnectionKind::semi_symmetric) pv = p.torsion_vector();
  std::vector<ResidualEntry> out;
  auto label = [](const Chart& c, std::size_t i, std::size_t k) {
    return "Ric[" + c[i].name + "," + c[k].name + "] - lambda*g[" + c[i].name + "," + c[k].name + "]";
  };

  if (p.parametric()) {
    RicciBlocks blocks = ricci_blocks(p.base, p.h, p.kind, pv, p.d);
    for (std::size_t i = 0; i < bc.dim(); ++i)
      for (std::size_t k = 0; k < bc.dim(); ++k)
        out.push_back({label(bc, i, k), blocks.base[i][k] - p.lambda * p.base(i, k)});
    // (Ric - lambda g_mu)(V,W) = (c0 - h^2 (bracket + lambda)) g2(V,W)
    out.push_back({"fiber: c0 - h^2*(bracket + lambda)", p.c0 - p.h * p.h * (blocks.fiber_bracket + p.lambda)});
    return out;
  }

  // positivity of the warping function is not at stake here
  std::mt19937_64 rng(0);
  WarpedProduct wp = build(p.base, *p.fiber, p.h, rng);
  Connection conn = pv ? semi_symmetric(wp.g_mu, wp.lift(*pv, Slot::base)) : levi_civita(wp.g_mu);
  RicciTable ric = ricci(conn);
  for (std::size_t i = 0; i < wp.chart.dim(); ++i)
    for (std::size_t k = 0; k < wp.chart.dim(); ++k)
      out.push_back({label(wp.chart, i, k), ric[i][k] - p.lambda * wp.g_mu(i, k)});
  return out;
}

/// Numerator of a scalar residual, scaled so its leading coefficient is 1.
inline GradedExpr ode_normal_form(const GradedExpr& e) {
  if (!e.is_scalar() || !e.has_parity(Parity::even)) throw Error("ODE residuals must be even and free of odd symbols");
  if (e.is_zero()) return e;
  Poly num = e.body().num();
  return GradedExpr(Coeff::fraction(num.scaled(mpq_class(1) / num.leading().second), Poly(1)));
}

struct OdeCondition {
  GradedExpr residual;
  std::string source;  // residual entries this condition encodes
};

/// The distinct nonzero normal forms among the residual entries.
inline std::vector<OdeCondition> extract_ode_conditions(const EinsteinProblem& p) {
  std::vector<OdeCondition> out;
  for (const auto& entry : einstein_residual(p)) {
    if (entry.value.is_zero()) continue;
    GradedExpr nf = ode_normal_form(entry.value);
    auto same = [&](const OdeCondition& c) { return c.residual == nf; };
    if (auto it = std::find_if(out.begin(), out.end(), same); it != out.end()) {
      it->source += "; " + entry.label;
    } else {
      out.push_back({nf, entry.label});
    }
  }
  return out;
}

struct ConditionCheck {
  std::string source;
  GradedExpr residual;  // after substituting the candidate
  ZeroTest test;
};

/// Substitutes h := candidate into every condition of the generic problem.
inline std::vector<ConditionCheck> verify_solution(const EinsteinProblem& p, const GradedExpr& candidate,
                                                   std::mt19937_64& rng, const SampleOptions& opts = {}) {
  if (!candidate.has_parity(Parity::even) || !candidate.is_scalar())
    throw Error("warping function must be even and free of odd symbols");
  for (AtomId id : atoms_of(candidate)) {
    auto k = atom_kind(id);
    if ((k == AtomKind::even_coordinate || k == AtomKind::odd_coordinate) && !p.base.chart().index(id))
      throw Error("warping function must depend on base coordinates only (found " + atom_string(id) + ")");
  }
  if (p.h.terms().size() != 1 || !p.h.terms()[0].first.empty() || !p.h.body().num().is_monomial())
    throw Error("verify_solution needs the generic warping function h(t)");
  const Coeff hb = p.h.body();
  const auto& pp = hb.num().leading().first.pp;
  if (pp.size() != 1 || atom_kind(pp[0].first) != AtomKind::function_value)
    throw Error("verify_solution needs the generic warping function h(t)");
  Bindings b;
  b.bind_function(atom_info(pp[0].first).base, candidate);

  std::vector<ConditionCheck> out;
  for (const auto& c : extract_ode_conditions(p)) {
    ConditionCheck r;
    r.source = c.source;
    r.residual = substitute(c.residual, b);
    r.test = is_zero(r.residual, rng, opts);
    out.push_back(std::move(r));
  }
  return out;
}

inline bool all_zero(const std::vector<ConditionCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const ConditionCheck& c) { return c.test.zero(); });
}

/// Ric^{L,N} - constant * g2 vanishes identically.
inline bool check_fiber_einstein(const Metric& fiber, const GradedExpr& constant) {
  RicciTable ric = ricci(levi_civita(fiber));
  std::size_t n = fiber.chart().dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!(ric[i][j] - constant * fiber(i, j)).is_zero()) return false;
  return true;
}

/// Registers a side relation "s^2 = expr" or "<poly in s> = 0" where s is a
/// new symbol occurring only as s^2. Other new names become parameters.
/// Returns the root symbol.
inline AtomId add_relation(Scope& scope, const std::string& text, const Bindings& fixed = {}) {
  auto eq = text.find('=');
  if (eq == std::string::npos || text.find('=', eq + 1) != std::string::npos)
    throw Error("relation '" + text + "' must contain exactly one '='");
  Scope tmp = scope;
  tmp.lenient = true;
  GradedExpr e = parse(text.substr(0, eq), tmp) - parse(text.substr(eq + 1), tmp);
  if (!e.is_scalar() || e.is_zero()) throw Error("relation '" + text + "' must be nontrivial and free of odd symbols");
  const Coeff body = e.body();
  Poly poly = body.num();

  std::vector<std::pair<AtomId, std::string>> fresh;
  for (const auto& [name, id] : tmp.names())
    if (!scope.lookup(name)) fresh.push_back({id, name});
  std::sort(fresh.begin(), fresh.end());
  std::optional<std::pair<AtomId, std::string>> root;
  for (const auto& f : fresh)
    if (poly.degree(f.first) == 2) {
      root = f;
      break;
    }
  if (!root || body.den().contains(root->first))
    throw Error("relation '" + text + "' must introduce a new symbol s occurring as s^2");

  AtomId s = root->first;
  std::vector<Poly::Term> quad, rest;
  for (const auto& [m, c] : poly.terms()) {
    Monomial r = m;
    auto it = std::find_if(r.pp.begin(), r.pp.end(), [&](const auto& f) { return f.first == s; });
    if (it == r.pp.end()) {
      rest.push_back({r, c});
    } else if (it->second == 2) {
      r.pp.erase(it);
      quad.push_back({r, c});
    } else {
      throw Error("relation '" + text + "' must contain " + root->second + " only squared");
    }
  }
  Coeff a = Coeff::fraction(Poly::from_terms(quad), Poly(1));
  Coeff value = substitute(-Coeff::fraction(Poly::from_terms(rest), Poly(1)) / a, fixed);

  Bindings b;
  for (const auto& [id, name] : fresh)
    if (id != s) b.bind_parameter(id, GradedExpr::atom(scope.declare_parameter(name)));
  return scope.declare_root(root->second, substitute(value, b));
}

}  // namespace sgeo
