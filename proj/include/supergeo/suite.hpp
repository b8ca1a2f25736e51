#pragma once
// The standard warped-product matrix used to cross-check closed forms:
// three products, three warping functions, three torsion vectors.

#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "supergeo/specfile.hpp"
#include "supergeo/warped.hpp"

namespace sgeo {

/// A scope holding the names of both factors. Parameters with the same name
/// in both would be different atoms, so that is a collision too.
inline Scope merge_scopes(const Scope& a, const Scope& b) {
  Scope s;
  for (const Scope* src : {&a, &b})
    for (const auto& [name, id] : src->names()) {
      if (auto old = s.lookup(name)) {
        if (*old == id) continue;
        throw Error("name collision: '" + name + "' is declared by both factors");
      }
      s.alias(name, id);
    }
  return s;
}

namespace suite_detail {

inline ManifoldSpec spec(const std::string& text) {
  std::istringstream in(text);
  return read_spec(in);
}

inline const char* r10 = "[chart] name = R10 ; coords = t:even\n[metric]\ng[t,t] = -1\n";
inline const char* r12 =
    "[chart] name = R12 ; coords = t:even, xi:odd, eta:odd\n[metric]\ng[t,t] = -1\ng[xi,eta] = -1\ng[eta,xi] = 1\n";
inline const char* r20 = "[chart] name = R20 ; coords = y1:even, y2:even\n[metric]\ng[y1,y1] = 1\ng[y2,y2] = 1\n";
inline const char* r02 =
    "[chart] name = R02 ; coords = zeta:odd, omega:odd\n[metric]\ng[zeta,omega] = -1\ng[omega,zeta] = 1\n";

}  // namespace suite_detail

struct SuiteCase {
  std::string product;
  std::string warp;
  std::string torsion;  // "0", "d_t" or the fiber field text
  WarpedProduct wp;
  ConnectionKind kind = ConnectionKind::levi_civita;
  std::optional<VectorField> P;
};

/// Every (product, h, P) combination of the standard matrix.
inline std::vector<SuiteCase> standard_suite(std::mt19937_64& rng, const SampleOptions& opts = {}) {
  using namespace suite_detail;
  struct Product {
    const char* name;
    const char* base;
    const char* fiber;
    const char* fiber_field;
  };
  const Product products[] = {
      {"R10xR20", r10, r20, "y1 = y2"},
      {"R10xR02", r10, r02, "zeta = omega"},
      {"R12xR02", r12, r02, "zeta = omega"},
  };
  const char* warps[] = {"exp(t)", "t^2 + 1", "c1*exp(t) + c2"};
  std::vector<SuiteCase> out;
  for (const Product& pr : products)
    for (const char* w : warps) {
      ManifoldSpec b = spec(pr.base), f = spec(pr.fiber);
      Scope s = merge_scopes(b.scope, f.scope);
      s.lenient = true;
      WarpedProduct wp = build(b.metric, f.metric, parse(w, s), rng, opts, pr.name);
      SuiteCase base{pr.name, w, "0", wp, ConnectionKind::levi_civita, std::nullopt};
      out.push_back(base);
      SuiteCase pt = base;
      pt.torsion = "d_t";
      pt.kind = ConnectionKind::semi_symmetric;
      pt.P = VectorField::basis(wp.chart, 0);
      out.push_back(pt);
      SuiteCase pf = base;
      pf.torsion = pr.fiber_field;
      pf.kind = ConnectionKind::semi_symmetric;
      pf.P = parse_field(wp.chart, s, pr.fiber_field);
      out.push_back(pf);
    }
  return out;
}

}  // namespace sgeo
