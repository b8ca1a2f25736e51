#pragma once
// Known Einstein solution families, written with literal constants
// (Ric = lambda g, Ric^N = c0 g2).

#include <string>
#include <vector>

#include "supergeo/einstein.hpp"

namespace sgeo::testing {

struct FamilyText {
  std::string name;
  Family family;
  ConnectionKind kind;
  std::string d, lambda, c0, h;  // d = "sym" keeps the parameter d
  std::vector<std::string> relations;
  std::string perturb;  // "lambda", "c0" or "d"
};

struct FamilyCase {
  EinsteinProblem problem;
  GradedExpr h;
};

inline FamilyCase instantiate(const FamilyText& f, const std::string& eps = "") {
  FamilyCase c{make_problem(f.family, f.kind), GradedExpr()};
  EinsteinProblem& p = c.problem;
  auto field = [&](const std::string& which, const std::string& text) {
    return eps.empty() || f.perturb != which ? text : "(" + text + ") + (" + eps + ")";
  };
  if (f.d != "sym") {
    if (f.perturb == "d" && !eps.empty()) {
      p.d = parse(field("d", f.d), p.scope);
    } else {
      p.set_dimension(std::stol(f.d));
    }
  }
  for (const auto& r : f.relations) add_relation(p.scope, r, p.dimension_binding());
  p.lambda = p.read(field("lambda", f.lambda));
  p.c0 = p.read(field("c0", f.c0));
  c.h = p.read(f.h);
  return c;
}

inline const ConnectionKind lc = ConnectionKind::levi_civita;
inline const ConnectionKind ssm = ConnectionKind::semi_symmetric;

/// Line base, semi-symmetric, d = 1, lambda = -lambda0.
inline std::vector<FamilyText> line_families() {
  return {
      {"distinct roots, lambda0 = 3/16", Family::r10, ssm, "1", "-3/16", "0",
       "c1*exp((1 + s)*t/2) + c2*exp((1 - s)*t/2)", {"s^2 = 1 - 4*(3/16)"}, "lambda"},
      {"distinct roots, symbolic lambda0", Family::r10, ssm, "1", "-lambda0", "0",
       "c1*exp((1 + s)*t/2) + c2*exp((1 - s)*t/2)", {"s^2 = 1 - 4*lambda0"}, "lambda"},
      {"double root, lambda0 = 1/4", Family::r10, ssm, "1", "-1/4", "0", "c1*exp(t/2) + c2*t*exp(t/2)", {}, "lambda"},
      {"complex roots, lambda0 = 1/2", Family::r10, ssm, "1", "-1/2", "0",
       "exp(t/2)*(c1*cos(t/2) + c2*sin(t/2))", {}, "lambda"},
  };
}

inline FamilyText trig_family() { return line_families()[3]; }

inline std::vector<FamilyText> solution_families() {
  std::vector<FamilyText> out = line_families();
  std::vector<FamilyText> more = {
      // q - n = 0: c0 - h h'' + h'^2 + h^2 - h h' = 0 holds for c1 e^t with c0 = 0
      {"d = 0, h = c1 e^t", Family::r10, ssm, "0", "0", "0", "c1*exp(t)", {}, "lambda"},
      // fiber constant (1 - d) c2^2
      {"d generic, h = c1 e^t + c2", Family::r10, ssm, "sym", "0", "(1 - d)*c2^2", "c1*exp(t) + c2", {}, "c0"},
      {"super base, Levi-Civita, d = 0", Family::r12, lc, "0", "0", "-4*c1*c2", "c1*exp(t) + c2*exp(-t)", {}, "c0"},
      {"super base, Levi-Civita, d = 1", Family::r12, lc, "1", "0", "0", "c1*t + c2", {}, "c0"},
      {"super base, Levi-Civita, d generic", Family::r12, lc, "sym", "0", "-k", "r*t + c2", {"r^2 = k/(d - 1)"}, "c0"},
      {"super base, Levi-Civita, d generic, negative slope", Family::r12, lc, "sym", "0", "-k", "-r*t + c2",
       {"r^2 = k/(d - 1)"}, "c0"},
      {"super base, semi-symmetric, d = 3", Family::r12, ssm, "3", "0", "0", "c1", {}, "d"},
  };
  out.insert(out.end(), more.begin(), more.end());
  return out;
}

}  // namespace sgeo::testing
