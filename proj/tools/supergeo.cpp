// supergeo: command-line front end.
//
// Exit codes: 0 success, 1 a check found a nonzero residual, 2 bad input.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "supergeo/einstein.hpp"
#include "supergeo/report.hpp"

namespace {

using namespace sgeo;

struct Common {
  bool json = false;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  int samples = 8;
  std::string connection = "lc";
  std::string P;

  SampleOptions options() const {
    SampleOptions o;
    o.tolerance = tolerance;
    o.samples = samples;
    return o;
  }
};

void add_common(CLI::App* sub, Common& c, bool sampling) {
  sub->add_flag("--json", c.json, "Emit the report as JSON");
  sub->add_option("--connection", c.connection, "lc or ssm")->check(CLI::IsMember({"lc", "ssm"}));
  sub->add_option("--P", c.P, "Torsion vector, e.g. \"t = 1\"");
  if (sampling) {
    sub->add_option("--seed", c.seed, "Seed for numeric sampling");
    sub->add_option("--tolerance", c.tolerance, "Numeric zero tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--samples", c.samples, "Sample points per numeric test")->check(CLI::PositiveNumber);
  }
}

ConnectionKind kind_of(const Common& c) {
  return c.connection == "ssm" ? ConnectionKind::semi_symmetric : ConnectionKind::levi_civita;
}

Connection connection_for(ManifoldSpec& m, const Common& c) {
  if (kind_of(c) == ConnectionKind::levi_civita) {
    if (!c.P.empty()) throw Error("--P needs --connection ssm");
    return levi_civita(m.metric);
  }
  if (!c.P.empty()) return semi_symmetric(m.metric, parse_field(m.chart, m.scope, c.P));
  if (m.P) return semi_symmetric(m.metric, *m.P);
  throw Error("--connection ssm needs a torsion vector (--P or a [P] section)");
}

RunReport start(const std::string& command, const Common& c) {
  RunReport r;
  r.command = command;
  r.seed = c.seed;
  return r;
}

int finish(const RunReport& r, const Common& c) {
  std::cout << (c.json ? r.json() : r.text());
  return r.passed() ? 0 : 1;
}

int christoffel(const std::string& command, const std::string& path, const Common& c) {
  RunReport r = start(command, c);
  r.add_file(path);
  ManifoldSpec m = load_spec(path);
  Connection conn = connection_for(m, c);
  const Chart& ch = m.chart;
  for (std::size_t i = 0; i < ch.dim(); ++i)
    for (std::size_t j = 0; j < ch.dim(); ++j)
      for (std::size_t k = 0; k < ch.dim(); ++k)
        if (!conn.gamma[i][j][k].is_zero())
          r.results.push_back({"Gamma[" + ch[k].name + "][" + ch[i].name + "," + ch[j].name + "]",
                               Classification::value, conn.gamma[i][j][k].to_string()});
  return finish(r, c);
}

int curvature(const std::string& command, const std::string& path, const Common& c) {
  RunReport r = start(command, c);
  r.add_file(path);
  ManifoldSpec m = load_spec(path);
  RiemannTable t = riemann_table(connection_for(m, c));
  const Chart& ch = m.chart;
  for (std::size_t i = 0; i < ch.dim(); ++i)
    for (std::size_t j = 0; j < ch.dim(); ++j)
      for (std::size_t k = 0; k < ch.dim(); ++k)
        for (std::size_t l = 0; l < ch.dim(); ++l)
          if (!t[i][j][k][l].is_zero())
            r.results.push_back({"R[" + ch[l].name + "][" + ch[i].name + "," + ch[j].name + "," + ch[k].name + "]",
                                 Classification::value, t[i][j][k][l].to_string()});
  return finish(r, c);
}

int ricci_cmd(const std::string& command, const std::string& path, const Common& c) {
  RunReport r = start(command, c);
  r.add_file(path);
  ManifoldSpec m = load_spec(path);
  RicciTable ric = ricci(connection_for(m, c));
  const Chart& ch = m.chart;
  for (std::size_t i = 0; i < ch.dim(); ++i)
    for (std::size_t j = 0; j < ch.dim(); ++j)
      if (!ric[i][j].is_zero())
        r.results.push_back({"Ric[" + ch[i].name + "," + ch[j].name + "]", Classification::value, ric[i][j].to_string()});
  return finish(r, c);
}

struct Factors {
  std::string base, fiber, warp, name;
};

struct Product {
  ManifoldSpec base, fiber;
  Scope scope;
  WarpedProduct wp;
  std::optional<VectorField> P;
};

Product make_product(const Factors& f, const Common& c, std::mt19937_64& rng) {
  Product p;
  p.base = load_spec(f.base);
  p.fiber = load_spec(f.fiber);
  p.scope = merge_scopes(p.base.scope, p.fiber.scope);
  p.scope.lenient = true;
  GradedExpr h = parse(f.warp, p.scope);
  p.wp = build(p.base.metric, p.fiber.metric, h, rng, c.options(), f.name);
  if (!c.P.empty()) {
    p.P = parse_field(p.wp.chart, p.scope, c.P);
    connection_detail::check_torsion_vector(p.wp.g_mu, *p.P);
  }
  return p;
}

int warped_cmd(const std::string& command, const Factors& f, const std::string& out, const Common& c) {
  RunReport r = start(command, c);
  r.add_file(f.base);
  r.add_file(f.fiber);
  r.add_text("--warp", f.warp);
  std::mt19937_64 rng(c.seed);
  Product p = make_product(f, c, rng);
  std::vector<std::string> params;
  for (const auto& [name, id] : p.scope.names())
    if (atom_kind(id) == AtomKind::parameter) params.push_back(name);
  std::string text = write_spec(p.wp.chart, p.wp.g_mu, params, p.P);
  std::ofstream os(out);
  if (!os || !(os << text)) throw Error("cannot write " + out);
  r.notes.push_back("wrote " + out);
  const Chart& ch = p.wp.chart;
  for (std::size_t i = 0; i < ch.dim(); ++i)
    for (std::size_t j = 0; j < ch.dim(); ++j)
      if (!p.wp.g_mu(i, j).is_zero())
        r.results.push_back({"g[" + ch[i].name + "," + ch[j].name + "]", Classification::value, p.wp.g_mu(i, j).to_string()});
  return finish(r, c);
}

void add_cases(RunReport& r, const std::string& prefix, const std::vector<CaseResult>& cases) {
  for (const auto& cr : cases) r.add_check(prefix + cr.label, cr.test, cr.detail);
}

int verify_cmd(const std::string& command, const Factors& f, const Common& c) {
  RunReport r = start(command, c);
  std::mt19937_64 rng(c.seed);
  SampleOptions opts = c.options();
  if (f.base.empty() && f.fiber.empty() && f.warp.empty()) {
    if (!c.P.empty()) throw Error("--P needs --base, --fiber and --warp");
    r.notes.push_back("standard matrix: 3 products x 3 warping functions x 3 torsion vectors");
    for (const auto& sc : standard_suite(rng, opts)) {
      std::string prefix = sc.product + " | h = " + sc.warp + " | P = " + sc.torsion + " | ";
      add_cases(r, prefix, verify_closed_forms(sc.wp, sc.kind, sc.P, rng, opts));
    }
    return finish(r, c);
  }
  if (f.base.empty() || f.fiber.empty() || f.warp.empty())
    throw Error("--base, --fiber and --warp go together");
  r.add_file(f.base);
  r.add_file(f.fiber);
  r.add_text("--warp", f.warp);
  Product p = make_product(f, c, rng);
  ConnectionKind kind = kind_of(c);
  if (kind == ConnectionKind::semi_symmetric && !p.P) throw Error("--connection ssm needs --P");
  if (kind == ConnectionKind::levi_civita && p.P) throw Error("--P needs --connection ssm");
  add_cases(r, "", verify_closed_forms(p.wp, kind, p.P, rng, opts));
  return finish(r, c);
}

struct EinsteinArgs {
  std::string family, d, lambda, c0, h;
  std::vector<std::string> relations;
};

int einstein_cmd(const std::string& command, const EinsteinArgs& a, const Common& c) {
  RunReport r = start(command, c);
  r.add_text("--family", a.family);
  r.add_text("--d", a.d);
  r.add_text("--lambda", a.lambda);
  r.add_text("--c0", a.c0);
  r.add_text("--h", a.h);
  for (const auto& rel : a.relations) r.add_text("--relation", rel);
  if (!c.P.empty()) throw Error("einstein-check always uses P = d/dt; drop --P");

  EinsteinProblem p = make_problem(parse_family(a.family), kind_of(c));
  if (a.d != "sym") {
    std::size_t used = 0;
    long d = 0;
    try {
      d = std::stol(a.d, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != a.d.size()) throw Error("--d must be an integer or 'sym'");
    p.set_dimension(d);
  }
  for (const auto& rel : a.relations) add_relation(p.scope, rel, p.dimension_binding());
  p.lambda = p.read(a.lambda);
  p.c0 = p.read(a.c0);
  GradedExpr h = p.read(a.h);
  std::mt19937_64 rng(c.seed);
  SampleOptions opts = c.options();
  warped_detail::check_positive(h, rng, opts);

  r.notes.push_back("convention: Ric = lambda*g on the product, Ric^N = c0*g2 on the fiber");
  r.notes.push_back("family " + a.family + ", connection " + c.connection + ", d = q - n = " + p.d.to_string());
  for (const auto& chk : verify_solution(p, h, rng, opts)) {
    std::string detail;
    if (chk.test.certainty == Certainty::nonzero) detail = "residual " + chk.residual.to_string();
    r.add_check(chk.source, chk.test, detail);
  }
  return finish(r, c);
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) s += (i > 1 ? " " : "") + std::string(argv[i]);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Connections, curvature and Einstein conditions on super warped products"};
  app.require_subcommand(1);
  Common common;
  std::string spec;
  Factors factors;
  std::string out;
  EinsteinArgs ea;

  auto* chr = app.add_subcommand("christoffel", "Nonzero Christoffel symbols of a spec file");
  chr->add_option("spec", spec, "Spec file")->required();
  add_common(chr, common, false);
  auto* cur = app.add_subcommand("curvature", "Nonzero curvature components R(d_I,d_J)d_K");
  cur->add_option("spec", spec, "Spec file")->required();
  add_common(cur, common, false);
  auto* ric = app.add_subcommand("ricci", "Nonzero Ricci tensor entries");
  ric->add_option("spec", spec, "Spec file")->required();
  add_common(ric, common, false);

  auto* war = app.add_subcommand("warped", "Write the spec file of a warped product");
  war->add_option("--base", factors.base, "Base spec file")->required();
  war->add_option("--fiber", factors.fiber, "Fiber spec file")->required();
  war->add_option("--warp", factors.warp, "Warping function h")->required();
  war->add_option("--name", factors.name, "Chart name of the product");
  war->add_option("--out", out, "Output spec file")->required();
  add_common(war, common, true);

  auto* ver = app.add_subcommand("verify-closed-forms", "Check closed forms against direct computation");
  ver->add_option("--base", factors.base, "Base spec file");
  ver->add_option("--fiber", factors.fiber, "Fiber spec file");
  ver->add_option("--warp", factors.warp, "Warping function h");
  add_common(ver, common, true);

  auto* ein = app.add_subcommand("einstein-check", "Check a warping function against the Einstein conditions");
  ein->set_help_flag("--help", "Print this help message and exit");
  ein->add_option("--family", ea.family, "r10 or r12")->required()->check(CLI::IsMember({"r10", "r12"}));
  ein->add_option("--d", ea.d, "q - n as an integer, or sym")->required();
  ein->add_option("--lambda", ea.lambda, "Einstein constant of the product")->required();
  ein->add_option("--c0", ea.c0, "Einstein constant of the fiber")->required();
  ein->add_option("--h", ea.h, "Warping function h(t)")->required();
  ein->add_option("--relation", ea.relations, "Side relation s^2 = expr (repeatable)");
  add_common(ein, common, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "supergeo: " << e.what() << "\n";
    return 2;
  }

  std::string command = join_args(argc, argv);
  try {
    if (*chr) return christoffel(command, spec, common);
    if (*cur) return curvature(command, spec, common);
    if (*ric) return ricci_cmd(command, spec, common);
    if (*war) return warped_cmd(command, factors, out, common);
    if (*ver) return verify_cmd(command, factors, common);
    if (*ein) return einstein_cmd(command, ea, common);
  } catch (const Error& e) {
    std::cerr << "supergeo: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
