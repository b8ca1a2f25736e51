#include "support.hpp"

using namespace sgeo;
using namespace sgeo::testing;

namespace {

VectorField e(const Chart& c, const std::string& n) { return VectorField::basis(c, c.require(n)); }

}  // namespace

TEST(Pair, FlatR12) {
  auto m = data_spec("r12.spec");
  EXPECT_EQ(pair(m.metric, e(m.chart, "xi"), e(m.chart, "eta")), GradedExpr(-1));
  EXPECT_EQ(pair(m.metric, e(m.chart, "eta"), e(m.chart, "xi")), GradedExpr(1));
  EXPECT_EQ(pair(m.metric, e(m.chart, "t"), e(m.chart, "t")), GradedExpr(-1));
}

TEST(Pair, GradedSymmetry) {
  auto m = spec_from(curved_r12);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 100; ++k) {
    Parity px = random_parity(rng), py = random_parity(rng);
    VectorField x = random_field(m.chart, rng, px), y = random_field(m.chart, rng, py);
    EXPECT_TRUE(expr_zero(pair(m.metric, x, y) - GradedExpr(koszul(px, py)) * pair(m.metric, y, x)));
    auto pp = pair(m.metric, x, y).parity();
    ASSERT_TRUE(pp.has_value());
    if (!pair(m.metric, x, y).is_zero()) {
      EXPECT_EQ(*pp, px + py);
    }
  }
}

TEST(Pair, LeftLinearity) {
  auto m = spec_from(curved_r12);
  std::mt19937_64 rng(2);
  for (int k = 0; k < 100; ++k) {
    Parity pf = random_parity(rng), px = random_parity(rng);
    GradedExpr f = random_function(m.chart, rng, pf);
    VectorField x = random_field(m.chart, rng, px);
    VectorField y = random_field(m.chart, rng, px + pf);
    VectorField z = random_field(m.chart, rng, random_parity(rng));
    GradedExpr lhs = pair(m.metric, f * x + y, z);
    GradedExpr rhs = f * pair(m.metric, x, z) + pair(m.metric, y, z);
    EXPECT_TRUE(expr_zero(lhs - rhs));
  }
}

TEST(Pair, WarpedFiberBlock) {
  auto m = spec_from(R"(
[chart] name = W ; coords = t:even, y1:even, y2:even
[metric] degree = even
g[t,t] = -1
g[y1,y1] = h(t)^2
g[y2,y2] = h(t)^2
)");
  Scope& s = m.scope;
  VectorField u = e(m.chart, "y1") + parse("t", s) * e(m.chart, "y2");
  VectorField w = e(m.chart, "y2");
  EXPECT_EQ(pair(m.metric, u, w), parse("t*h(t)^2", s));
}

TEST(InverseMetric, FlatR12) {
  auto m = data_spec("r12.spec");
  const Matrix& inv = m.metric.inverse();
  std::size_t t = m.chart.require("t"), xi = m.chart.require("xi"), eta = m.chart.require("eta");
  EXPECT_EQ(inv[t][t], GradedExpr(-1));
  EXPECT_EQ(inv[xi][eta], GradedExpr(1));
  EXPECT_EQ(inv[eta][xi], GradedExpr(-1));
  EXPECT_EQ(multiply(inv, m.metric.table()), identity_matrix(3));
  EXPECT_EQ(multiply(m.metric.table(), inv), identity_matrix(3));
}

TEST(InverseMetric, TwoSidedOnCurvedMetric) {
  auto m = spec_from(curved_r12);
  EXPECT_EQ(multiply(m.metric.inverse(), m.metric.table()), identity_matrix(3));
  EXPECT_EQ(multiply(m.metric.table(), m.metric.inverse()), identity_matrix(3));
}

TEST(InverseMetric, Diagonal) {
  auto eu = data_spec("r20.spec");
  EXPECT_EQ(eu.metric.inverse(), identity_matrix(2));
  auto w = spec_from(R"(
[chart] name = W ; coords = t:even, y1:even, y2:even
[metric] degree = even
g[t,t] = -1
g[y1,y1] = h(t)^2
g[y2,y2] = h(t)^2
)");
  const Matrix& inv = w.metric.inverse();
  EXPECT_EQ(inv[0][0], GradedExpr(-1));
  EXPECT_EQ(inv[1][1], parse("h(t)^-2", w.scope));
  EXPECT_EQ(inv[2][2], parse("1/h(t)^2", w.scope));
  EXPECT_TRUE(inv[1][2].is_zero());
}

TEST(MetricValidation, Errors) {
  EXPECT_THROW(spec_from("[chart] name = A ; coords = x:even, y:even\n[metric]\ng[x,x] = 1\n"), SpecError);
  EXPECT_THROW(spec_from("[chart] name = A ; coords = x:even, y:even\n[metric]\ng[x,x] = 1\ng[y,y] = 1\ng[x,y] = 1\n"),
               SpecError);
  EXPECT_THROW(spec_from("[chart] name = A ; coords = x:even, xi:odd\n[metric]\ng[x,x] = 1\ng[x,xi] = 1\ng[xi,x] = 1\n"),
               SpecError);
  try {
    spec_from("[chart] name = A ; coords = x:even\n[metric]\n\ng[x,x] = 1 +\n");
    FAIL();
  } catch (const SpecError& err) {
    EXPECT_EQ(err.line, 4);
  }
  EXPECT_THROW(spec_from("[chart] name = A ; coords = x\n[metric]\ng[x,x] = 1\n"), SpecError);
  EXPECT_THROW(spec_from("[bogus]\n"), SpecError);
}

TEST(MetricValidation, OddMetricPairs) {
  auto m = spec_from(R"(
[chart] name = O ; coords = x:even, xi:odd
[metric] degree = odd
g[x,xi] = 1
g[xi,x] = 1
)");
  EXPECT_EQ(pair(m.metric, e(m.chart, "x"), e(m.chart, "xi")), GradedExpr(1));
  EXPECT_THROW(gradient(m.metric, GradedExpr::atom(m.chart.id(0))), Error);
}

TEST(Bracket, CoordinateFieldsCommute) {
  auto m = spec_from(curved_r12);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      EXPECT_TRUE(field_zero(bracket(m.chart, VectorField::basis(m.chart, i), VectorField::basis(m.chart, j))));
}

TEST(Bracket, Examples) {
  auto m = data_spec("r12.spec");
  Scope& s = m.scope;
  VectorField dt = e(m.chart, "t");
  EXPECT_EQ(bracket(m.chart, parse("t", s) * dt, dt), -dt);
  VectorField x = parse("xi", s) * e(m.chart, "eta");
  VectorField y = parse("eta", s) * e(m.chart, "xi");
  VectorField b = bracket(m.chart, x, y);
  // oracle: act on each coordinate function
  for (const auto& c : m.chart.coords()) {
    GradedExpr f = GradedExpr::atom(c.id);
    GradedExpr direct = apply(m.chart, x, apply(m.chart, y, f)) - apply(m.chart, y, apply(m.chart, x, f));
    EXPECT_EQ(apply(m.chart, b, f), direct) << c.name;
  }
  EXPECT_EQ(b, parse("xi", s) * e(m.chart, "xi") - parse("eta", s) * e(m.chart, "eta"));
}

TEST(Bracket, ActsAsCommutatorOnFunctions) {
  auto m = spec_from(curved_r12);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    Parity px = random_parity(rng), py = random_parity(rng);
    VectorField x = random_field(m.chart, rng, px), y = random_field(m.chart, rng, py);
    VectorField b = bracket(m.chart, x, y);
    GradedExpr f = random_function(m.chart, rng, random_parity(rng));
    GradedExpr lhs = apply(m.chart, b, f);
    GradedExpr rhs = apply(m.chart, x, apply(m.chart, y, f)) -
                     GradedExpr(koszul(px, py)) * apply(m.chart, y, apply(m.chart, x, f));
    EXPECT_TRUE(expr_zero(lhs - rhs));
  }
}

TEST(Gradient, Examples) {
  auto m = data_spec("r10.spec");
  Scope& s = m.scope;
  VectorField dt = e(m.chart, "t");
  EXPECT_EQ(gradient(m.metric, parse("h(t)", s)), parse("-h'(t)", s) * dt);
  EXPECT_TRUE(field_zero(gradient(m.metric, parse("7", s))));
  auto eu = spec_from("[chart] name = L ; coords = t:even\n[metric]\ng[t,t] = 1\n");
  EXPECT_EQ(gradient(eu.metric, parse("t", eu.scope)), VectorField::basis(eu.chart, 0));
}

TEST(Gradient, DefiningProperty) {
  auto m = spec_from(curved_r12);
  std::mt19937_64 rng(4);
  for (int k = 0; k < 100; ++k) {
    Parity pf = random_parity(rng);
    GradedExpr f = random_function(m.chart, rng, pf);
    VectorField grad = gradient(m.metric, f);
    for (std::size_t i = 0; i < m.chart.dim(); ++i) {
      VectorField x = VectorField::basis(m.chart, i);
      EXPECT_TRUE(expr_zero(apply(m.chart, x, f) - pair(m.metric, x, grad)));
    }
  }
}

TEST(Gradient, RandomFieldsOnCurvedMetric) {
  auto m = spec_from(curved_r12);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 30; ++k) {
    GradedExpr f = random_function(m.chart, rng, random_parity(rng));
    VectorField x = random_field(m.chart, rng, random_parity(rng));
    EXPECT_TRUE(expr_zero(apply(m.chart, x, f) - pair(m.metric, x, gradient(m.metric, f))));
  }
}

TEST(SpecFile, RoundTrip) {
  auto m = spec_from(curved_r12);
  std::string text = write_spec(m.chart, m.metric, m.params, m.P);
  auto back = spec_from(text);
  EXPECT_EQ(write_spec(back.chart, back.metric, back.params, back.P), text);
}

TEST(SpecFile, FieldSyntax) {
  auto m = data_spec("r12_P.spec");
  ASSERT_TRUE(m.P.has_value());
  EXPECT_EQ(*m.P, e(m.chart, "t"));
  EXPECT_EQ(parse_field(m.chart, m.scope, "t = 1, xi = eta*xi"),
            e(m.chart, "t") + parse("-xi*eta", m.scope) * e(m.chart, "xi"));
  EXPECT_THROW(parse_field(m.chart, m.scope, "q = 1"), Error);
}
