#include <random>

#include <gtest/gtest.h>

#include "supergeo/numeric.hpp"
#include "supergeo/parse.hpp"
#include "supergeo/substitute.hpp"

using namespace sgeo;

namespace {

struct Env {
  Scope scope;
  AtomId t, x, xi, eta, zeta;
  Env() {
    t = scope.declare_coordinate("t", Parity::even);
    x = scope.declare_coordinate("x", Parity::even);
    xi = scope.declare_coordinate("xi", Parity::odd);
    eta = scope.declare_coordinate("eta", Parity::odd);
    zeta = scope.declare_coordinate("zeta", Parity::odd);
    for (const char* p : {"a", "c1", "c2", "lambda0"}) scope.declare_parameter(p);
  }
  GradedExpr operator()(const std::string& s) { return parse(s, scope); }
};

// Random homogeneous expression of the given parity in the odd generators.
GradedExpr random_expr(Env& env, std::mt19937_64& rng, Parity p) {
  static const char* even_atoms[] = {"t", "x", "h(t)", "h'(t)", "exp(t)", "a", "c1", "sin(x)", "1/(1+t^2)"};
  const AtomId odd[] = {env.xi, env.eta, env.zeta};
  std::uniform_int_distribution<int> pick(0, 8);
  std::uniform_int_distribution<int> small(-3, 3);
  GradedExpr sum;
  for (int k = 0; k < 3; ++k) {
    GradedExpr c = env(even_atoms[pick(rng)]) * GradedExpr(small(rng)) + env(even_atoms[pick(rng)]);
    std::vector<AtomId> chosen;
    for (AtomId o : odd)
      if (rng() % 2) chosen.push_back(o);
    if ((chosen.size() % 2 == 1) != is_odd(p)) {
      if (chosen.empty())
        chosen.push_back(odd[rng() % 3]);
      else
        chosen.pop_back();
    }
    std::shuffle(chosen.begin(), chosen.end(), rng);
    GradedExpr m = c;
    for (AtomId o : chosen) m = m * GradedExpr::atom(o);
    sum += m;
  }
  return sum;
}

}  // namespace

TEST(ExprParse, FunctionPower) {
  Env env;
  GradedExpr e = env("h(t)^2");
  ASSERT_TRUE(e.is_scalar());
  EXPECT_EQ(e.to_string(), "h(t)^2");
}

TEST(ExprParse, OddTermsCancel) {
  Env env;
  EXPECT_TRUE(env("xi*eta + eta*xi").is_zero());
}

TEST(ExprParse, NegativeConstant) {
  Env env;
  EXPECT_EQ(env("-1"), GradedExpr(-1));
}

TEST(ExprParse, Errors) {
  Env env;
  EXPECT_THROW(env("xi^2"), ParseError);
  EXPECT_THROW(env("q + 1"), ParseError);
  EXPECT_THROW(env("t + "), ParseError);
  EXPECT_THROW(env("1/xi"), ParseError);
  EXPECT_THROW(env("(t"), ParseError);
  try {
    env("t * $");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position, 4u);
  }
}

TEST(ExprParse, Decimals) {
  Env env;
  EXPECT_EQ(env("0.25"), env("1/4"));
  EXPECT_EQ(env("t^-2"), env("1/t^2"));
}

TEST(ExprParse, RoundTrip) {
  Env env;
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    GradedExpr e = random_expr(env, rng, i % 2 ? Parity::odd : Parity::even) *
                   (GradedExpr(1) + random_expr(env, rng, Parity::even));
    std::string s = e.to_string();
    GradedExpr back = env(s);
    EXPECT_EQ(back, e) << s;
    EXPECT_EQ(back.to_string(), s);
  }
}

TEST(ExprMul, SignRule) {
  Env env;
  EXPECT_EQ(env("xi*eta").to_string(), "xi*eta");
  EXPECT_EQ(env("eta*xi").to_string(), "-xi*eta");
}

TEST(ExprMul, ExponentialsMerge) {
  Env env;
  EXPECT_EQ(env("exp(t)*exp(t)"), env("exp(2*t)"));
  EXPECT_EQ(env("exp(t)*exp(-t)"), GradedExpr(1));
  EXPECT_EQ(env("exp(0)"), GradedExpr(1));
}

TEST(ExprMul, FractionCancellation) {
  Env env;
  GradedExpr e = env("(h'(t)/h(t))*h(t)");
  EXPECT_EQ(e, env("h'(t)"));
  // cross-check by sampling with a concrete h
  Bindings b;
  b.bind_function(AtomTable::global().function_symbol("h"), env("2 + t^2 + exp(t)"));
  std::mt19937_64 rng(3);
  GradedExpr lhs = substitute(env("h'(t)/h(t)"), b) * substitute(env("h(t)"), b);
  GradedExpr rhs = substitute(env("h'(t)"), b);
  SampleOptions opts;
  opts.samples = 5;
  EXPECT_TRUE(is_zero(lhs - rhs, rng, opts).zero());
}

TEST(ExprMul, ExponentialGcd) {
  Env env;
  EXPECT_EQ(env("(exp(2*t) - 1)/(exp(t) - 1)"), env("exp(t) + 1"));
  EXPECT_EQ(env("(c1*exp(t) + c2)*exp(t)/(c1*exp(2*t) + c2*exp(t))"), GradedExpr(1));
  EXPECT_EQ(env("exp(t/2)^2"), env("exp(t)"));
}

TEST(ExprDerive, ChainRule) {
  Env env;
  EXPECT_EQ(env("h(t)^2").derive(env.t), env("2*h(t)*h'(t)"));
  EXPECT_EQ(env("exp(a*t)").derive(env.t), env("a*exp(a*t)"));
  EXPECT_EQ(env("sin(2*t)").derive(env.t), env("2*cos(2*t)"));
  EXPECT_EQ(env("cos(t)").derive(env.t), env("-sin(t)"));
  EXPECT_TRUE(env("h(x)").derive(env.t).is_zero());
}

TEST(ExprDerive, OddLeftDerivative) {
  Env env;
  EXPECT_EQ(env("xi*eta").derive(env.xi), env("eta"));
  EXPECT_EQ(env("xi*eta").derive(env.eta), env("-xi"));
  EXPECT_EQ(env("xi").derive(env.xi), GradedExpr(1));
  EXPECT_TRUE(env("eta").derive(env.xi).is_zero());
}

TEST(ExprSubstitute, Examples) {
  Env env;
  AtomId h = AtomTable::global().function_symbol("h");
  Bindings one;
  one.bind_function(h, GradedExpr(1));
  EXPECT_EQ(substitute(env("h(t)"), one), GradedExpr(1));
  Bindings e2;
  e2.bind_function(h, env("exp(2*t)"));
  EXPECT_EQ(substitute(env("h'(t)*h(t)"), e2), env("2*exp(4*t)"));
  Bindings p;
  p.bind_parameter(env.scope.require("a"), env("3"));
  EXPECT_EQ(substitute(env("exp(a*t) + a"), p), env("exp(3*t) + 3"));
  EXPECT_THROW(p.bind_parameter(env.scope.require("c1"), env("xi")), Error);
}

TEST(ExprSubstitute, ExponentialSolution) {
  Env env;
  AtomId h = AtomTable::global().function_symbol("h");
  Bindings b;
  b.bind_function(h, env("c1*exp(t) + c2"));
  GradedExpr r = substitute(env("h''(t)/h(t) - h'(t)/h(t)"), b);
  EXPECT_TRUE(r.is_zero());
}

TEST(ExprZero, Certainty) {
  Env env;
  std::mt19937_64 rng(11);
  EXPECT_EQ(is_zero(env("xi*eta + eta*xi"), rng).certainty, Certainty::symbolic);
  EXPECT_EQ(is_zero(env("sin(t)^2 + cos(t)^2 - 1"), rng).certainty, Certainty::numeric);
  ZeroTest nz = is_zero(env("h''(t) - h'(t)"), rng);
  EXPECT_EQ(nz.certainty, Certainty::nonzero);
  EXPECT_FALSE(nz.witness.empty());
}

TEST(ExprZero, NumericConsistency) {
  Env env;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    GradedExpr a = random_expr(env, rng, Parity::even);
    GradedExpr b = random_expr(env, rng, Parity::odd);
    GradedExpr z = (a * b - b * a);
    ASSERT_TRUE(z.is_zero());
    // a numerically evaluated copy of a zero that is not canonical-empty
    GradedExpr s = env("sin(t)^2 + cos(t)^2 - 1") * a;
    ZeroTest zt = is_zero(s, rng);
    EXPECT_TRUE(zt.zero());
    EXPECT_LT(zt.max_abs, 1e-12);
  }
}

TEST(ExprRelation, SquareRootReduction) {
  Env env;
  AtomId s = env.scope.declare_root("s", Coeff(1) - env("4*lambda0").body());
  (void)s;
  EXPECT_EQ(env("s^2"), env("1 - 4*lambda0"));
  EXPECT_EQ(env("1/(1+s)"), env("(1-s)/(4*lambda0)"));
  EXPECT_THROW(env.scope.declare_root("r", Coeff(-3)), Error);
}

TEST(ExprInverse, EvenNilpotent) {
  Env env;
  GradedExpr a = env("1 + t + xi*eta");
  GradedExpr inv = a.inverse();
  EXPECT_EQ(a * inv, GradedExpr(1));
  EXPECT_EQ(inv * a, GradedExpr(1));
  EXPECT_THROW(env("xi*eta").inverse(), Error);
}

class ExprLaws : public ::testing::Test {
 protected:
  Env env;
  std::mt19937_64 rng{2024};
  Parity rp() { return rng() % 2 ? Parity::odd : Parity::even; }
};

TEST_F(ExprLaws, Canonicality) {
  for (int i = 0; i < 100; ++i) {
    GradedExpr a = random_expr(env, rng, rp()), b = random_expr(env, rng, rp()), c = random_expr(env, rng, rp());
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ((a * b) * c, a * (b * c));
  }
}

TEST_F(ExprLaws, SignRule) {
  for (int i = 0; i < 100; ++i) {
    Parity pa = rp(), pb = rp();
    GradedExpr a = random_expr(env, rng, pa), b = random_expr(env, rng, pb);
    EXPECT_TRUE((a * b - GradedExpr(koszul(pa, pb)) * (b * a)).is_zero());
  }
}

TEST_F(ExprLaws, GradedLeibniz) {
  const AtomId coords[] = {env.t, env.x, env.xi, env.eta, env.zeta};
  for (int i = 0; i < 100; ++i) {
    Parity pa = rp();
    GradedExpr a = random_expr(env, rng, pa), b = random_expr(env, rng, rp());
    AtomId x = coords[rng() % 5];
    GradedExpr lhs = (a * b).derive(x);
    GradedExpr rhs = a.derive(x) * b + GradedExpr(koszul(atom_parity(x), pa)) * (a * b.derive(x));
    EXPECT_TRUE((lhs - rhs).is_zero());
  }
}

TEST_F(ExprLaws, Nilpotency) {
  for (AtomId o : {env.xi, env.eta, env.zeta}) EXPECT_TRUE((GradedExpr::atom(o) * GradedExpr::atom(o)).is_zero());
  for (int i = 0; i < 100; ++i) {
    GradedExpr x = GradedExpr::atom(env.xi) * random_expr(env, rng, Parity::even);
    EXPECT_TRUE((x * x).is_zero());
  }
}
