#pragma once
// Curvature, Ricci tensor, divergence and Laplacian.

#include <vector>

#include "supergeo/connection.hpp"

namespace sgeo {

/// R(X,Y)Z = nabla_X nabla_Y Z - (-1)^{|X||Y|} nabla_Y nabla_X Z - nabla_[X,Y] Z.
inline VectorField riemann(const Connection& conn, const VectorField& x, const VectorField& y, const VectorField& z) {
  const Chart& chart = conn.chart();
  VectorField r(chart.dim());
  for (const auto& [px, xs] : homogeneous_parts(chart, x))
    for (const auto& [py, ys] : homogeneous_parts(chart, y)) {
      r += covariant_derivative(conn, xs, covariant_derivative(conn, ys, z));
      r -= GradedExpr(koszul(px, py)) * covariant_derivative(conn, ys, covariant_derivative(conn, xs, z));
    }
  VectorField b = bracket(chart, x, y);
  if (!b.is_zero()) r -= covariant_derivative(conn, b, z);
  return r;
}

/// table[I][J][K] = R(d_I, d_J) d_K.
using RiemannTable = std::vector<std::vector<std::vector<VectorField>>>;

inline RiemannTable riemann_table(const Connection& conn) {
  const Chart& chart = conn.chart();
  std::size_t n = chart.dim();
  // nabla_J d_K is the Christoffel entry; apply nabla_I once more.
  RiemannTable t(n, std::vector<std::vector<VectorField>>(n, std::vector<VectorField>(n, VectorField(n))));
  std::vector<std::vector<std::vector<VectorField>>> second(n, std::vector<std::vector<VectorField>>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        second[i][j].push_back(covariant_derivative(conn, VectorField::basis(chart, i), conn.gamma[j][k]));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        t[i][j][k] = second[i][j][k] - GradedExpr(koszul(chart.parity(i), chart.parity(j))) * second[j][i][k];
  return t;
}

using RicciTable = Matrix;

/// Ric(A,B) = sum_I (-1)^{|I|(|I|+|A|+|B|)} 1/2 [R(d_I,A)B + (-1)^{|A||B|} R(d_I,B)A]^I.
inline RicciTable ricci(const Connection& conn, const RiemannTable& r) {
  const Chart& chart = conn.chart();
  std::size_t n = chart.dim();
  RicciTable ric(n, std::vector<GradedExpr>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      Parity pa = chart.parity(a), pb = chart.parity(b);
      GradedExpr s;
      for (std::size_t i = 0; i < n; ++i) {
        Parity pi = chart.parity(i);
        GradedExpr term = r[i][a][b][i] + GradedExpr(koszul(pa, pb)) * r[i][b][a][i];
        s += GradedExpr(koszul(pi, pi + pa + pb)) * term;
      }
      ric[a][b] = s * GradedExpr(mpq_class(1, 2));
    }
  return ric;
}

inline RicciTable ricci(const Connection& conn) { return ricci(conn, riemann_table(conn)); }

/// Div_L(X) = sum_I (-1)^{|I|(|I|+|X|)} (nabla_{d_I} X)^I, Levi-Civita only.
inline GradedExpr divergence(const Connection& conn, const VectorField& x) {
  if (conn.kind != ConnectionKind::levi_civita) throw Error("unsupported: divergence is defined for the Levi-Civita connection");
  const Chart& chart = conn.chart();
  GradedExpr s;
  for (const auto& [px, xs] : homogeneous_parts(chart, x))
    for (std::size_t i = 0; i < chart.dim(); ++i) {
      VectorField d = covariant_derivative(conn, VectorField::basis(chart, i), xs);
      Parity pi = chart.parity(i);
      s += GradedExpr(koszul(pi, pi + px)) * d[i];
    }
  return s;
}

inline GradedExpr laplacian(const Metric& g, const GradedExpr& f) { return divergence(levi_civita(g), gradient(g, f)); }

/// Curvature of the semi-symmetric connection assembled from nabla^L, P and g
/// (for homogeneous X, Y, Z; even metric and P).
inline VectorField prop215_rhs(const Metric& g, const VectorField& p, const VectorField& x, const VectorField& y,
                               const VectorField& z) {
  const Chart& chart = g.chart();
  Connection lc = levi_civita(g);
  auto ox = field_parity(chart, x), oy = field_parity(chart, y), oz = field_parity(chart, z);
  if (!ox || !oy || !oz) throw Error("curvature decomposition needs homogeneous fields");
  Parity px = *ox, py = *oy, pz = *oz;
  auto sg = [](int s) { return GradedExpr(s); };
  VectorField nxp = covariant_derivative(lc, x, p);
  VectorField nyp = covariant_derivative(lc, y, p);
  GradedExpr gyz = pair(g, y, z), gxz = pair(g, x, z);
  GradedExpr piX = pair(g, x, p), piY = pair(g, y, p), piZ = pair(g, z, p), piP = pair(g, p, p);
  int kxy = koszul(px, py);
  VectorField r = riemann(lc, x, y, z);
  r += sg(koszul(px + py, pz)) * pair(g, z, nxp) * y;
  r -= sg(kxy * koszul(px + py, pz)) * pair(g, z, nyp) * x;
  r -= sg(koszul(py + pz, px)) * gyz * nxp;
  r += sg(kxy * koszul(px + pz, py)) * gxz * nyp;
  r += sg(koszul(px, py + pz) * koszul(py, pz)) * piZ * piY * x;
  r -= sg(koszul(px, py + pz)) * gyz * piP * x;
  r -= sg(koszul(px + py, pz)) * piZ * piX * y;
  r += sg(koszul(py, pz)) * gxz * piP * y;
  r += sg(koszul(px, py + pz)) * gyz * piX * p;
  r -= sg(kxy * koszul(py, px + pz)) * gxz * piY * p;
  return r;
}

inline VectorField prop215_residual(const Metric& g, const VectorField& p, const VectorField& x, const VectorField& y,
                                    const VectorField& z) {
  Connection ssm = semi_symmetric(g, p);
  return riemann(ssm, x, y, z) - prop215_rhs(g, p, x, y, z);
}

}  // namespace sgeo
