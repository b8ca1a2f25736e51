#pragma once
// Affine connections given by Christoffel tables over the coordinate frame:
// nabla_{d_I} d_J = sum_K Gamma^K_IJ d_K with left coefficients.

#include <optional>
#include <string>
#include <vector>

#include "supergeo/manifold.hpp"

namespace sgeo {

enum class ConnectionKind { levi_civita, semi_symmetric };

inline const char* connection_name(ConnectionKind k) { return k == ConnectionKind::levi_civita ? "lc" : "ssm"; }

struct Connection {
  Metric metric;
  ConnectionKind kind = ConnectionKind::levi_civita;
  std::optional<VectorField> P;      // torsion vector (semi-symmetric only)
  std::vector<std::vector<VectorField>> gamma;  // gamma[I][J] = nabla_{d_I} d_J

  const Chart& chart() const { return metric.chart(); }
  const GradedExpr& christoffel(std::size_t k, std::size_t i, std::size_t j) const { return gamma[i][j][k]; }
};

namespace connection_detail {

inline std::vector<std::vector<VectorField>> empty_table(std::size_t n) {
  return std::vector<std::vector<VectorField>>(n, std::vector<VectorField>(n, VectorField(n)));
}

/// Solves <nabla_I d_J, d_L> = a[I][J][L] for the table.
inline std::vector<std::vector<VectorField>> raise(const Metric& g, const std::vector<std::vector<std::vector<GradedExpr>>>& a) {
  std::size_t n = g.chart().dim();
  auto table = empty_table(n);
  const Matrix& inv = g.inverse();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < n; ++m) {
        GradedExpr s;
        for (std::size_t k = 0; k < n; ++k)
          if (!a[i][j][k].is_zero() && !inv[k][m].is_zero()) s += a[i][j][k] * inv[k][m];
        table[i][j][m] = s;
      }
  return table;
}

inline void check_torsion_vector(const Metric& g, const VectorField& p) {
  check_chart(g.chart(), p);
  auto parity = field_parity(g.chart(), p);
  if (!parity) throw Error("torsion vector P must be homogeneous");
  if (*parity + g.degree() != Parity::even) throw Error("degree mismatch: |g| + |P| must be even");
}

}  // namespace connection_detail

/// Levi-Civita connection from the Koszul formula on coordinate fields.
inline Connection levi_civita(const Metric& g) {
  g.require_even("levi_civita");
  const Chart& chart = g.chart();
  std::size_t n = chart.dim();
  std::vector<std::vector<std::vector<GradedExpr>>> a(n, std::vector<std::vector<GradedExpr>>(n, std::vector<GradedExpr>(n)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        Parity pi = chart.parity(i), pj = chart.parity(j), pk = chart.parity(k);
        GradedExpr s = g(j, k).derive(chart.id(i));
        GradedExpr t2 = g(k, i).derive(chart.id(j));
        GradedExpr t3 = g(i, j).derive(chart.id(k));
        s += GradedExpr(koszul(pi, pj + pk)) * t2;
        s -= GradedExpr(koszul(pk, pi + pj)) * t3;
        a[i][j][k] = s * GradedExpr(mpq_class(1, 2));
      }
  Connection c;
  c.metric = g;
  c.kind = ConnectionKind::levi_civita;
  c.gamma = connection_detail::raise(g, a);
  return c;
}

/// pi_J = <d_J, P>.
inline std::vector<GradedExpr> torsion_form(const Metric& g, const VectorField& p) {
  std::vector<GradedExpr> pi;
  for (std::size_t j = 0; j < g.chart().dim(); ++j) pi.push_back(pair(g, VectorField::basis(g.chart(), j), p));
  return pi;
}

/// nabla_X Y = nabla^L_X Y + X . g(Y,P) - g(X,Y) P.
inline Connection semi_symmetric(const Metric& g, const VectorField& p) {
  connection_detail::check_torsion_vector(g, p);
  Connection c = levi_civita(g);
  const Chart& chart = g.chart();
  std::size_t n = chart.dim();
  auto pi = torsion_form(g, p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      VectorField& v = c.gamma[i][j];
      v[i] += GradedExpr(koszul(chart.parity(i), chart.parity(j))) * pi[j];
      if (!g(i, j).is_zero()) v -= g(i, j) * p;
    }
  c.kind = ConnectionKind::semi_symmetric;
  c.P = p;
  return c;
}

/// nabla_X Y for arbitrary fields.
inline VectorField covariant_derivative(const Connection& conn, const VectorField& x, const VectorField& y) {
  const Chart& chart = conn.chart();
  check_chart(chart, x);
  check_chart(chart, y);
  std::size_t n = chart.dim();
  VectorField r(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i].is_zero()) continue;
    VectorField d(n);
    for (std::size_t k = 0; k < n; ++k) d.c[k] = y[k].derive(chart.id(i));
    for (std::size_t j = 0; j < n; ++j) {
      if (y[j].is_zero()) continue;
      d += y[j].twist(chart.parity(i)) * conn.gamma[i][j];
    }
    r += x[i] * d;
  }
  return r;
}

/// T(X,Y) = nabla_X Y - (-1)^{|X||Y|} nabla_Y X - [X,Y].
inline VectorField torsion(const Connection& conn, const VectorField& x, const VectorField& y) {
  const Chart& chart = conn.chart();
  VectorField r(chart.dim());
  for (const auto& [px, xs] : homogeneous_parts(chart, x))
    for (const auto& [py, ys] : homogeneous_parts(chart, y)) {
      r += covariant_derivative(conn, xs, ys);
      r -= GradedExpr(koszul(px, py)) * covariant_derivative(conn, ys, xs);
    }
  return r - bracket(chart, x, y);
}

/// The torsion predicted for the semi-symmetric connection:
/// X . g(Y,P) - (-1)^{|X||Y|} Y . g(X,P).
inline VectorField expected_torsion(const Metric& g, const VectorField& p, const VectorField& x, const VectorField& y) {
  const Chart& chart = g.chart();
  VectorField r(chart.dim());
  for (const auto& [px, xs] : homogeneous_parts(chart, x))
    for (const auto& [py, ys] : homogeneous_parts(chart, y)) {
      GradedExpr piy = pair(g, ys, p);
      GradedExpr pix = pair(g, xs, p);
      r += GradedExpr(koszul(px, py)) * piy * xs;
      r -= pix * ys;
    }
  return r;
}

/// X<Y,Z> - <nabla_X Y, Z> - (-1)^{|X||Y|} <Y, nabla_X Z> for homogeneous X, Y.
inline GradedExpr compatibility_residual(const Connection& conn, const VectorField& x, const VectorField& y,
                                         const VectorField& z) {
  const Chart& chart = conn.chart();
  auto px = field_parity(chart, x);
  auto py = field_parity(chart, y);
  if (!px || !py) throw Error("compatibility residual needs homogeneous X and Y");
  const Metric& g = conn.metric;
  return apply(chart, x, pair(g, y, z)) - pair(g, covariant_derivative(conn, x, y), z) -
         GradedExpr(koszul(*px, *py)) * pair(g, y, covariant_derivative(conn, x, z));
}

/// Rebuilds the connection from the torsion-trace identity:
/// 2g(H(X,Y),Z) = g(T(X,Y),Z) + (-1)^{|Z|(|X|+|Y|)} g(T(Z,X),Y)
///              + (-1)^{|X||Y|} (-1)^{|Z|(|X|+|Y|)} g(T(Z,Y),X)
/// with T the semi-symmetric torsion, and returns nabla^L + H.
inline Connection reconstruct_unique(const Metric& g, const VectorField& p) {
  connection_detail::check_torsion_vector(g, p);
  Connection c = levi_civita(g);
  const Chart& chart = g.chart();
  std::size_t n = chart.dim();
  std::vector<std::vector<std::vector<GradedExpr>>> a(n, std::vector<std::vector<GradedExpr>>(n, std::vector<GradedExpr>(n)));
  auto e = [&](std::size_t i) { return VectorField::basis(chart, i); };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        Parity px = chart.parity(i), py = chart.parity(j), pz = chart.parity(k);
        int sz = koszul(pz, px + py);
        GradedExpr s = pair(g, expected_torsion(g, p, e(i), e(j)), e(k));
        s += GradedExpr(sz) * pair(g, expected_torsion(g, p, e(k), e(i)), e(j));
        s += GradedExpr(koszul(px, py) * sz) * pair(g, expected_torsion(g, p, e(k), e(j)), e(i));
        a[i][j][k] = s * GradedExpr(mpq_class(1, 2));
      }
  auto h = connection_detail::raise(g, a);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c.gamma[i][j] += h[i][j];
  c.kind = ConnectionKind::semi_symmetric;
  c.P = p;
  return c;
}

/// Entries of the two tables that differ.
inline std::vector<GradedExpr> table_difference(const Connection& a, const Connection& b) {
  std::vector<GradedExpr> out;
  std::size_t n = a.chart().dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) out.push_back(a.gamma[i][j][k] - b.gamma[i][j][k]);
  return out;
}

}  // namespace sgeo
