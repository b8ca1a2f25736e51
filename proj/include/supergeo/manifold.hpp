#pragma once
// Charts, vector fields and metrics on a single global coordinate chart.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "supergeo/parse.hpp"

namespace sgeo {

struct Coordinate {
  std::string name;
  AtomId id = 0;
  Parity parity = Parity::even;
};

class Chart {
 public:
  Chart() = default;
  Chart(std::string name, std::vector<Coordinate> coords) : name_(std::move(name)), coords_(std::move(coords)) {
    for (std::size_t i = 0; i < coords_.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (coords_[i].name == coords_[j].name || coords_[i].id == coords_[j].id)
          throw Error("coordinate '" + coords_[i].name + "' appears twice in chart " + name_);
  }

  /// Declares fresh coordinates in `scope`.
  static Chart declare(Scope& scope, std::string name, const std::vector<std::pair<std::string, Parity>>& coords) {
    std::vector<Coordinate> out;
    for (const auto& [n, p] : coords) out.push_back({n, scope.declare_coordinate(n, p), p});
    return Chart(std::move(name), std::move(out));
  }

  static Chart product(std::string name, const Chart& a, const Chart& b) {
    std::vector<Coordinate> all = a.coords_;
    all.insert(all.end(), b.coords_.begin(), b.coords_.end());
    return Chart(std::move(name), std::move(all));
  }

  const std::string& name() const { return name_; }
  std::size_t dim() const { return coords_.size(); }
  const std::vector<Coordinate>& coords() const { return coords_; }
  const Coordinate& operator[](std::size_t i) const { return coords_.at(i); }
  Parity parity(std::size_t i) const { return coords_.at(i).parity; }
  AtomId id(std::size_t i) const { return coords_.at(i).id; }

  std::optional<std::size_t> index(AtomId id) const {
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (coords_[i].id == id) return i;
    return std::nullopt;
  }

  std::optional<std::size_t> index(const std::string& n) const {
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (coords_[i].name == n) return i;
    return std::nullopt;
  }

  std::size_t require(const std::string& n) const {
    if (auto i = index(n)) return *i;
    throw Error("unknown coordinate '" + n + "' in chart " + name_);
  }

  /// (p, m): numbers of even and odd coordinates.
  std::pair<int, int> dimension() const {
    int p = 0;
    for (const auto& c : coords_) p += is_odd(c.parity) ? 0 : 1;
    return {p, static_cast<int>(coords_.size()) - p};
  }

  bool same(const Chart& o) const {
    if (coords_.size() != o.coords_.size()) return false;
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (coords_[i].id != o.coords_[i].id) return false;
    return true;
  }

 private:
  std::string name_;
  std::vector<Coordinate> coords_;
};

/// Vector field X = sum_I X^I d_I with left coefficients X^I.
struct VectorField {
  std::vector<GradedExpr> c;

  VectorField() = default;
  explicit VectorField(std::size_t n) : c(n) {}
  explicit VectorField(std::vector<GradedExpr> comps) : c(std::move(comps)) {}

  static VectorField basis(const Chart& chart, std::size_t i) {
    VectorField v(chart.dim());
    v.c.at(i) = GradedExpr(1);
    return v;
  }

  std::size_t size() const { return c.size(); }
  const GradedExpr& operator[](std::size_t i) const { return c.at(i); }
  GradedExpr& operator[](std::size_t i) { return c.at(i); }

  bool is_zero() const {
    for (const auto& e : c)
      if (!e.is_zero()) return false;
    return true;
  }

  friend bool operator==(const VectorField& a, const VectorField& b) { return a.c == b.c; }

  friend VectorField operator+(const VectorField& a, const VectorField& b) {
    check_sizes(a, b);
    VectorField r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
  }
  friend VectorField operator-(const VectorField& a, const VectorField& b) {
    check_sizes(a, b);
    VectorField r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
  }
  VectorField operator-() const {
    VectorField r(size());
    for (std::size_t i = 0; i < size(); ++i) r.c[i] = -c[i];
    return r;
  }
  VectorField& operator+=(const VectorField& o) { return *this = *this + o; }
  VectorField& operator-=(const VectorField& o) { return *this = *this - o; }

  /// f X (the function multiplies every coefficient from the left).
  friend VectorField operator*(const GradedExpr& f, const VectorField& x) {
    VectorField r(x.size());
    if (f.is_zero()) return r;
    for (std::size_t i = 0; i < x.size(); ++i) r.c[i] = f * x.c[i];
    return r;
  }

 private:
  static void check_sizes(const VectorField& a, const VectorField& b) {
    if (a.size() != b.size()) throw Error("vector fields live on different charts");
  }
};

/// Parity of X if homogeneous (X^I has parity s + |d_I| for all I); zero is even.
inline std::optional<Parity> field_parity(const Chart& chart, const VectorField& x) {
  for (Parity s : {Parity::even, Parity::odd}) {
    bool ok = true;
    for (std::size_t i = 0; i < chart.dim() && ok; ++i) ok = x[i].has_parity(s + chart.parity(i));
    if (ok) return s;
  }
  return std::nullopt;
}

/// The parity-s component of X.
inline VectorField field_part(const Chart& chart, const VectorField& x, Parity s) {
  VectorField r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r.c[i] = x[i].part(s + chart.parity(i));
  return r;
}

/// Splits X into nonzero homogeneous parts.
inline std::vector<std::pair<Parity, VectorField>> homogeneous_parts(const Chart& chart, const VectorField& x) {
  std::vector<std::pair<Parity, VectorField>> out;
  if (auto p = field_parity(chart, x)) {
    out.emplace_back(*p, x);
    return out;
  }
  for (Parity s : {Parity::even, Parity::odd}) {
    VectorField part = field_part(chart, x, s);
    if (!part.is_zero()) out.emplace_back(s, std::move(part));
  }
  return out;
}

inline void check_chart(const Chart& chart, const VectorField& x) {
  if (x.size() != chart.dim()) throw Error("vector field does not belong to chart " + chart.name());
}

/// X(f) = sum_I X^I d_I f.
inline GradedExpr apply(const Chart& chart, const VectorField& x, const GradedExpr& f) {
  check_chart(chart, x);
  GradedExpr r;
  for (std::size_t i = 0; i < chart.dim(); ++i)
    if (!x[i].is_zero()) r += x[i] * f.derive(chart.id(i));
  return r;
}

/// Graded commutator [X, Y] of derivations.
inline VectorField bracket(const Chart& chart, const VectorField& x, const VectorField& y) {
  check_chart(chart, x);
  check_chart(chart, y);
  VectorField r(chart.dim());
  for (const auto& [px, xs] : homogeneous_parts(chart, x))
    for (const auto& [py, ys] : homogeneous_parts(chart, y))
      for (std::size_t k = 0; k < chart.dim(); ++k) {
        GradedExpr term = apply(chart, xs, ys[k]) - GradedExpr(koszul(px, py)) * apply(chart, ys, xs[k]);
        r.c[k] += term;
      }
  return r;
}

using Matrix = std::vector<std::vector<GradedExpr>>;

inline Matrix identity_matrix(std::size_t n) {
  Matrix m(n, std::vector<GradedExpr>(n));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = GradedExpr(1);
  return m;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  std::size_t n = a.size();
  Matrix r(n, std::vector<GradedExpr>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (!b[k][j].is_zero()) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

/// E with E * G = I, by Gauss-Jordan elimination with left row operations.
/// Pivots must be even with a nonzero body; rows are swapped as needed.
inline Matrix left_inverse(const Matrix& g) {
  std::size_t n = g.size();
  Matrix a = g;
  Matrix e = identity_matrix(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t r = k;
    while (r < n && !(a[r][k].has_parity(Parity::even) && !a[r][k].body().is_zero())) ++r;
    if (r == n) throw Error("metric is degenerate (no invertible pivot in column " + std::to_string(k) + ")");
    std::swap(a[r], a[k]);
    std::swap(e[r], e[k]);
    GradedExpr inv = a[k][k].inverse();
    for (std::size_t j = 0; j < n; ++j) {
      a[k][j] = inv * a[k][j];
      e[k][j] = inv * e[k][j];
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a[i][k].is_zero()) continue;
      GradedExpr f = a[i][k];
      for (std::size_t j = 0; j < n; ++j) {
        if (!a[k][j].is_zero()) a[i][j] -= f * a[k][j];
        if (!e[k][j].is_zero()) e[i][j] -= f * e[k][j];
      }
    }
  }
  return e;
}

class Metric {
 public:
  Metric() = default;

  /// Validates homogeneity, graded symmetry and non-degeneracy.
  Metric(Chart chart, Parity degree, Matrix g) : chart_(std::move(chart)), degree_(degree), g_(std::move(g)) {
    std::size_t n = chart_.dim();
    if (g_.size() != n) throw Error("metric table has wrong size");
    for (const auto& row : g_)
      if (row.size() != n) throw Error("metric table has wrong size");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const std::string where = "g[" + chart_[i].name + "," + chart_[j].name + "]";
        if (!g_[i][j].has_parity(chart_.parity(i) + chart_.parity(j) + degree_))
          throw Error("metric entry " + where + " has the wrong parity");
        GradedExpr sym = g_[i][j] - GradedExpr(koszul(chart_.parity(i), chart_.parity(j))) * g_[j][i];
        if (!sym.is_zero()) throw Error("metric entry " + where + " violates graded symmetry");
      }
    inv_ = left_inverse(g_);
  }

  const Chart& chart() const { return chart_; }
  Parity degree() const { return degree_; }
  const Matrix& table() const { return g_; }
  const GradedExpr& operator()(std::size_t i, std::size_t j) const { return g_.at(i).at(j); }
  /// Inverse table; sum_J g_IJ ginv_JK = delta_IK.
  const Matrix& inverse() const { return inv_; }

  void require_even(const char* what) const {
    if (is_odd(degree_)) throw Error(std::string("unsupported degree: ") + what + " requires an even metric");
  }

 private:
  Chart chart_;
  Parity degree_ = Parity::even;
  Matrix g_;
  Matrix inv_;
};

/// <X, Y>_g = sum X^I twist(Y^J, |d_I|) g_IJ.
inline GradedExpr pair(const Metric& g, const VectorField& x, const VectorField& y) {
  const Chart& chart = g.chart();
  check_chart(chart, x);
  check_chart(chart, y);
  GradedExpr r;
  for (std::size_t i = 0; i < chart.dim(); ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < chart.dim(); ++j) {
      if (y[j].is_zero() || g(i, j).is_zero()) continue;
      r += x[i] * y[j].twist(chart.parity(i)) * g(i, j);
    }
  }
  return r;
}

/// The unique field with X(f) = (-1)^{|f||g|} <X, grad f> for all X.
inline VectorField gradient(const Metric& g, const GradedExpr& f) {
  g.require_even("gradient");
  const Chart& chart = g.chart();
  VectorField r(chart.dim());
  for (Parity pf : {Parity::even, Parity::odd}) {
    GradedExpr part = f.part(pf);
    if (part.is_zero()) continue;
    for (std::size_t j = 0; j < chart.dim(); ++j) {
      GradedExpr s;
      for (std::size_t k = 0; k < chart.dim(); ++k)
        if (!g.inverse()[j][k].is_zero()) s += g.inverse()[j][k] * part.derive(chart.id(k));
      bool negative = is_odd(chart.parity(j)) && !is_odd(pf);
      r.c[j] += negative ? -s : s;
    }
  }
  return r;
}

}  // namespace sgeo
