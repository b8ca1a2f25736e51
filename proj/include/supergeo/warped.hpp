#pragma once
// Super warped products M x_mu N with g_mu = g1 + h^2 g2 (|h| = 0), and the
// closed forms of their connections, curvature and Ricci tensors in terms of
// the factors. The closed forms take lifted fields (from one factor only).

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "supergeo/curvature.hpp"
#include "supergeo/numeric.hpp"

namespace sgeo {

enum class Slot { base, fiber };

inline const char* slot_letter(Slot s) { return s == Slot::base ? "B" : "F"; }

struct WarpedProduct {
  Metric base;
  Metric fiber;
  GradedExpr h;
  Chart chart;
  Metric g_mu;

  std::size_t base_dim() const { return base.chart().dim(); }
  Slot slot(std::size_t i) const { return i < base_dim() ? Slot::base : Slot::fiber; }
  const Metric& factor(Slot s) const { return s == Slot::base ? base : fiber; }

  VectorField lift(const VectorField& v, Slot s) const {
    VectorField out(chart.dim());
    std::size_t off = s == Slot::base ? 0 : base_dim();
    for (std::size_t i = 0; i < v.size(); ++i) out[off + i] = v[i];
    return out;
  }

  VectorField restrict(const VectorField& v, Slot s) const {
    std::size_t off = s == Slot::base ? 0 : base_dim();
    VectorField out(factor(s).chart().dim());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = v[off + i];
    return out;
  }
};

namespace warped_detail {

inline bool has_parameters(const GradedExpr& e) {
  for (AtomId id : atoms_of(e))
    if (atom_kind(id) == AtomKind::parameter) return true;
  return false;
}

/// Without parameters h must be positive at every sample. With parameters,
/// positivity constrains them, so one positive sample shows the constraint
/// can be met.
inline void check_positive(const GradedExpr& h, std::mt19937_64& rng, const SampleOptions& opts) {
  bool parametric = has_parameters(h);
  int needed = parametric ? 1 : opts.samples;
  int accepted = 0;
  for (int attempt = 0; accepted < needed; ++attempt) {
    if (attempt >= opts.max_attempts)
      throw Error("warping function " + h.to_string() + " is not positive at any sampled point");
    SamplePoint pt(rng);
    double v = 0;
    try {
      v = evaluate_body(h, pt);
    } catch (const RejectSample&) {
      continue;
    }
    if (v > 0) {
      ++accepted;
    } else if (!parametric) {
      throw Error("warping function " + h.to_string() + " is not positive at " + pt.describe());
    }
  }
}

}  // namespace warped_detail

inline WarpedProduct build(const Metric& base, const Metric& fiber, const GradedExpr& h, std::mt19937_64& rng,
                           const SampleOptions& opts = {}, std::string name = "") {
  const Chart& b = base.chart();
  const Chart& f = fiber.chart();
  for (const auto& c : f.coords())
    if (b.index(c.name) || b.index(c.id)) throw Error("name collision: coordinate '" + c.name + "' is in both factors");
  if (base.degree() != fiber.degree()) throw Error("base and fiber metrics must have the same degree");
  if (!h.has_parity(Parity::even) || h.is_zero()) throw Error("warping function must be even and nonzero");
  for (AtomId id : atoms_of(h)) {
    auto k = atom_kind(id);
    if ((k == AtomKind::even_coordinate || k == AtomKind::odd_coordinate) && !b.index(id))
      throw Error("warping function must depend on base coordinates only (found " + atom_string(id) + ")");
  }
  warped_detail::check_positive(h, rng, opts);

  WarpedProduct wp;
  wp.base = base;
  wp.fiber = fiber;
  wp.h = h;
  wp.chart = Chart::product(name.empty() ? b.name() + "x" + f.name() : name, b, f);
  std::size_t nb = b.dim(), n = nb + f.dim();
  Matrix g(n, std::vector<GradedExpr>(n));
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j) g[i][j] = base(i, j);
  GradedExpr mu = h * h;
  for (std::size_t i = 0; i < f.dim(); ++i)
    for (std::size_t j = 0; j < f.dim(); ++j)
      if (!fiber(i, j).is_zero()) g[nb + i][nb + j] = mu * fiber(i, j);
  wp.g_mu = Metric(wp.chart, base.degree(), g);
  return wp;
}

/// Closed-form connection, curvature and Ricci tensor of a warped product
/// for the Levi-Civita connection or the semi-symmetric connection of a
/// lifted torsion vector P.
class ClosedForms {
 public:
  ClosedForms(const WarpedProduct& wp, ConnectionKind kind, const std::optional<VectorField>& p = std::nullopt)
      : wp_(wp), kind_(kind) {
    wp.g_mu.require_even("warped closed forms");
    base_lc_ = levi_civita(wp.base);
    fiber_lc_ = levi_civita(wp.fiber);
    grad_h_ = wp.lift(gradient(wp.base, wp.h), Slot::base);
    grad_h_h_ = apply(wp.chart, grad_h_, wp.h);
    h_inv_ = wp.h.inverse();
    if (kind == ConnectionKind::semi_symmetric) {
      if (!p) throw Error("semi-symmetric closed forms need a torsion vector P");
      connection_detail::check_torsion_vector(wp.g_mu, *p);
      p_ = *p;
      if (!p->is_zero()) p_slot_ = slot_of(*p);
    } else {
      p_ = VectorField(wp.chart.dim());
    }
    if (p_slot_ == Slot::base) base_conn_ = semi_symmetric(wp.base, wp.restrict(p_, Slot::base));
  }

  ConnectionKind kind() const { return kind_; }
  /// Location of P; nullopt when P = 0 or the connection is Levi-Civita.
  std::optional<Slot> p_slot() const { return p_slot_; }

  /// Which factor a lifted field comes from. Zero counts as base.
  Slot slot_of(const VectorField& x) const {
    bool in_base = false, in_fiber = false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!x[i].is_zero()) (wp_.slot(i) == Slot::base ? in_base : in_fiber) = true;
    if (in_base && in_fiber) throw Error("unsupported: closed forms need a field lifted from one factor");
    Slot s = in_fiber ? Slot::fiber : Slot::base;
    const Chart& other = wp_.factor(s == Slot::base ? Slot::fiber : Slot::base).chart();
    for (const auto& comp : x.c)
      for (AtomId id : atoms_of(comp))
        if (other.index(id))
          throw Error("unsupported: field coefficients depend on the other factor (" + atom_string(id) + ")");
    return s;
  }

  VectorField connection(const VectorField& x, const VectorField& y) const {
    Slot sx = slot_of(x), sy = slot_of(y);
    Parity px = parity(x), py = parity(y);
    if (!p_slot_) return lc(x, y, sx, sy, px, py);
    if (*p_slot_ == Slot::base) {
      switch (pattern(sx, sy)) {
        case 0: return nabla_base(base_conn_, x, y);
        case 1: return (xh(x) * h_inv_) * y;
        case 2: return sg(koszul(px, py)) * ((xh(y) * h_inv_ + pi(y)) * x);
        default: return fiber_fiber(x, y) - gmu(x, y) * p_;
      }
    }
    switch (pattern(sx, sy)) {
      case 0: return nabla_base(base_lc_, x, y) - g1(x, y) * p_;
      case 1: return (xh(x) * h_inv_) * y + dot(x, gmu(y, p_));
      case 2: return sg(koszul(px, py)) * ((xh(y) * h_inv_) * x);
      default: return fiber_fiber(x, y) + dot(x, gmu(y, p_)) - gmu(x, y) * p_;
    }
  }

  VectorField curvature(const VectorField& x, const VectorField& y, const VectorField& z) const {
    Slot sx = slot_of(x), sy = slot_of(y), sz = slot_of(z);
    // (B,F,B) and (F,B,F) follow from the other orders by graded antisymmetry
    if (sx != sy && sz == sx) return -(sg(koszul(parity(x), parity(y))) * curvature(y, x, z));
    if (!p_slot_) return curvature_lc(x, y, z, sx, sy, sz);
    if (*p_slot_ == Slot::base) return curvature_p_base(x, y, z, sx, sy, sz);
    return curvature_p_fiber(x, y, z, sx, sy, sz);
  }

  RicciTable ricci() const;

  /// H(X,Y) = X(Y(h)) - (nabla^{L,M}_X Y)(h).
  GradedExpr hessian(const VectorField& x, const VectorField& y) const {
    return apply(wp_.chart, x, xh(y)) - xh(nabla_base(base_lc_, x, y));
  }

  const Connection& base_connection() const { return p_slot_ == Slot::base ? base_conn_ : base_lc_; }
  const Connection& fiber_lc() const { return fiber_lc_; }
  const VectorField& grad_h() const { return grad_h_; }

 private:
  static GradedExpr sg(int s) { return GradedExpr(s); }
  static int pattern(Slot a, Slot b) {
    if (a == Slot::base) return b == Slot::base ? 0 : 1;
    return b == Slot::base ? 2 : 3;
  }

  Parity parity(const VectorField& x) const {
    auto p = field_parity(wp_.chart, x);
    if (!p) throw Error("unsupported: closed forms need homogeneous fields");
    return *p;
  }

  GradedExpr xh(const VectorField& x) const { return apply(wp_.chart, x, wp_.h); }
  GradedExpr g1(const VectorField& x, const VectorField& y) const {
    return pair(wp_.base, wp_.restrict(x, Slot::base), wp_.restrict(y, Slot::base));
  }
  GradedExpr g2(const VectorField& x, const VectorField& y) const {
    return pair(wp_.fiber, wp_.restrict(x, Slot::fiber), wp_.restrict(y, Slot::fiber));
  }
  GradedExpr gmu(const VectorField& x, const VectorField& y) const { return pair(wp_.g_mu, x, y); }
  GradedExpr pi(const VectorField& x) const { return gmu(x, p_); }

  /// X . f = (-1)^{|X||f|} f X.
  VectorField dot(const VectorField& x, const GradedExpr& f) const {
    if (f.is_zero()) return VectorField(x.size());
    auto pf = f.parity();
    if (!pf) throw Error("unsupported: inhomogeneous scalar");
    return sg(koszul(parity(x), *pf)) * (f * x);
  }

  VectorField nabla_base(const Connection& c, const VectorField& x, const VectorField& y) const {
    return wp_.lift(covariant_derivative(c, wp_.restrict(x, Slot::base), wp_.restrict(y, Slot::base)), Slot::base);
  }
  VectorField nabla_fiber(const VectorField& x, const VectorField& y) const {
    return wp_.lift(covariant_derivative(fiber_lc_, wp_.restrict(x, Slot::fiber), wp_.restrict(y, Slot::fiber)),
                    Slot::fiber);
  }

  /// -h g2(U,W) grad h + nabla^{L,N}_U W
  VectorField fiber_fiber(const VectorField& u, const VectorField& w) const {
    return nabla_fiber(u, w) - (wp_.h * g2(u, w)) * grad_h_;
  }

  VectorField lc(const VectorField& x, const VectorField& y, Slot sx, Slot sy, Parity px, Parity py) const {
    switch (pattern(sx, sy)) {
      case 0: return nabla_base(base_lc_, x, y);
      case 1: return (xh(x) * h_inv_) * y;
      case 2: return sg(koszul(px, py)) * ((xh(y) * h_inv_) * x);
      default: return fiber_fiber(x, y);
    }
  }

  VectorField riemann_base(const Connection& c, const VectorField& x, const VectorField& y, const VectorField& z) const {
    return wp_.lift(riemann(c, wp_.restrict(x, Slot::base), wp_.restrict(y, Slot::base), wp_.restrict(z, Slot::base)),
                    Slot::base);
  }
  VectorField riemann_fiber(const VectorField& x, const VectorField& y, const VectorField& z) const {
    return wp_.lift(
        riemann(fiber_lc_, wp_.restrict(x, Slot::fiber), wp_.restrict(y, Slot::fiber), wp_.restrict(z, Slot::fiber)),
        Slot::fiber);
  }

  VectorField curvature_lc(const VectorField& x, const VectorField& y, const VectorField& z, Slot sx, Slot sy,
                           Slot sz) const {
    std::size_t n = wp_.chart.dim();
    Parity px = parity(x), py = parity(y), pz = parity(z);
    Parity pg = wp_.g_mu.degree();
    if (sx == Slot::base && sy == Slot::base) {
      if (sz == Slot::fiber) return VectorField(n);
      return riemann_base(base_lc_, x, y, z);
    }
    if (sx == Slot::fiber && sy == Slot::fiber) {
      if (sz == Slot::base) return VectorField(n);
      // (V,W,U)
      VectorField r = riemann_fiber(x, y, z);
      r -= sg(koszul(px, py + pz)) * ((g2(y, z) * grad_h_h_) * x);
      r += sg(koszul(py, pz)) * ((g2(x, z) * grad_h_h_) * y);
      return r;
    }
    if (sx == Slot::fiber) {  // (V,X,Y)
      return -(sg(koszul(px, py + pz)) * ((hessian(y, z) * h_inv_) * x));
    }
    // (X,V,W)
    return -(sg(koszul(px, py + pz + pg)) * ((gmu(y, z) * h_inv_) * nabla_base(base_lc_, x, grad_h_)));
  }

  VectorField curvature_p_base(const VectorField& x, const VectorField& y, const VectorField& z, Slot sx, Slot sy,
                               Slot sz) const {
    std::size_t n = wp_.chart.dim();
    Parity px = parity(x), py = parity(y), pz = parity(z);
    GradedExpr ph = xh(p_) * h_inv_;
    if (sx == Slot::base && sy == Slot::base) {
      if (sz == Slot::fiber) return VectorField(n);
      return riemann_base(base_conn_, x, y, z);
    }
    if (sx == Slot::fiber && sy == Slot::fiber) {
      if (sz == Slot::base) return VectorField(n);
      // (U,V,W), |g| = |P| = 0
      GradedExpr k = grad_h_h_ * h_inv_ * h_inv_ + GradedExpr(2) * ph + pi(p_);
      VectorField frame = sg(koszul(py, pz)) * (gmu(x, z) * y) - sg(koszul(px, py + pz)) * (gmu(y, z) * x);
      return riemann_fiber(x, y, z) + k * frame;
    }
    if (sx == Slot::fiber) {  // (V,X,Y)
      GradedExpr k = hessian(y, z) * h_inv_;
      k += sg(koszul(py, pz)) * g1(z, nabla_base(base_lc_, y, p_));
      k += g1(y, z) * ph;
      k += g1(y, z) * pi(p_);
      k -= pi(y) * pi(z);
      return -(sg(koszul(px, py + pz)) * (k * x));
    }
    // (X,V,W), |g| = |P| = 0
    VectorField k = h_inv_ * nabla_base(base_lc_, x, grad_h_);
    k += ph * x;
    k += nabla_base(base_lc_, x, p_);
    k += dot(x, g1(p_, p_));
    k -= pi(x) * p_;
    return -(sg(koszul(px, py + pz)) * (gmu(y, z) * k));
  }

  VectorField curvature_p_fiber(const VectorField& x, const VectorField& y, const VectorField& z, Slot sx, Slot sy,
                                Slot sz) const {
    Parity px = parity(x), py = parity(y), pz = parity(z);
    GradedExpr pp = pi(p_);
    auto nfp = [&](const VectorField& v) { return nabla_fiber(v, p_); };
    if (sx == Slot::base && sy == Slot::base) {
      if (sz == Slot::fiber) {  // (X,Y,V)
        VectorField b = (xh(x) * h_inv_) * y - sg(koszul(px, py)) * ((xh(y) * h_inv_) * x);
        return sg(koszul(px + py, pz)) * (pi(z) * b);
      }
      // (X,Y,Z)
      VectorField r = riemann_base(base_lc_, x, y, z);
      r += sg(koszul(px, py)) * ((xh(y) * h_inv_ * gmu(x, z)) * p_);
      r -= (xh(x) * h_inv_ * gmu(y, z)) * p_;
      r -= sg(koszul(px, py + pz)) * ((gmu(y, z) * pp) * x);
      r += sg(koszul(py, pz)) * ((gmu(x, z) * pp) * y);
      return r;
    }
    if (sx == Slot::fiber && sy == Slot::fiber) {
      if (sz == Slot::base) {  // (V,W,X)
        const VectorField &v = x, &w = y, &xx = z;
        Parity pv = px, pw = py, pxx = pz;
        VectorField r = -(sg(koszul(pxx, pw)) * ((wp_.h * g2(v, p_) * g1(xx, grad_h_)) * w));
        r += sg(koszul(pv, pw) * koszul(pxx, pv)) * ((wp_.h * g2(w, p_) * g1(xx, grad_h_)) * v);
        return r;
      }
      // (U,V,W)
      const VectorField &u = x, &v = y, &w = z;
      Parity pu = px, pv = py, pw = pz;
      VectorField r = riemann_fiber(u, v, w);
      r -= sg(koszul(pu, pv + pw)) * ((g2(v, w) * grad_h_h_) * u);
      r += sg(koszul(pv, pw)) * ((g2(u, w) * grad_h_h_) * v);
      r += sg(koszul(pu + pv, pw)) * (gmu(w, nfp(u)) * v - sg(koszul(pu, pv)) * (gmu(w, nfp(v)) * u));
      r += sg(koszul(pu, pv) * koszul(pu + pw, pv)) * (gmu(u, w) * (nfp(v) - (wp_.h * g2(v, p_)) * grad_h_));
      r -= sg(koszul(pv + pw, pu)) * (gmu(v, w) * (nfp(u) - (wp_.h * g2(u, p_)) * grad_h_));
      r -= sg(koszul(pu, pv + pw)) * ((gmu(v, w) * pp) * u);
      r += sg(koszul(pv, pw)) * ((gmu(u, w) * pp) * v);
      r += sg(koszul(pu, pv + pw)) * ((gmu(v, w) * pi(u)) * p_);
      r -= sg(koszul(pu, pv) * koszul(pu + pw, pv)) * ((gmu(u, w) * pi(v)) * p_);
      r += sg(koszul(pu + pv, pw)) * (pi(w) * (sg(koszul(pu, pv)) * (pi(v) * u) - pi(u) * v));
      return r;
    }
    if (sx == Slot::fiber) {  // (V,X,Y)
      const VectorField &v = x, &xx = y, &yy = z;
      Parity pv = px, pxx = py, pyy = pz;
      int s_gv = koszul(pxx + pyy, pv);
      VectorField r = -(sg(koszul(pv, pxx + pyy)) * ((hessian(xx, yy) * h_inv_) * v));
      r -= sg(koszul(pxx, pyy)) * ((wp_.h * g2(v, p_) * g1(yy, grad_h_)) * xx);
      r -= sg(s_gv) * (g1(xx, yy) * (nfp(v) - (wp_.h * g2(v, p_)) * grad_h_));
      r -= sg(koszul(pv, pxx + pyy)) * ((g1(xx, yy) * pp) * v);
      r += sg(s_gv) * ((g1(xx, yy) * pi(v)) * p_);
      return r;
    }
    // (X,V,W)
    const VectorField &xx = x, &v = y, &w = z;
    Parity pxx = px, pv = py, pw = pz;
    VectorField r = -(sg(koszul(pxx, pv + pw)) * ((gmu(v, w) * h_inv_) * nabla_base(base_lc_, xx, grad_h_)));
    VectorField inner = sg(koszul(pxx, pw)) * ((xh(xx) * h_inv_ * gmu(w, p_)) * v) -
                        sg(koszul(pxx, pv)) * (gmu(w, nfp(v)) * xx);
    r += sg(koszul(pxx + pv, pw)) * inner;
    r -= sg(koszul(pv + pw, pxx)) * ((gmu(v, w) * xh(xx) * h_inv_) * p_);
    r -= sg(koszul(pxx, pv + pw)) * ((gmu(v, w) * pp) * xx);
    r += sg(koszul(pxx + pv, pw) * koszul(pxx, pv)) * ((pi(w) * pi(v)) * xx);
    return r;
  }

  const WarpedProduct& wp_;
  ConnectionKind kind_;
  VectorField p_;
  std::optional<Slot> p_slot_;
  Connection base_lc_, fiber_lc_, base_conn_;
  VectorField grad_h_;
  GradedExpr grad_h_h_, h_inv_;
};

/// Base block and fiber bracket of the closed-form Ricci tensor with P in the
/// base (or P = 0). The fiber block is Ric^{L,N} - g_mu * fiber_bracket.
/// `d` stands for q - n and may be a symbolic parameter.
struct RicciBlocks {
  Matrix base;
  GradedExpr fiber_bracket;
};

inline RicciBlocks ricci_blocks(const Metric& base, const GradedExpr& h, ConnectionKind kind,
                                const std::optional<VectorField>& p, const GradedExpr& d) {
  base.require_even("warped Ricci closed form");
  const Chart& chart = base.chart();
  std::size_t n = chart.dim();
  auto [pe, po] = chart.dimension();
  GradedExpr e(pe - po);
  Connection lc = levi_civita(base);
  VectorField grad = gradient(base, h);
  GradedExpr h_inv = h.inverse();
  GradedExpr grad_h_h = apply(chart, grad, h);
  auto basis = [&](std::size_t i) { return VectorField::basis(chart, i); };
  auto hess = [&](std::size_t i, std::size_t k) {
    return apply(chart, basis(i), h.derive(chart.id(k))) - apply(chart, lc.gamma[i][k], h);
  };
  RicciBlocks out;
  out.base = Matrix(n, std::vector<GradedExpr>(n));
  out.fiber_bracket = laplacian(base, h) * h_inv + (d - GradedExpr(1)) * grad_h_h * h_inv * h_inv;

  bool ssm = kind == ConnectionKind::semi_symmetric;
  VectorField pv = p.value_or(VectorField(n));
  if (ssm) connection_detail::check_torsion_vector(base, pv);
  Connection conn = ssm ? semi_symmetric(base, pv) : lc;
  RicciTable ric = ricci(conn);
  GradedExpr ph = apply(chart, pv, h) * h_inv;
  GradedExpr pp = pair(base, pv, pv);
  auto pi = torsion_form(base, pv);
  std::vector<VectorField> nabla_p;
  for (std::size_t i = 0; i < n; ++i) nabla_p.push_back(covariant_derivative(lc, basis(i), pv));
  GradedExpr half(mpq_class(1, 2));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      GradedExpr br = hess(i, k) * h_inv;
      if (ssm) {
        br += half * GradedExpr(koszul(chart.parity(i), chart.parity(k))) * pair(base, basis(k), nabla_p[i]);
        br += half * pair(base, basis(i), nabla_p[k]);
        br += base(i, k) * ph;
        br += base(i, k) * pp;
        br -= pi[i] * pi[k];
      }
      out.base[i][k] = ric[i][k] - d * br;
    }
  if (ssm) {
    out.fiber_bracket += divergence(lc, pv);
    out.fiber_bracket += (GradedExpr(2) * d + e - GradedExpr(2)) * ph;
    out.fiber_bracket += (d + e - GradedExpr(2)) * pp;
  }
  return out;
}

inline RicciTable ClosedForms::ricci() const {
  if (p_slot_ == Slot::fiber) throw Error("unsupported: no closed-form Ricci tensor for P in the fiber");
  auto [q, nn] = wp_.fiber.chart().dimension();
  std::optional<VectorField> pb;
  if (kind_ == ConnectionKind::semi_symmetric) pb = wp_.restrict(p_, Slot::base);
  RicciBlocks blocks = ricci_blocks(wp_.base, wp_.h, kind_, pb, GradedExpr(q - nn));
  RicciTable fiber_ric = sgeo::ricci(fiber_lc_);
  std::size_t nb = wp_.base_dim(), n = wp_.chart.dim();
  RicciTable out(n, std::vector<GradedExpr>(n));
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t k = 0; k < nb; ++k) out[i][k] = blocks.base[i][k];
  for (std::size_t i = nb; i < n; ++i)
    for (std::size_t k = nb; k < n; ++k) out[i][k] = fiber_ric[i - nb][k - nb] - wp_.g_mu(i, k) * blocks.fiber_bracket;
  return out;
}

inline VectorField closed_form_lc(const WarpedProduct& wp, const VectorField& x, const VectorField& y) {
  return ClosedForms(wp, ConnectionKind::levi_civita).connection(x, y);
}

inline VectorField closed_form_ssm(const WarpedProduct& wp, const VectorField& p, const VectorField& x,
                                   const VectorField& y) {
  return ClosedForms(wp, ConnectionKind::semi_symmetric, p).connection(x, y);
}

inline VectorField closed_form_curvature(const WarpedProduct& wp, ConnectionKind kind, const std::optional<VectorField>& p,
                                         const VectorField& x, const VectorField& y, const VectorField& z) {
  return ClosedForms(wp, kind, p).curvature(x, y, z);
}

inline RicciTable closed_form_ricci(const WarpedProduct& wp, ConnectionKind kind, const std::optional<VectorField>& p) {
  return ClosedForms(wp, kind, p).ricci();
}

/// One closed form checked against direct computation on the product chart,
/// over every coordinate combination with the same slot pattern.
struct CaseResult {
  std::string label;
  ZeroTest test;
  std::size_t entries = 0;
  std::string detail;  // first nonzero residual, if any
};

inline std::vector<CaseResult> verify_closed_forms(const WarpedProduct& wp, ConnectionKind kind,
                                                   const std::optional<VectorField>& p, std::mt19937_64& rng,
                                                   const SampleOptions& opts = {}) {
  ClosedForms cf(wp, kind, p);
  const Chart& chart = wp.chart;
  std::size_t n = chart.dim();
  Connection direct = kind == ConnectionKind::levi_civita ? levi_civita(wp.g_mu) : semi_symmetric(wp.g_mu, *p);
  std::string prefix = connection_name(kind);
  if (cf.p_slot()) prefix += *cf.p_slot() == Slot::base ? "[P in base]" : "[P in fiber]";

  std::map<std::string, std::pair<std::vector<GradedExpr>, std::string>> cases;
  std::vector<std::string> order;
  auto record = [&](const std::string& label, const std::string& where, const VectorField& diff) {
    auto [it, fresh] = cases.try_emplace(label);
    if (fresh) order.push_back(label);
    for (const auto& c : diff.c) {
      if (!c.is_zero() && it->second.second.empty()) it->second.second = where + ": " + c.to_string();
      it->second.first.push_back(c);
    }
  };
  auto name = [&](std::size_t i) { return chart[i].name; };
  auto e = [&](std::size_t i) { return VectorField::basis(chart, i); };

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::string label = prefix + " nabla(" + slot_letter(wp.slot(i)) + "," + slot_letter(wp.slot(j)) + ")";
      record(label, "[" + name(i) + "," + name(j) + "]", cf.connection(e(i), e(j)) - direct.gamma[i][j]);
    }
  RiemannTable r = riemann_table(direct);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        std::string label = prefix + " R(" + slot_letter(wp.slot(i)) + "," + slot_letter(wp.slot(j)) + "," +
                            slot_letter(wp.slot(k)) + ")";
        record(label, "[" + name(i) + "," + name(j) + "," + name(k) + "]", cf.curvature(e(i), e(j), e(k)) - r[i][j][k]);
      }
  if (cf.p_slot() != Slot::fiber) {
    RicciTable direct_ric = ricci(direct, r);
    RicciTable closed = cf.ricci();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::string label = prefix + " Ric(" + slot_letter(wp.slot(i)) + "," + slot_letter(wp.slot(j)) + ")";
        VectorField d(1);
        d[0] = closed[i][j] - direct_ric[i][j];
        record(label, "[" + name(i) + "," + name(j) + "]", d);
      }
  }

  std::vector<CaseResult> out;
  for (const auto& label : order) {
    auto& [res, detail] = cases[label];
    CaseResult c;
    c.label = label;
    c.entries = res.size();
    c.test = is_zero(res, rng, opts);
    if (c.test.certainty != Certainty::symbolic) c.detail = detail;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace sgeo
