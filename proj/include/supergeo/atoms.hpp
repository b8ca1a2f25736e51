#pragma once
// Atoms: the indeterminates of the coefficient field (even coordinates,
// parameters, opaque function values, sine/cosine atoms) plus the odd
// coordinates that generate the exterior part of a graded expression.

#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace sgeo {

enum class Parity : std::uint8_t { even = 0, odd = 1 };

constexpr Parity operator+(Parity a, Parity b) {
  return static_cast<Parity>(static_cast<std::uint8_t>(a) ^ static_cast<std::uint8_t>(b));
}
constexpr Parity& operator+=(Parity& a, Parity b) { return a = a + b; }
constexpr bool is_odd(Parity p) { return p == Parity::odd; }
constexpr int bit(Parity p) { return static_cast<int>(p); }

/// (-1)^{|a||b|}
constexpr int koszul(Parity a, Parity b) { return (is_odd(a) && is_odd(b)) ? -1 : 1; }
constexpr int sign_if(bool negative) { return negative ? -1 : 1; }

inline const char* parity_name(Parity p) { return is_odd(p) ? "odd" : "even"; }

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using AtomId = std::uint32_t;

// Power product: sorted (atom, exponent) pairs, exponents > 0.
using PowerProduct = std::vector<std::pair<AtomId, std::uint32_t>>;

/// Lex comparison where the atom with the smaller id is most significant.
/// This is a monomial order, which exact division relies on.
inline int pp_compare(const PowerProduct& a, const PowerProduct& b) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first != b[j].first) return a[i].first < b[j].first ? 1 : -1;
    if (a[i].second != b[j].second) return a[i].second > b[j].second ? 1 : -1;
    ++i;
    ++j;
  }
  if (i < a.size()) return 1;
  if (j < b.size()) return -1;
  return 0;
}

inline PowerProduct pp_mul(const PowerProduct& a, const PowerProduct& b) {
  PowerProduct out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

inline bool pp_divides(const PowerProduct& d, const PowerProduct& n) {
  std::size_t j = 0;
  for (const auto& [atom, e] : d) {
    while (j < n.size() && n[j].first < atom) ++j;
    if (j == n.size() || n[j].first != atom || n[j].second < e) return false;
  }
  return true;
}

/// n / d, assuming pp_divides(d, n).
inline PowerProduct pp_div(const PowerProduct& n, const PowerProduct& d) {
  PowerProduct out;
  std::size_t j = 0;
  for (const auto& [atom, e] : n) {
    std::uint32_t sub = 0;
    if (j < d.size() && d[j].first == atom) sub = d[j++].second;
    if (e > sub) out.emplace_back(atom, e - sub);
  }
  return out;
}

inline std::uint32_t pp_degree(const PowerProduct& a, AtomId x) {
  for (const auto& [atom, e] : a)
    if (atom == x) return e;
  return 0;
}

inline PowerProduct pp_without(const PowerProduct& a, AtomId x) {
  PowerProduct out;
  for (const auto& f : a)
    if (f.first != x) out.push_back(f);
  return out;
}

inline PowerProduct pp_with(PowerProduct a, AtomId x, std::uint32_t e) {
  if (e == 0) return a;
  auto it = a.begin();
  while (it != a.end() && it->first < x) ++it;
  if (it != a.end() && it->first == x)
    it->second += e;
  else
    a.insert(it, {x, e});
  return a;
}

/// Polynomial in coordinates and parameters with rational coefficients.
/// Used as the argument of exp/sin/cos atoms, where it must stay free of
/// function values and transcendental atoms.
struct ArgPoly {
  std::vector<std::pair<PowerProduct, mpq_class>> terms;  // ascending, nonzero

  bool empty() const { return terms.empty(); }

  friend bool operator==(const ArgPoly& a, const ArgPoly& b) { return a.terms == b.terms; }

  static ArgPoly combine(const ArgPoly& a, const ArgPoly& b, int sign) {
    ArgPoly out;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.terms.size() || j < b.terms.size()) {
      int c = 0;
      if (i == a.terms.size())
        c = 1;
      else if (j == b.terms.size())
        c = -1;
      else
        c = pp_compare(a.terms[i].first, b.terms[j].first) < 0 ? -1
            : pp_compare(a.terms[i].first, b.terms[j].first) > 0 ? 1
                                                                  : 0;
      if (c < 0) {
        out.terms.push_back(a.terms[i++]);
      } else if (c > 0) {
        out.terms.emplace_back(b.terms[j].first, sign * b.terms[j].second);
        ++j;
      } else {
        mpq_class s = a.terms[i].second + sign * b.terms[j].second;
        if (s != 0) out.terms.emplace_back(a.terms[i].first, s);
        ++i;
        ++j;
      }
    }
    return out;
  }

  ArgPoly operator+(const ArgPoly& o) const { return combine(*this, o, 1); }
  ArgPoly operator-(const ArgPoly& o) const { return combine(*this, o, -1); }
  ArgPoly scaled(const mpq_class& k) const {
    ArgPoly out;
    if (k == 0) return out;
    out.terms = terms;
    for (auto& t : out.terms) t.second *= k;
    return out;
  }
  const mpq_class& leading_coefficient() const { return terms.back().second; }
};

/// Translation-invariant total order: compares the coefficient vectors
/// lexicographically, so cmp(a + w, b + w) == cmp(a, b).
inline int arg_compare(const ArgPoly& a, const ArgPoly& b) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.terms.size() || j < b.terms.size()) {
    int c = 0;
    if (i == a.terms.size())
      c = 1;
    else if (j == b.terms.size())
      c = -1;
    else
      c = pp_compare(a.terms[i].first, b.terms[j].first);
    if (c < 0) return a.terms[i].second < 0 ? -1 : 1;
    if (c > 0) return b.terms[j].second > 0 ? -1 : 1;
    if (a.terms[i].second != b.terms[j].second) return a.terms[i].second < b.terms[j].second ? -1 : 1;
    ++i;
    ++j;
  }
  return 0;
}

enum class AtomKind : std::uint8_t {
  even_coordinate,
  odd_coordinate,
  parameter,
  function_symbol,  // the name h itself; never appears in polynomials
  function_value,   // h^{(k)}(x)
  sine,
  cosine,
  lattice,  // scratch indeterminates used inside gcd computations
};

struct AtomInfo {
  AtomInfo() = default;
  AtomInfo(AtomKind k, std::string n) : kind(k), name(std::move(n)) {}

  AtomKind kind{};
  std::string name;
  AtomId base = 0;         // function_value: the function symbol
  std::uint32_t order = 0; // function_value: derivative order
  AtomId arg = 0;          // function_value: the even coordinate
  ArgPoly trig;            // sine/cosine argument
};

/// Process-wide append-only registry. Ids grow in creation order, which
/// fixes the ordering of odd coordinates in canonical forms.
class AtomTable {
 public:
  static AtomTable& global() {
    static AtomTable table;
    return table;
  }

  AtomId fresh(AtomKind kind, std::string name) {
    std::lock_guard lock(mutex_);
    return push(AtomInfo{kind, std::move(name)});
  }

  AtomId function_symbol(const std::string& name) {
    std::lock_guard lock(mutex_);
    if (auto it = functions_.find(name); it != functions_.end()) return it->second;
    AtomId id = push(AtomInfo{AtomKind::function_symbol, name});
    functions_.emplace(name, id);
    return id;
  }

  AtomId function_value(AtomId fn, std::uint32_t order, AtomId arg) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(fn, order, arg);
    if (auto it = values_.find(key); it != values_.end()) return it->second;
    AtomInfo info{AtomKind::function_value, atoms_.at(fn).name};
    info.base = fn;
    info.order = order;
    info.arg = arg;
    AtomId id = push(std::move(info));
    values_.emplace(key, id);
    return id;
  }

  AtomId trig(AtomKind kind, const ArgPoly& arg) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(kind, arg.terms);
    if (auto it = trigs_.find(key); it != trigs_.end()) return it->second;
    AtomInfo info{kind, kind == AtomKind::sine ? "sin" : "cos"};
    info.trig = arg;
    AtomId id = push(std::move(info));
    trigs_.emplace(std::move(key), id);
    return id;
  }

  AtomId lattice(std::size_t index) {
    std::lock_guard lock(mutex_);
    while (lattice_.size() <= index)
      lattice_.push_back(push(AtomInfo{AtomKind::lattice, "@" + std::to_string(lattice_.size())}));
    return lattice_[index];
  }

  const AtomInfo& info(AtomId id) const {
    std::lock_guard lock(mutex_);
    return atoms_.at(id);
  }

 private:
  AtomId push(AtomInfo info) {
    atoms_.push_back(std::move(info));
    return static_cast<AtomId>(atoms_.size() - 1);
  }

  mutable std::mutex mutex_;
  std::deque<AtomInfo> atoms_;
  std::map<std::string, AtomId> functions_;
  std::map<std::tuple<AtomId, std::uint32_t, AtomId>, AtomId> values_;
  std::map<std::pair<AtomKind, std::vector<std::pair<PowerProduct, mpq_class>>>, AtomId> trigs_;
  std::vector<AtomId> lattice_;
};

inline const AtomInfo& atom_info(AtomId id) { return AtomTable::global().info(id); }
inline AtomKind atom_kind(AtomId id) { return atom_info(id).kind; }

inline Parity atom_parity(AtomId id) {
  return atom_kind(id) == AtomKind::odd_coordinate ? Parity::odd : Parity::even;
}

inline bool is_coordinate(AtomId id) {
  auto k = atom_kind(id);
  return k == AtomKind::even_coordinate || k == AtomKind::odd_coordinate;
}

}  // namespace sgeo
