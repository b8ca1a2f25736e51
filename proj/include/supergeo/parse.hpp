#pragma once
// Symbol scopes and the expression parser.
//
//   expr   := term (("+"|"-") term)*
//   term   := unary (("*"|"/") unary)*
//   unary  := "-" unary | factor
//   factor := base ("^" "-"? integer)?
//   base   := number | ident | ident "'"* "(" ident ")"
//           | ("exp"|"sin"|"cos") "(" expr ")" | "(" expr ")"

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "supergeo/expr.hpp"

namespace sgeo {

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : Error("syntax error at position " + std::to_string(pos) + ": " + what), position(pos) {}
  std::size_t position;
};

inline bool is_reserved_name(const std::string& n) { return n == "exp" || n == "sin" || n == "cos"; }

inline bool is_identifier(const std::string& n) {
  if (n.empty() || !(std::isalpha(static_cast<unsigned char>(n[0])) || n[0] == '_')) return false;
  for (char c : n)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return !is_reserved_name(n);
}

/// Maps names to atoms. Coordinates and parameters are always fresh atoms,
/// so two scopes never share them; function symbols are shared by name.
class Scope {
 public:
  AtomId declare_coordinate(const std::string& name, Parity p) {
    check_new(name);
    AtomId id = AtomTable::global().fresh(is_odd(p) ? AtomKind::odd_coordinate : AtomKind::even_coordinate, name);
    names_.emplace(name, id);
    return id;
  }

  AtomId declare_parameter(const std::string& name) {
    check_new(name);
    AtomId id = AtomTable::global().fresh(AtomKind::parameter, name);
    names_.emplace(name, id);
    return id;
  }

  /// Declares a parameter s with s^2 = value. The value must be free of
  /// other root symbols and must not be a negative constant.
  AtomId declare_root(const std::string& name, const Coeff& value) {
    if (auto q = value.rational(); q && *q < 0)
      throw Error("relation " + name + "^2 = " + value.to_string() + " has no real solution");
    for (const Relation& r : RelationRegistry::global().all())
      if (value.num().contains(r.symbol) || value.den().contains(r.symbol))
        throw Error("relation for " + name + " refers to another root symbol");
    AtomId id = declare_parameter(name);
    RelationRegistry::global().add(Relation{id, value.num(), value.den()});
    return id;
  }

  /// Adds an existing atom under a name (used to share coordinates between scopes).
  void alias(const std::string& name, AtomId id) {
    check_new(name);
    names_.emplace(name, id);
  }

  std::optional<AtomId> lookup(const std::string& name) const {
    if (auto it = names_.find(name); it != names_.end()) return it->second;
    return std::nullopt;
  }

  AtomId require(const std::string& name) const {
    if (auto id = lookup(name)) return *id;
    throw Error("unknown symbol '" + name + "'");
  }

  /// Lenient scopes declare unknown identifiers as parameters on first use.
  bool lenient = false;

  AtomId resolve(const std::string& name) {
    if (auto id = lookup(name)) return *id;
    if (!lenient) throw Error("unknown symbol '" + name + "'");
    return declare_parameter(name);
  }

  const std::map<std::string, AtomId>& names() const { return names_; }

 private:
  void check_new(const std::string& name) const {
    if (!is_identifier(name)) throw Error("invalid symbol name '" + name + "'");
    if (names_.count(name)) throw Error("symbol '" + name + "' declared twice");
  }

  std::map<std::string, AtomId> names_;
};

namespace parse_detail {

class Parser {
 public:
  Parser(std::string_view text, Scope& scope) : s_(text), scope_(scope) {}

  GradedExpr parse_all() {
    GradedExpr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  GradedExpr expr() {
    GradedExpr e = term();
    while (true) {
      if (accept('+'))
        e += term();
      else if (accept('-'))
        e -= term();
      else
        return e;
    }
  }

  GradedExpr term() {
    GradedExpr e = unary();
    while (true) {
      if (accept('*')) {
        e = e * unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        GradedExpr d = unary();
        if (!d.has_parity(Parity::even) || d.body().is_zero()) {
          pos_ = at;
          fail("division by an expression that is not invertible");
        }
        e = e / d;
      } else {
        return e;
      }
    }
  }

  GradedExpr unary() {
    if (accept('-')) return -unary();
    return factor();
  }

  GradedExpr factor() {
    skip();
    std::size_t at = pos_;
    GradedExpr b = base();
    if (!accept('^')) return b;
    bool negative = accept('-');
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    long e = std::stol(std::string(s_.substr(start, pos_ - start)));
    if (!b.has_parity(Parity::even) && e >= 2) {
      pos_ = at;
      fail("odd symbol raised to a power of 2 or more");
    }
    if (negative) {
      if (!b.has_parity(Parity::even) || b.body().is_zero()) fail("negative power of a non-invertible expression");
      return b.inverse().pow(e);
    }
    return b.pow(e);
  }

  std::string identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  GradedExpr number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string digits(s_.substr(start, pos_ - start));
    std::string frac;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      std::size_t f = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      frac = std::string(s_.substr(f, pos_ - f));
    }
    if (digits.empty() && frac.empty()) fail("malformed number");
    mpz_class n(digits.empty() ? "0" : digits);
    mpz_class scale = 1;
    for (char c : frac) {
      n = n * 10 + (c - '0');
      scale *= 10;
    }
    mpq_class q(n, scale);
    q.canonicalize();
    return GradedExpr(q);
  }

  ArgPoly argument(const GradedExpr& e, const char* fn) {
    if (!e.is_scalar()) fail(std::string("argument of ") + fn + " must be even and free of odd symbols");
    Coeff c = e.body();
    if (!c.is_polynomial()) fail(std::string("argument of ") + fn + " must be a polynomial");
    auto a = to_arg(c.num());
    if (!a) fail(std::string("argument of ") + fn + " must involve only coordinates and parameters");
    return *a;
  }

  GradedExpr base() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      GradedExpr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) fail("unexpected '" + std::string(1, c) + "'");
    std::size_t at = pos_;
    std::string name = identifier();
    if (is_reserved_name(name)) {
      expect('(');
      GradedExpr inner = expr();
      expect(')');
      ArgPoly u = argument(inner, name.c_str());
      if (name == "exp") return GradedExpr(Coeff(u.empty() ? Poly(1) : Poly::exponential(u)));
      if (name == "sin") return GradedExpr(Coeff(sine_of(u)));
      return GradedExpr(Coeff(cosine_of(u)));
    }
    std::uint32_t primes = 0;
    while (pos_ < s_.size() && s_[pos_] == '\'') {
      ++primes;
      ++pos_;
    }
    std::size_t after = pos_;
    skip();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      skip();
      std::string arg = identifier();
      if (arg.empty()) fail("expected a coordinate name");
      expect(')');
      if (scope_.lookup(name) && atom_kind(*scope_.lookup(name)) != AtomKind::function_symbol) {
        pos_ = at;
        fail("'" + name + "' is not a function");
      }
      auto x = scope_.lookup(arg);
      if (!x || atom_kind(*x) != AtomKind::even_coordinate) {
        pos_ = at;
        fail("function argument '" + arg + "' is not an even coordinate");
      }
      AtomId fn = AtomTable::global().function_symbol(name);
      return GradedExpr::atom(AtomTable::global().function_value(fn, primes, *x));
    }
    pos_ = after;
    if (primes) fail("primes are only allowed on function applications");
    try {
      return GradedExpr::atom(scope_.resolve(name));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& err) {
      pos_ = at;
      fail(err.what());
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  Scope& scope_;
};

}  // namespace parse_detail

inline GradedExpr parse(std::string_view text, Scope& scope) {
  return parse_detail::Parser(text, scope).parse_all();
}

inline std::string to_string(const GradedExpr& e) { return e.to_string(); }

}  // namespace sgeo
