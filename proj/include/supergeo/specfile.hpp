#pragma once
// Line-oriented manifold spec files:
//
//   [chart]   name = M ; coords = t:even, xi:odd, eta:odd
//   [metric]  degree = even
//   g[t,t] = -1
//   g[xi,eta] = -1
//   g[eta,xi] = 1
//   [params]  c1, c2
//   [P]       P[t] = 1
//
// '#' starts a comment. Unlisted metric entries are 0.

#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "supergeo/manifold.hpp"

namespace sgeo {

class SpecError : public Error {
 public:
  SpecError(const std::string& source, int line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

struct ManifoldSpec {
  Scope scope;
  Chart chart;
  Metric metric;
  std::optional<VectorField> P;
  std::vector<std::string> params;
};

namespace spec_detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline Parity parse_parity(const std::string& s) {
  if (s == "even" || s == "0") return Parity::even;
  if (s == "odd" || s == "1") return Parity::odd;
  throw Error("expected 'even' or 'odd', got '" + s + "'");
}

struct Line {
  int number;
  std::string text;
};

/// "name[a,b] = value" -> (a, b, value)
inline std::optional<std::tuple<std::vector<std::string>, std::string>> indexed(const std::string& text,
                                                                                const std::string& name) {
  auto eq = text.find('=');
  if (eq == std::string::npos) return std::nullopt;
  std::string lhs = trim(text.substr(0, eq));
  if (lhs.size() < name.size() + 2 || lhs.compare(0, name.size(), name) != 0) return std::nullopt;
  std::string rest = trim(lhs.substr(name.size()));
  if (rest.size() < 2 || rest.front() != '[' || rest.back() != ']') return std::nullopt;
  return std::make_tuple(split(rest.substr(1, rest.size() - 2), ','), trim(text.substr(eq + 1)));
}

}  // namespace spec_detail

/// Parses "coord=expr, coord=expr" into a field on `chart`.
inline VectorField parse_field(const Chart& chart, Scope& scope, const std::string& text) {
  VectorField v(chart.dim());
  if (spec_detail::trim(text).empty()) return v;
  for (const std::string& item : spec_detail::split(text, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("expected coord=expr in field '" + text + "'");
    std::string name = spec_detail::trim(item.substr(0, eq));
    std::size_t i = chart.require(name);
    v[i] += parse(item.substr(eq + 1), scope);
  }
  return v;
}

inline ManifoldSpec read_spec(std::istream& in, const std::string& source = "<spec>") {
  using namespace spec_detail;
  std::map<std::string, std::vector<Line>> sections;
  std::string section;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string text = raw;
    if (auto hash = text.find('#'); hash != std::string::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    if (text[0] == '[') {
      auto close = text.find(']');
      if (close == std::string::npos) throw SpecError(source, number, "unterminated section header");
      std::string name = trim(text.substr(1, close - 1));
      if (name != "chart" && name != "metric" && name != "params" && name != "P")
        throw SpecError(source, number, "unknown section [" + name + "]");
      section = name;
      sections[section];
      text = trim(text.substr(close + 1));
      if (text.empty()) continue;
    }
    if (section.empty()) throw SpecError(source, number, "content outside of a section");
    sections[section].push_back({number, text});
  }

  ManifoldSpec spec;
  auto fail = [&](const Line& l, const std::string& what) { throw SpecError(source, l.number, what); };

  // chart
  if (!sections.count("chart")) throw SpecError(source, number, "missing [chart] section");
  std::string chart_name = "M";
  std::vector<std::pair<std::string, Parity>> coords;
  for (const Line& l : sections["chart"]) {
    for (const std::string& kv : split(l.text, ';')) {
      if (kv.empty()) continue;
      auto eq = kv.find('=');
      if (eq == std::string::npos) fail(l, "expected key = value in [chart]");
      std::string key = trim(kv.substr(0, eq));
      std::string value = trim(kv.substr(eq + 1));
      if (key == "name") {
        chart_name = value;
      } else if (key == "coords") {
        for (const std::string& c : split(value, ',')) {
          auto colon = c.find(':');
          if (colon == std::string::npos) fail(l, "coordinate '" + c + "' needs a parity (name:even or name:odd)");
          try {
            coords.emplace_back(trim(c.substr(0, colon)), parse_parity(trim(c.substr(colon + 1))));
          } catch (const Error& e) {
            fail(l, e.what());
          }
        }
      } else {
        fail(l, "unknown chart key '" + key + "'");
      }
    }
  }
  try {
    spec.chart = Chart::declare(spec.scope, chart_name, coords);
  } catch (const Error& e) {
    throw SpecError(source, sections["chart"].empty() ? number : sections["chart"].front().number, e.what());
  }

  for (const Line& l : sections["params"])
    for (const std::string& p : split(l.text, ',')) {
      if (p.empty()) continue;
      try {
        spec.scope.declare_parameter(p);
      } catch (const Error& e) {
        fail(l, e.what());
      }
      spec.params.push_back(p);
    }

  // metric
  if (!sections.count("metric")) throw SpecError(source, number, "missing [metric] section");
  Parity degree = Parity::even;
  std::size_t n = spec.chart.dim();
  Matrix g(n, std::vector<GradedExpr>(n));
  int metric_line = number;
  for (const Line& l : sections["metric"]) {
    metric_line = std::min(metric_line, l.number);
    try {
      if (auto e = indexed(l.text, "g")) {
        auto& [idx, value] = *e;
        if (idx.size() != 2) fail(l, "metric entries need two indices");
        g[spec.chart.require(idx[0])][spec.chart.require(idx[1])] = parse(value, spec.scope);
      } else if (auto eq = l.text.find('='); eq != std::string::npos && trim(l.text.substr(0, eq)) == "degree") {
        degree = parse_parity(trim(l.text.substr(eq + 1)));
      } else {
        fail(l, "expected 'degree = ...' or 'g[a,b] = expr'");
      }
    } catch (const SpecError&) {
      throw;
    } catch (const Error& e) {
      fail(l, e.what());
    }
  }
  try {
    spec.metric = Metric(spec.chart, degree, g);
  } catch (const Error& e) {
    throw SpecError(source, metric_line, e.what());
  }

  if (sections.count("P")) {
    VectorField p(n);
    for (const Line& l : sections["P"]) {
      try {
        auto e = indexed(l.text, "P");
        if (!e || std::get<0>(*e).size() != 1) fail(l, "expected 'P[coord] = expr'");
        p[spec.chart.require(std::get<0>(*e)[0])] += parse(std::get<1>(*e), spec.scope);
      } catch (const SpecError&) {
        throw;
      } catch (const Error& err) {
        fail(l, err.what());
      }
    }
    spec.P = p;
  }
  return spec;
}

inline ManifoldSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open spec file " + path);
  return read_spec(in, path);
}

inline std::string write_spec(const Chart& chart, const Metric& metric, const std::vector<std::string>& params,
                              const std::optional<VectorField>& p) {
  std::ostringstream os;
  os << "[chart] name = " << chart.name() << " ; coords = ";
  for (std::size_t i = 0; i < chart.dim(); ++i)
    os << (i ? ", " : "") << chart[i].name << ":" << parity_name(chart.parity(i));
  os << "\n";
  if (!params.empty()) {
    os << "[params] ";
    for (std::size_t i = 0; i < params.size(); ++i) os << (i ? ", " : "") << params[i];
    os << "\n";
  }
  os << "[metric] degree = " << parity_name(metric.degree()) << "\n";
  for (std::size_t i = 0; i < chart.dim(); ++i)
    for (std::size_t j = 0; j < chart.dim(); ++j)
      if (!metric(i, j).is_zero()) os << "g[" << chart[i].name << "," << chart[j].name << "] = " << metric(i, j).to_string() << "\n";
  if (p) {
    os << "[P]\n";
    for (std::size_t i = 0; i < chart.dim(); ++i)
      if (!(*p)[i].is_zero()) os << "P[" << chart[i].name << "] = " << (*p)[i].to_string() << "\n";
  }
  return os.str();
}

}  // namespace sgeo
