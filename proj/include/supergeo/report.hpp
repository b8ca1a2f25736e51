#pragma once
// Run reports: one document per command, stable field order, no timestamps.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "supergeo/numeric.hpp"

namespace sgeo {

enum class Classification { symbolic_zero, numeric_zero, value, nonzero };

inline const char* classification_name(Classification c) {
  switch (c) {
    case Classification::symbolic_zero: return "symbolic-zero";
    case Classification::numeric_zero: return "numeric-zero";
    case Classification::value: return "value";
    default: return "nonzero";
  }
}

inline Classification classify(const ZeroTest& t) {
  switch (t.certainty) {
    case Certainty::symbolic: return Classification::symbolic_zero;
    case Certainty::numeric: return Classification::numeric_zero;
    default: return Classification::nonzero;
  }
}

inline std::string fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct ReportResult {
  std::string label;
  Classification classification = Classification::value;
  std::string payload;
};

struct RunReport {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;  // name, fnv1a digest
  std::uint64_t seed = 0;
  std::vector<std::string> notes;
  std::vector<ReportResult> results;

  void add_file(const std::string& path) { inputs.push_back({path, fnv1a(read_file(path))}); }
  void add_text(const std::string& name, const std::string& text) { inputs.push_back({name, fnv1a(text)}); }

  void add_check(const std::string& label, const ZeroTest& t, const std::string& detail = "") {
    std::string payload = detail;
    if (t.certainty == Certainty::numeric) payload = "max |residual| = " + format_double(t.max_abs);
    if (t.certainty == Certainty::nonzero) {
      payload = "max |residual| = " + format_double(t.max_abs);
      if (!t.witness.empty()) payload += " at " + t.witness;
      if (!detail.empty()) payload += "; " + detail;
    }
    results.push_back({label, classify(t), payload});
  }

  bool passed() const {
    for (const auto& r : results)
      if (r.classification == Classification::nonzero) return false;
    return true;
  }

  std::string json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["inputs"] = nlohmann::ordered_json::array();
    for (const auto& [name, digest] : inputs) j["inputs"].push_back({{"name", name}, {"fnv1a", digest}});
    j["seed"] = seed;
    j["notes"] = notes;
    j["results"] = nlohmann::ordered_json::array();
    for (const auto& r : results)
      j["results"].push_back(
          {{"label", r.label}, {"classification", classification_name(r.classification)}, {"payload", r.payload}});
    j["passed"] = passed();
    return j.dump(2) + "\n";
  }

  std::string text() const {
    std::ostringstream os;
    os << "# " << command << "\n";
    for (const auto& [name, digest] : inputs) os << "# input " << name << " fnv1a:" << digest << "\n";
    os << "# seed " << seed << "\n";
    for (const auto& n : notes) os << "# " << n << "\n";
    std::size_t width = 0, cwidth = 0;
    bool any_check = false;
    for (const auto& r : results)
      if (r.classification != Classification::value) {
        width = std::max(width, r.label.size());
        cwidth = std::max(cwidth, std::string(classification_name(r.classification)).size());
        any_check = true;
      }
    if (results.empty()) os << "(no nonzero entries)\n";
    for (const auto& r : results) {
      if (r.classification == Classification::value) {
        os << r.label << " = " << r.payload << "\n";
        continue;
      }
      std::string c = classification_name(r.classification);
      os << r.label << std::string(width - r.label.size() + 2, ' ') << c;
      if (!r.payload.empty()) os << std::string(cwidth - c.size() + 2, ' ') << r.payload;
      os << "\n";
    }
    if (any_check) os << (passed() ? "PASS" : "FAIL") << "\n";
    return os.str();
  }

 private:
  static std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
  }
};

}  // namespace sgeo
