#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "supergeo/specfile.hpp"
#include "generators.hpp"

namespace sgeo::testing {

inline ManifoldSpec spec_from(const std::string& text) {
  std::istringstream in(text);
  return read_spec(in);
}

inline ManifoldSpec data_spec(const std::string& name) { return load_spec(std::string(SUPERGEO_DATA_DIR) + "/" + name); }

inline ::testing::AssertionResult field_zero(const VectorField& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) return ::testing::AssertionFailure() << "component " << i << " = " << v[i].to_string();
  return ::testing::AssertionSuccess();
}

inline ::testing::AssertionResult expr_zero(const GradedExpr& e) {
  if (e.is_zero()) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << e.to_string();
}

}  // namespace sgeo::testing
