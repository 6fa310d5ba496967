#pragma once

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "latgas/model.hpp"

namespace latgas::testing {

inline ::testing::AssertionResult complex_near(Complex actual, Complex expected, double tol) {
  const double d = std::abs(actual - expected);
  if (d <= tol) return ::testing::AssertionSuccess();
  std::ostringstream s;
  s.precision(17);
  s << actual << " vs " << expected << " differ by " << d << " > " << tol;
  return ::testing::AssertionFailure() << s.str();
}

/// |actual - expected| <= tol * max(1, |expected|)
inline ::testing::AssertionResult relative_near(Complex actual, Complex expected, double tol) {
  return complex_near(actual, expected, tol * std::max(1.0, std::abs(expected)));
}

}  // namespace latgas::testing
