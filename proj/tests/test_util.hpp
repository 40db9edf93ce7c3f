#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "restriction_lab/sphere.hpp"

namespace testutil {

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Uniform point on S² from a seeded engine.
inline rlab::Vec3 random_point(std::mt19937_64& g) {
  std::normal_distribution<double> n;
  rlab::Vec3 v{n(g), n(g), n(g)};
  return v * (1 / v.norm());
}

inline rlab::Coefficients random_coefficients(int L, std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(-1, 1);
  rlab::Coefficients c(L);
  for (double& v : c.c) v = u(g);
  return c;
}

}  // namespace testutil
