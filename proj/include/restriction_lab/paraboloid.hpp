#pragma once

#include <array>
#include <functional>
#include <vector>

#include "restriction_lab/sphere.hpp"

namespace rlab {

// A function on the paraboloid {y₃ = |y|²/2}, parametrized by y ∈ ℝ² with the
// measure dy₁dy₂. Samples live on the grid −X + ih, 0 ≤ i < n; values off the
// grid come from the callable when there is one, else bilinear interpolation.
// The function is zero outside [−X, X]².
class PlaneFunction {
 public:
  using Callable = std::function<double(double, double)>;

  static PlaneFunction from_callable(Callable f, double extent = 12.0, double h = 0.05,
                                     bool radial = false);
  static PlaneFunction from_samples(std::vector<double> values, double extent, double h);
  // e^{−a|y|²}.
  static PlaneFunction gaussian(double a = 0.5, double extent = 12.0, double h = 0.05);

  double operator()(double y1, double y2) const;
  double extent() const { return extent_; }
  double spacing() const { return h_; }
  int size() const { return n_; }  // samples per axis
  const std::vector<double>& samples() const { return v_; }
  double sample(int i, int j) const { return v_[static_cast<std::size_t>(i) * n_ + j]; }
  bool radial() const { return radial_; }
  // h²Σ samples².
  double l2_norm_sq() const;

 private:
  double extent_ = 0, h_ = 0;
  int n_ = 0;
  std::vector<double> v_;  // row i ↔ y₁, column j ↔ y₂
  Callable f_;
  bool radial_ = false;
};

struct ParabolaPoint {
  double y1 = 0, y2 = 0;
  double height = 0;
  ParabolaPoint(double a, double b) : y1(a), y2(b), height(0.5 * (a * a + b * b)) {}
};

// (Fμ*Gμ)(z) = ½∫ F(y(φ))G(z′ − y(φ)) dφ, y(φ) = z′/2 + R_c(cos φ, sin φ),
// R_c² = z₃ − |z′|²/4; zero off {z₃ > |z′|²/4}. Trapezoid rule with m nodes.
double parab_conv_at(const PlaneFunction& F, const PlaneFunction& G, const std::array<double, 3>& z,
                     int m = 64);

// Ω is integrated in (ρ, α, s) with z′ = ρ(cos α, sin α), z₃ = ρ²/4 + s.
struct ParabGridSpec {
  int n_rho = 64;
  int n_s = 64;
  int n_alpha = 32;  // collapses to 1 for radial inputs
  int n_circle = 64;
  double rho_max = 7.5;
  double s_max = 13.0;
  void validate() const;
};

// ‖Fμ*Fμ‖₂²/‖F‖₂⁴.
double parab_functional(const PlaneFunction& F, const ParabGridSpec& spec = {});

// Even, nonnegative, L²-normalized function on S²: a Gaussian of width r
// about ±e₃, cut off at |x′| = √r. Its pullback under the cap chart of
// C(e₃, r) is e^{−|y|²/2} on |y| < r^{−1/2}.
SphereFunction cap_trial(double r);
// The upper half of cap_trial(r) alone, normalized.
SphereFunction cap_trial_single(double r);

}  // namespace rlab
