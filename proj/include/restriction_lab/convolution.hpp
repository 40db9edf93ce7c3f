#pragma once

#include <functional>
#include <initializer_list>
#include <optional>
#include <vector>

#include "restriction_lab/sphere.hpp"

namespace rlab {

enum class RadialScheme {
  GaussLegendre,  // nodes in t on (0, 2)
  Arcsine,        // nodes in β on (0, π/2), t = 2 sin β; clusters nodes near t = 2
};

struct BallGridSpec {
  int n_radial = 64;
  int n_theta = 48;
  int n_phi = 97;
  int n_circle = 96;
  RadialScheme radial = RadialScheme::GaussLegendre;
  // Use the axisymmetric reduction when every input is zonal about e₃.
  bool allow_zonal = true;

  void validate() const;
  // Smallest grid that integrates ⟨f₁σ*f₂σ, f₃σ*f₄σ⟩ exactly when the
  // inputs are polynomials of the given degrees.
  static BallGridSpec exact_for(int l1, int l2, int l3, int l4);
};

// Radial nodes times an angular rule; the angular rule degenerates to one
// node per cosθ ring in the zonal case, and to the upper half of the rings
// when the integrand is even.
struct BallGrid {
  BallGridSpec spec;
  std::vector<double> t, tw;  // radial nodes and weights
  std::vector<Vec3> dirs;
  std::vector<double> dir_w;
  bool zonal = false;
  bool half = false;

  static BallGrid build(const BallGridSpec& spec, bool zonal, bool even);
  std::size_t size() const { return t.size() * dirs.size(); }
  Vec3 point(std::size_t k) const;
  double weight(std::size_t k) const;  // includes t²
  double l2_norm_sq(const std::vector<double>& h) const;
  double inner(const std::vector<double>& a, const std::vector<double>& b) const;
};

// Grid for a set of inputs: exact sizes when all are band-limited, the
// defaults otherwise.
BallGridSpec auto_grid(std::initializer_list<const SphereFunction*> fs);

double conv_density_at(const SphereFunction& f, const SphereFunction& g, const Vec3& x, int m);
std::vector<double> conv_density_grid(const SphereFunction& f, const SphereFunction& g,
                                      const BallGrid& grid);

double conv_l2_norm(const SphereFunction& f, const SphereFunction& g,
                    std::optional<BallGridSpec> spec = std::nullopt);
double conv_inner(const SphereFunction& f1, const SphereFunction& f2, const SphereFunction& f3,
                  const SphereFunction& f4, std::optional<BallGridSpec> spec = std::nullopt);

// Average of f over {y ∈ S²: |y − x| = ρ} with normalized arc length.
double t_rho_at(const SphereFunction& f, double rho, const Vec3& x, int m = 96);
SphereFunction t_rho(const SphereFunction& f, double rho,
                     std::shared_ptr<const QuadratureRule> rule, int m = 96);

enum class EndpointSingularity { None, AtPlusOne, AtMinusOne, Both };

struct Kernel1D {
  std::function<double(double)> k;
  EndpointSingularity singular = EndpointSingularity::None;
  // Optional forms K(1 − u²/2) and K(v²/2 − 1) in the endpoint variables,
  // which avoid the cancellation in 1 ∓ t near a singular endpoint.
  std::function<double(double)> near_plus, near_minus;

  double operator()(double t) const { return k(t); }
  // (2 − 2t)^{-1/2} = 1/|x − y| for x·y = t.
  static Kernel1D inverse_chord();
  // (2 + 2t)^{-1/2} = 1/|x + y|.
  static Kernel1D inverse_antichord();
};

// Throws IntegrabilityError when |K| is not integrable near a flagged endpoint.
void check_integrable(const Kernel1D& K);
// 2π ∫ K(t) P_k(t) dt by adaptive Gauss-Kronrod after u = √(2 ∓ 2t).
double funk_hecke_multiplier(const Kernel1D& K, int k);
SphereFunction kernel_conv(const SphereFunction& f, const Kernel1D& K);
// ∫ K(x·y) f(y) dσ(y) by direct quadrature in polar coordinates about x.
double kernel_conv_at(const SphereFunction& f, const Kernel1D& K, const Vec3& x, int n = 64);

struct TripleConvSpec {
  int n_polar = 48;  // Gauss-Legendre nodes in the polar angle about z
  int n_azimuth = 96;
  int n_circle = 96;
};

// (fσ*fσ*fσ)(z) = ∫ (fσ*fσ)(z − y) f(y) dσ(y) in polar coordinates about z.
double triple_conv_at(const SphereFunction& f, const Vec3& z, const TripleConvSpec& spec = {});
SphereFunction triple_conv_on_sphere(const SphereFunction& f,
                                     std::shared_ptr<const QuadratureRule> rule,
                                     const TripleConvSpec& spec = {});

// Spherical-harmonic coefficients up to l_out of (fσ*fσ*fσ)|_{S²} for a
// band-limited f, via c_lm = ⟨Y_lm σ * f̃σ, fσ*fσ⟩ on an exact ball grid.
// Output band limit 3L captures the whole function.
Coefficients triple_conv_coefficients(const Coefficients& f, int l_out);

}  // namespace rlab
