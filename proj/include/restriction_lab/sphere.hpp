#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace rlab {

constexpr double kPi = 3.14159265358979323846;

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// A point of S². The constructor normalizes its input.
class UnitVector3 {
 public:
  UnitVector3() : v_{0, 0, 1} {}
  UnitVector3(double x, double y, double z);
  explicit UnitVector3(const Vec3& v) : UnitVector3(v.x, v.y, v.z) {}

  double x() const { return v_.x; }
  double y() const { return v_.y; }
  double z() const { return v_.z; }
  const Vec3& vec() const { return v_; }
  UnitVector3 antipode() const;
  operator const Vec3&() const { return v_; }

 private:
  Vec3 v_;
};

// 3x3 rotation, row-major.
struct Rotation {
  double m[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

  Vec3 apply(const Vec3& v) const;
  Vec3 apply_inverse(const Vec3& v) const;
  // Minimal-angle rotation taking z to the north pole, about the axis z×e₃.
  // For z = −e₃ the rotation by π about e₁ is used.
  static Rotation to_north(const Vec3& z);
  static Rotation axis_angle(const Vec3& axis, double angle);
};

// Deterministic orthonormal pair spanning the plane orthogonal to the unit
// vector a: Gram-Schmidt of the coordinate axis where |a| is smallest.
void orthonormal_frame(const Vec3& a, Vec3& e1, Vec3& e2);

struct GaussLegendre {
  std::vector<double> x, w;
};

// n-point Gauss-Legendre rule on [a, b], nodes ascending. Nodes are mirrored
// so that the rule on a symmetric interval is exactly symmetric.
GaussLegendre gauss_legendre(int n, double a = -1.0, double b = 1.0);

struct QuadratureRule {
  std::vector<Vec3> nodes;
  std::vector<double> weights;
  int exactness_degree = 0;
  // Product structure: node index = i_theta * n_phi + j_phi, cos_theta ascending.
  std::vector<double> cos_theta;
  int n_phi = 0;

  std::size_t size() const { return nodes.size(); }
  int n_theta() const { return static_cast<int>(cos_theta.size()); }
  // True when the antipode of every node is a node (even n_phi).
  bool antipodally_closed() const { return n_phi > 0 && n_phi % 2 == 0; }
  std::size_t antipode(std::size_t i) const;
  // Largest distance between neighbouring nodes.
  double spacing() const;
};

// Gauss-Legendre in cosθ times the uniform rule in φ.
QuadratureRule make_quadrature(int n_theta, int n_phi);
std::shared_ptr<const QuadratureRule> shared_quadrature(int n_theta, int n_phi);

double legendre_p(int k, double t);
// P_0..P_k at t into out[0..k].
void legendre_all(int k, double t, double* out);

inline int sh_index(int l, int m) { return l * l + l + m; }
inline int sh_count(int L) { return (L + 1) * (L + 1); }

// Orthonormal real spherical harmonics Y_{l,m}, 0 ≤ l ≤ L, at p:
// m > 0 uses cos(mφ), m < 0 uses sin(|m|φ), no Condon-Shortley phase.
void real_sh_all(int L, const Vec3& p, double* out);
double real_sh(int l, int m, const Vec3& p);

struct Coefficients {
  int band_limit = 0;
  std::vector<double> c;  // sh_index(l, m) layout

  Coefficients() : c(1, 0.0) {}
  explicit Coefficients(int L) : band_limit(L), c(static_cast<std::size_t>(sh_count(L)), 0.0) {}
  double& at(int l, int m);
  // Zero above the band limit.
  double at(int l, int m) const;
  double norm_sq() const;
  Coefficients truncated(int L) const;
};

struct GridSamples {
  std::shared_ptr<const QuadratureRule> rule;
  std::vector<double> values;
};

// Structural facts about an analytic function that let integrators pick
// exact or reduced rules.
struct AnalyticTraits {
  bool zonal = false;  // depends only on the z coordinate
  bool even = false;
  std::optional<int> band_limit;
  std::optional<double> l2_norm_sq;
};

class SphereFunction {
 public:
  using Callable = std::function<double(const Vec3&)>;

  SphereFunction();  // zero
  static SphereFunction constant(double value);
  static SphereFunction harmonic(int l, int m, double scale = 1.0);
  static SphereFunction from_coefficients(Coefficients c);
  static SphereFunction from_samples(std::shared_ptr<const QuadratureRule> rule,
                                     std::vector<double> values);
  static SphereFunction analytic(Callable f, AnalyticTraits traits = {});

  // p must be a unit vector.
  double value(const Vec3& p) const;
  double operator()(const UnitVector3& p) const { return value(p.vec()); }
  void values(std::span<const Vec3> pts, std::span<double> out) const;
  std::vector<double> sample(const QuadratureRule& rule) const;

  const Coefficients* coefficients() const { return std::get_if<Coefficients>(&rep_); }
  const GridSamples* samples() const { return std::get_if<GridSamples>(&rep_); }
  bool is_zero() const;
  bool zonal() const;
  bool even() const;
  std::optional<int> band_limit() const;

  // ‖f‖₂². Coefficients: Σc². Samples: their own rule. Analytic: the stored
  // value, else the fallback rule (a parameter error if none is given).
  double l2_norm_sq(const QuadratureRule* fallback = nullptr) const;

  SphereFunction reflected() const;  // x ↦ f(−x)
  SphereFunction scaled(double s) const;
  SphereFunction rotated(const Rotation& r) const;  // x ↦ f(R⁻¹x)

 private:
  struct Analytic {
    Callable f;
    AnalyticTraits traits;
  };
  std::variant<Coefficients, GridSamples, Analytic> rep_;
  bool zonal_ = false;
  bool even_ = false;

  void classify();
};

double interpolate_samples(const GridSamples& s, const Vec3& p);

Coefficients sh_analyze(const SphereFunction& f, int L, const QuadratureRule& rule);
Coefficients sh_analyze(const std::function<double(const Vec3&)>& f, int L,
                        const QuadratureRule& rule);
double sh_synthesize(const Coefficients& c, const Vec3& p);

// C(z, r): y·z > 0 and |y − (y·z)z| < r, with r the projection radius.
class Cap {
 public:
  Cap(const UnitVector3& center, double radius);
  const UnitVector3& center() const { return center_; }
  double radius() const { return radius_; }
  bool contains(const Vec3& y) const;
  double area() const;
  Cap antipodal() const { return Cap(center_.antipode(), radius_); }

 private:
  UnitVector3 center_;
  double radius_;
};

// Distance in the space of caps, C identified with −C.
double cap_distance(const Cap& a, const Cap& b);
double cap_quotient_distance(const Cap& a, const Cap& b);

struct CapFamily {
  int level = 0;
  double separation = 1.0;
  std::vector<UnitVector3> centers;
  // C_k^j = C(z_k^j, 2^{-k+1}); the projection radius is clamped to 1.
  double cap_radius() const;
  Cap cap(std::size_t j) const { return Cap(centers[j], cap_radius()); }
};

CapFamily maximal_cap_centers(int k, const QuadratureRule& candidate_grid);
// Product rule fine enough to serve as candidate grid for level k.
QuadratureRule candidate_grid_for_level(int k);

struct DiskFunction {
  double radius = 1.0;
  std::function<double(double, double)> f;
  double operator()(double y1, double y2) const { return f(y1, y2); }
};

// φ_C*f(y) = r·f(φ_C(y)), φ_C(y) = L⁻¹(r y, √(1 − r²|y|²)).
DiskFunction cap_pullback(const Cap& cap, const SphereFunction& f);

}  // namespace rlab
