#include <algorithm>
#include <map>
#include <mutex>
#include <string>

#include "restriction_lab/errors.hpp"
#include "restriction_lab/sphere.hpp"

namespace rlab {

UnitVector3::UnitVector3(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (!(n > 0) || !std::isfinite(n)) throw ParameterError("unit vector from zero or non-finite input");
  v_ = {x / n, y / n, z / n};
}

UnitVector3 UnitVector3::antipode() const {
  UnitVector3 u;
  u.v_ = -v_;
  return u;
}

Vec3 Rotation::apply(const Vec3& v) const {
  return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
          m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
          m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
}

Vec3 Rotation::apply_inverse(const Vec3& v) const {
  return {m[0][0] * v.x + m[1][0] * v.y + m[2][0] * v.z,
          m[0][1] * v.x + m[1][1] * v.y + m[2][1] * v.z,
          m[0][2] * v.x + m[1][2] * v.y + m[2][2] * v.z};
}

Rotation Rotation::axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  const Vec3 k = axis * (1.0 / n);
  const double c = std::cos(angle), s = std::sin(angle), t = 1 - c;
  Rotation r;
  r.m[0][0] = c + k.x * k.x * t;
  r.m[0][1] = k.x * k.y * t - k.z * s;
  r.m[0][2] = k.x * k.z * t + k.y * s;
  r.m[1][0] = k.y * k.x * t + k.z * s;
  r.m[1][1] = c + k.y * k.y * t;
  r.m[1][2] = k.y * k.z * t - k.x * s;
  r.m[2][0] = k.z * k.x * t - k.y * s;
  r.m[2][1] = k.z * k.y * t + k.x * s;
  r.m[2][2] = c + k.z * k.z * t;
  return r;
}

Rotation Rotation::to_north(const Vec3& z) {
  const Vec3 e3{0, 0, 1};
  const Vec3 axis = z.cross(e3);
  const double s = axis.norm();
  const double c = z.dot(e3);
  if (s < 1e-15) {
    if (c > 0) return Rotation{};
    return axis_angle({1, 0, 0}, kPi);
  }
  return axis_angle(axis, std::atan2(s, c));
}

void orthonormal_frame(const Vec3& a, Vec3& e1, Vec3& e2) {
  const double ax = std::abs(a.x), ay = std::abs(a.y), az = std::abs(a.z);
  Vec3 b;
  if (ax <= ay && ax <= az)
    b = {1, 0, 0};
  else if (ay <= az)
    b = {0, 1, 0};
  else
    b = {0, 0, 1};
  e1 = b - a * a.dot(b);
  e1 = e1 * (1.0 / e1.norm());
  e2 = a.cross(e1);
}

namespace {

GaussLegendre compute_gl_unit(int n) {
  GaussLegendre g;
  g.x.assign(n, 0.0);
  g.w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton on P_n from the Tricomi initial guess, largest root first.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
    }
    const double w = 2.0 / ((1 - x * x) * dp * dp);
    g.x[n - 1 - i] = x;
    g.x[i] = -x;
    g.w[n - 1 - i] = w;
    g.w[i] = w;
  }
  if (n % 2 == 1) g.x[n / 2] = 0.0;
  return g;
}

const GaussLegendre& gl_unit_cached(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussLegendre>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussLegendre>(compute_gl_unit(n));
  return *slot;
}

}  // namespace

GaussLegendre gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ParameterError("Gauss-Legendre rule needs n >= 1");
  const GaussLegendre& u = gl_unit_cached(n);
  GaussLegendre g;
  g.x.resize(n);
  g.w.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    g.x[i] = mid + half * u.x[i];
    g.w[i] = half * u.w[i];
  }
  return g;
}

QuadratureRule make_quadrature(int n_theta, int n_phi) {
  if (n_theta < 2 || n_phi < 4)
    throw ParameterError("make_quadrature needs n_theta >= 2 and n_phi >= 4, got " +
                         std::to_string(n_theta) + ", " + std::to_string(n_phi));
  QuadratureRule q;
  const GaussLegendre g = gauss_legendre(n_theta);
  q.cos_theta = g.x;
  q.n_phi = n_phi;
  q.exactness_degree = std::min(2 * n_theta - 1, n_phi - 1);
  std::vector<double> cphi(n_phi), sphi(n_phi);
  const int half = n_phi / 2;
  for (int j = 0; j < n_phi; ++j) {
    if (n_phi % 2 == 0 && j >= half) {
      cphi[j] = -cphi[j - half];
      sphi[j] = -sphi[j - half];
    } else {
      const double phi = 2 * kPi * j / n_phi;
      cphi[j] = std::cos(phi);
      sphi[j] = std::sin(phi);
    }
  }
  q.nodes.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  q.weights.reserve(q.nodes.capacity());
  const double dphi = 2 * kPi / n_phi;
  for (int i = 0; i < n_theta; ++i) {
    const double z = g.x[i];
    const double s = std::sqrt(std::max(0.0, 1 - z * z));
    for (int j = 0; j < n_phi; ++j) {
      q.nodes.push_back({s * cphi[j], s * sphi[j], z});
      q.weights.push_back(g.w[i] * dphi);
    }
  }
  return q;
}

std::shared_ptr<const QuadratureRule> shared_quadrature(int n_theta, int n_phi) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::weak_ptr<const QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n_theta, n_phi}];
  if (auto p = slot.lock()) return p;
  auto p = std::make_shared<const QuadratureRule>(make_quadrature(n_theta, n_phi));
  slot = p;
  return p;
}

std::size_t QuadratureRule::antipode(std::size_t i) const {
  if (!antipodally_closed()) throw ParameterError("rule is not closed under the antipodal map");
  const std::size_t np = static_cast<std::size_t>(n_phi);
  const std::size_t it = i / np, jp = i % np;
  return (cos_theta.size() - 1 - it) * np + (jp + np / 2) % np;
}

double QuadratureRule::spacing() const {
  if (cos_theta.empty() || n_phi == 0) {
    // Unstructured: largest nearest-neighbour distance.
    double worst = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      double best = 4;
      for (std::size_t j = 0; j < nodes.size(); ++j)
        if (i != j) best = std::min(best, (nodes[i] - nodes[j]).norm());
      worst = std::max(worst, best);
    }
    return worst;
  }
  const int nt = n_theta();
  double worst = 0;
  auto sinth = [](double z) { return std::sqrt(std::max(0.0, 1 - z * z)); };
  for (int i = 0; i + 1 < nt; ++i) {
    const double a = std::acos(std::clamp(cos_theta[i], -1.0, 1.0));
    const double b = std::acos(std::clamp(cos_theta[i + 1], -1.0, 1.0));
    worst = std::max(worst, 2 * std::sin(0.5 * std::abs(a - b)));
  }
  for (int i = 0; i < nt; ++i)
    worst = std::max(worst, 2 * sinth(cos_theta[i]) * std::sin(kPi / n_phi));
  // Poles lie within the first ring's circle.
  const double s0 = sinth(cos_theta.front());
  worst = std::max(worst, std::sqrt(s0 * s0 + (1 + cos_theta.front()) * (1 + cos_theta.front())));
  const double s1 = sinth(cos_theta.back());
  worst = std::max(worst, std::sqrt(s1 * s1 + (1 - cos_theta.back()) * (1 - cos_theta.back())));
  return worst;
}

}  // namespace rlab
