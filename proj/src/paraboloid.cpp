#include "restriction_lab/paraboloid.hpp"

#include <algorithm>
#include <cmath>

#include "restriction_lab/errors.hpp"
#include "restriction_lab/parallel.hpp"

namespace rlab {

namespace {

int grid_points(double extent, double h) {
  if (!(extent > 0) || !(h > 0)) throw ParameterError("plane grid needs extent > 0 and h > 0");
  const double n = 2 * extent / h;
  const double k = std::round(n);
  if (std::abs(n - k) > 1e-9 * n) throw ParameterError("plane grid: 2X/h must be an integer");
  return static_cast<int>(k) + 1;
}

}  // namespace

PlaneFunction PlaneFunction::from_callable(Callable f, double extent, double h, bool radial) {
  PlaneFunction p;
  p.extent_ = extent;
  p.h_ = h;
  p.n_ = grid_points(extent, h);
  p.radial_ = radial;
  p.v_.resize(static_cast<std::size_t>(p.n_) * p.n_);
  for (int i = 0; i < p.n_; ++i)
    for (int j = 0; j < p.n_; ++j)
      p.v_[static_cast<std::size_t>(i) * p.n_ + j] = f(-extent + i * h, -extent + j * h);
  p.f_ = std::move(f);
  return p;
}

PlaneFunction PlaneFunction::from_samples(std::vector<double> values, double extent, double h) {
  PlaneFunction p;
  p.extent_ = extent;
  p.h_ = h;
  p.n_ = grid_points(extent, h);
  if (values.size() != static_cast<std::size_t>(p.n_) * p.n_)
    throw ParameterError("plane samples do not match the grid");
  p.v_ = std::move(values);
  return p;
}

PlaneFunction PlaneFunction::gaussian(double a, double extent, double h) {
  if (!(a > 0)) throw ParameterError("gaussian needs a > 0");
  return from_callable([a](double x, double y) { return std::exp(-a * (x * x + y * y)); }, extent, h,
                       true);
}

double PlaneFunction::operator()(double y1, double y2) const {
  if (std::abs(y1) > extent_ || std::abs(y2) > extent_) return 0.0;
  if (f_) return f_(y1, y2);
  const double u = (y1 + extent_) / h_, v = (y2 + extent_) / h_;
  const int i = std::min(static_cast<int>(u), n_ - 2), j = std::min(static_cast<int>(v), n_ - 2);
  const double a = u - i, b = v - j;
  return (1 - a) * (1 - b) * sample(i, j) + a * (1 - b) * sample(i + 1, j) +
         (1 - a) * b * sample(i, j + 1) + a * b * sample(i + 1, j + 1);
}

double PlaneFunction::l2_norm_sq() const {
  double s = 0;
  for (double x : v_) s += x * x;
  return s * h_ * h_;
}

double parab_conv_at(const PlaneFunction& F, const PlaneFunction& G, const std::array<double, 3>& z,
                     int m) {
  if (m < 16) throw ParameterError("parab_conv_at needs m >= 16");
  const double r2 = z[2] - 0.25 * (z[0] * z[0] + z[1] * z[1]);
  if (!(r2 > 0)) return 0.0;
  const double rc = std::sqrt(r2);
  const double c1 = 0.5 * z[0], c2 = 0.5 * z[1];
  double s = 0;
  for (int k = 0; k < m; ++k) {
    const double ph = 2 * kPi * k / m;
    const double u = rc * std::cos(ph), v = rc * std::sin(ph);
    s += F(c1 + u, c2 + v) * G(c1 - u, c2 - v);
  }
  return 0.5 * s * (2 * kPi / m);
}

void ParabGridSpec::validate() const {
  if (n_rho < 4 || n_s < 4 || n_alpha < 1 || n_circle < 16)
    throw ParameterError("paraboloid grid sizes too small");
  if (!(rho_max > 0) || !(s_max > 0)) throw ParameterError("paraboloid grid extents must be positive");
}

double parab_functional(const PlaneFunction& F, const ParabGridSpec& spec) {
  spec.validate();
  const double n2 = F.l2_norm_sq();
  if (!(n2 > 0)) throw DegenerateInputError("parab_functional of the zero function");
  const GaussLegendre gr = gauss_legendre(spec.n_rho, 0.0, spec.rho_max);
  const GaussLegendre gs = gauss_legendre(spec.n_s, 0.0, spec.s_max);
  const int na = F.radial() ? 1 : spec.n_alpha;
  const double wa = 2 * kPi / na;
  std::vector<double> rows(gr.x.size(), 0.0);
  parallel_for(gr.x.size(), [&](std::size_t i) {
    const double rho = gr.x[i];
    double acc = 0;
    for (int a = 0; a < na; ++a) {
      const double al = 2 * kPi * a / na;
      const double z1 = rho * std::cos(al), z2 = rho * std::sin(al);
      for (std::size_t k = 0; k < gs.x.size(); ++k) {
        const double c = parab_conv_at(F, F, {z1, z2, 0.25 * rho * rho + gs.x[k]}, spec.n_circle);
        acc += gs.w[k] * c * c;
      }
    }
    rows[i] = gr.w[i] * rho * wa * acc;
  });
  double total = 0;
  for (double r : rows) total += r;
  return total / (n2 * n2);
}

namespace {

// r⁻¹e^{−|x′|²/2r²} on the upper cap |x′| < √r, and its squared L² norm.
double half_trial(double r, const Vec3& p) {
  if (p.z <= 0) return 0.0;
  const double q = p.x * p.x + p.y * p.y;
  if (q >= r) return 0.0;
  return std::exp(-q / (2 * r * r)) / r;
}

double half_trial_norm_sq(double r) {
  // dσ = 2πu du/√(1 − u²) with u = |x′|.
  const GaussLegendre g = gauss_legendre(256, 0.0, std::sqrt(r));
  double s = 0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    const double u = g.x[i];
    const double v = std::exp(-u * u / (2 * r * r)) / r;
    s += g.w[i] * v * v * 2 * kPi * u / std::sqrt(1 - u * u);
  }
  return s;
}

void check_trial_radius(double r) {
  if (!(r > 0 && r <= 0.5)) throw ParameterError("cap_trial needs r in (0, 0.5]");
}

}  // namespace

SphereFunction cap_trial(double r) {
  check_trial_radius(r);
  const double scale = 1.0 / std::sqrt(2 * half_trial_norm_sq(r));
  AnalyticTraits t;
  t.zonal = true;
  t.even = true;
  t.l2_norm_sq = 1.0;
  return SphereFunction::analytic(
      [r, scale](const Vec3& p) { return scale * (half_trial(r, p) + half_trial(r, -p)); }, t);
}

SphereFunction cap_trial_single(double r) {
  check_trial_radius(r);
  const double scale = 1.0 / std::sqrt(half_trial_norm_sq(r));
  AnalyticTraits t;
  t.zonal = true;
  t.l2_norm_sq = 1.0;
  return SphereFunction::analytic([r, scale](const Vec3& p) { return scale * half_trial(r, p); }, t);
}

}  // namespace rlab
