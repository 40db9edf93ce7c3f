#include "restriction_lab/convolution.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <string>

#include "restriction_lab/errors.hpp"
#include "restriction_lab/parallel.hpp"

namespace rlab {

void BallGridSpec::validate() const {
  if (n_radial < 1 || n_theta < 2 || n_phi < 4 || n_circle < 2)
    throw ParameterError("ball grid sizes too small (need n_radial>=1, n_theta>=2, n_phi>=4, n_circle>=2)");
}

BallGridSpec BallGridSpec::exact_for(int l1, int l2, int l3, int l4) {
  const int tot = l1 + l2 + l3 + l4;
  BallGridSpec s;
  s.n_radial = std::max(2, (tot + 1) / 2 + 1);
  s.n_theta = std::max(2, (tot + 1) / 2 + 1);
  if (s.n_theta % 2) ++s.n_theta;
  s.n_phi = std::max(4, tot + 2);
  int m = std::max(l1 + l2, l3 + l4) + 2;
  if (m % 2) ++m;
  s.n_circle = std::max(4, m);
  return s;
}

BallGrid BallGrid::build(const BallGridSpec& spec, bool zonal, bool even) {
  spec.validate();
  BallGrid g;
  g.spec = spec;
  g.zonal = zonal;
  g.half = even;
  if (spec.radial == RadialScheme::GaussLegendre) {
    const GaussLegendre r = gauss_legendre(spec.n_radial, 0.0, 2.0);
    g.t = r.x;
    g.tw = r.w;
  } else {
    const GaussLegendre b = gauss_legendre(spec.n_radial, 0.0, kPi / 2);
    for (int i = 0; i < spec.n_radial; ++i) {
      g.t.push_back(2 * std::sin(b.x[i]));
      g.tw.push_back(b.w[i] * 2 * std::cos(b.x[i]));
    }
  }
  auto keep = [&](double z, double& w) {
    if (!even) return true;
    if (z < 0) return false;
    if (z > 0) w *= 2;
    return true;
  };
  if (zonal) {
    const GaussLegendre c = gauss_legendre(spec.n_theta);
    for (int i = 0; i < spec.n_theta; ++i) {
      double w = c.w[i] * 2 * kPi;
      if (!keep(c.x[i], w)) continue;
      g.dirs.push_back({std::sqrt(std::max(0.0, 1 - c.x[i] * c.x[i])), 0.0, c.x[i]});
      g.dir_w.push_back(w);
    }
  } else {
    const auto q = shared_quadrature(spec.n_theta, spec.n_phi);
    for (std::size_t i = 0; i < q->size(); ++i) {
      double w = q->weights[i];
      if (!keep(q->nodes[i].z, w)) continue;
      g.dirs.push_back(q->nodes[i]);
      g.dir_w.push_back(w);
    }
  }
  return g;
}

Vec3 BallGrid::point(std::size_t k) const {
  const std::size_t nd = dirs.size();
  return dirs[k % nd] * t[k / nd];
}

double BallGrid::weight(std::size_t k) const {
  const std::size_t nd = dirs.size();
  const double r = t[k / nd];
  return tw[k / nd] * r * r * dir_w[k % nd];
}

double BallGrid::l2_norm_sq(const std::vector<double>& h) const { return inner(h, h); }

double BallGrid::inner(const std::vector<double>& a, const std::vector<double>& b) const {
  const std::size_t nd = dirs.size();
  double total = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double s = 0;
    for (std::size_t d = 0; d < nd; ++d) s += dir_w[d] * a[i * nd + d] * b[i * nd + d];
    total += tw[i] * t[i] * t[i] * s;
  }
  return total;
}

BallGridSpec auto_grid(std::initializer_list<const SphereFunction*> fs) {
  std::vector<int> deg;
  for (const SphereFunction* f : fs) {
    auto L = f->band_limit();
    if (!L) return BallGridSpec{};
    deg.push_back(*L);
  }
  while (deg.size() < 4) deg.push_back(deg.empty() ? 0 : deg[deg.size() - 2]);
  return BallGridSpec::exact_for(deg[0], deg[1], deg[2], deg[3]);
}

namespace {

// Unit circle directions u_j = (cos φ_j, sin φ_j), φ_j = 2πj/m, with
// u_{j+m/2} = −u_j exactly for even m.
struct CircleTable {
  std::vector<double> c, s;
  explicit CircleTable(int m) : c(m), s(m) {
    const int h = m / 2;
    for (int j = 0; j < m; ++j) {
      if (m % 2 == 0 && j >= h) {
        c[j] = -c[j - h];
        s[j] = -s[j - h];
      } else {
        c[j] = std::cos(2 * kPi * j / m);
        s[j] = std::sin(2 * kPi * j / m);
      }
    }
  }
};

// Workspace for evaluating one density value.
struct DensityEval {
  const SphereFunction& f;
  const SphereFunction& g;
  int m;
  CircleTable tab;
  std::vector<Vec3> pts, pts2;
  std::vector<double> fv, gv;

  DensityEval(const SphereFunction& f_, const SphereFunction& g_, int m_)
      : f(f_), g(g_), m(m_), tab(m_), pts(m_), pts2(m_), fv(m_), gv(m_) {}

  // x = r ω with ω a unit vector, 0 < r < 2.
  double at(const Vec3& omega, double r) {
    Vec3 e1, e2;
    orthonormal_frame(omega, e1, e2);
    const double s = std::sqrt(std::max(0.0, 1 - 0.25 * r * r));
    const Vec3 c = omega * (0.5 * r);
    for (int j = 0; j < m; ++j) pts[j] = c + (e1 * tab.c[j] + e2 * tab.s[j]) * s;
    f.values(pts, fv);
    double sum = 0;
    if (m % 2 == 0) {
      const int h = m / 2;
      if (&f == &g) {
        for (int j = 0; j < m; ++j) sum += fv[j] * fv[(j + h) % m];
      } else {
        g.values(pts, gv);
        for (int j = 0; j < m; ++j) sum += fv[j] * gv[(j + h) % m];
      }
    } else {
      const Vec3 x = omega * r;
      for (int j = 0; j < m; ++j) pts2[j] = x - pts[j];
      g.values(pts2, gv);
      for (int j = 0; j < m; ++j) sum += fv[j] * gv[j];
    }
    return sum * (2 * kPi / m) / r;
  }
};

}  // namespace

double conv_density_at(const SphereFunction& f, const SphereFunction& g, const Vec3& x, int m) {
  if (m < 2) throw ParameterError("conv_density_at needs m >= 2 circle nodes");
  const double r = x.norm();
  if (r == 0.0) throw SingularPointError("convolution density is singular at x = 0");
  if (r >= 2.0) return 0.0;
  DensityEval ev(f, g, m);
  return ev.at(x * (1.0 / r), r);
}

std::vector<double> conv_density_grid(const SphereFunction& f, const SphereFunction& g,
                                      const BallGrid& grid) {
  const std::size_t nd = grid.dirs.size();
  std::vector<double> out(grid.size());
  parallel_for(grid.t.size(), [&](std::size_t i) {
    DensityEval ev(f, g, grid.spec.n_circle);
    for (std::size_t d = 0; d < nd; ++d) out[i * nd + d] = ev.at(grid.dirs[d], grid.t[i]);
  });
  return out;
}

double conv_l2_norm(const SphereFunction& f, const SphereFunction& g,
                    std::optional<BallGridSpec> spec) {
  if (f.is_zero() || g.is_zero()) return 0.0;
  const BallGridSpec s = spec ? *spec : auto_grid({&f, &g});
  const bool zonal = s.allow_zonal && f.zonal() && g.zonal();
  const BallGrid grid = BallGrid::build(s, zonal, f.even() && g.even());
  const std::vector<double> h = conv_density_grid(f, g, grid);
  return std::sqrt(std::max(0.0, grid.l2_norm_sq(h)));
}

double conv_inner(const SphereFunction& f1, const SphereFunction& f2, const SphereFunction& f3,
                  const SphereFunction& f4, std::optional<BallGridSpec> spec) {
  if (f1.is_zero() || f2.is_zero() || f3.is_zero() || f4.is_zero()) return 0.0;
  const BallGridSpec s = spec ? *spec : auto_grid({&f1, &f2, &f3, &f4});
  const bool zonal = s.allow_zonal && f1.zonal() && f2.zonal() && f3.zonal() && f4.zonal();
  const bool even = f1.even() && f2.even() && f3.even() && f4.even();
  const BallGrid grid = BallGrid::build(s, zonal, even);
  const std::vector<double> a = conv_density_grid(f1, f2, grid);
  if (&f1 == &f3 && &f2 == &f4) return grid.l2_norm_sq(a);
  const std::vector<double> b = conv_density_grid(f3, f4, grid);
  return grid.inner(a, b);
}

double t_rho_at(const SphereFunction& f, double rho, const Vec3& x, int m) {
  if (!(rho > 0 && rho < 2)) throw ParameterError("t_rho needs 0 < rho < 2");
  if (m < 1) throw ParameterError("t_rho needs m >= 1");
  const double c = 1 - 0.5 * rho * rho;
  const double s = std::sqrt(std::max(0.0, 1 - c * c));
  Vec3 e1, e2;
  orthonormal_frame(x, e1, e2);
  const CircleTable tab(m);
  std::vector<Vec3> pts(m);
  std::vector<double> v(m);
  for (int j = 0; j < m; ++j) pts[j] = x * c + (e1 * tab.c[j] + e2 * tab.s[j]) * s;
  f.values(pts, v);
  double sum = 0;
  for (double a : v) sum += a;
  return sum / m;
}

SphereFunction t_rho(const SphereFunction& f, double rho, std::shared_ptr<const QuadratureRule> rule,
                     int m) {
  if (!rule) throw ParameterError("t_rho needs a rule");
  std::vector<double> v(rule->size());
  parallel_for(rule->size(), [&](std::size_t i) { v[i] = t_rho_at(f, rho, rule->nodes[i], m); });
  return SphereFunction::from_samples(std::move(rule), std::move(v));
}

Kernel1D Kernel1D::inverse_chord() {
  Kernel1D K;
  K.k = [](double t) { return 1.0 / std::sqrt(2 - 2 * t); };
  K.singular = EndpointSingularity::AtPlusOne;
  K.near_plus = [](double u) { return 1.0 / u; };
  K.near_minus = [](double v) { return 1.0 / std::sqrt(4 - v * v); };
  return K;
}

Kernel1D Kernel1D::inverse_antichord() {
  Kernel1D K;
  K.k = [](double t) { return 1.0 / std::sqrt(2 + 2 * t); };
  K.singular = EndpointSingularity::AtMinusOne;
  K.near_plus = [](double u) { return 1.0 / std::sqrt(4 - u * u); };
  K.near_minus = [](double v) { return 1.0 / v; };
  return K;
}

namespace {

using boost::math::quadrature::gauss_kronrod;

double kernel_upper(const Kernel1D& K, double u) {
  if (K.near_plus) return K.near_plus(u);
  const double t = 1 - 0.5 * u * u;
  return t < 1 ? K.k(t) : 0.0;
}

double kernel_lower(const Kernel1D& K, double v) {
  if (K.near_minus) return K.near_minus(v);
  const double t = 0.5 * v * v - 1;
  return t > -1 ? K.k(t) : 0.0;
}

// ∫_{-1}^{1} K(t) p(t) dt as two halves: u = √(2 − 2t) on [0, 1] and
// v = √(2 + 2t) on [−1, 0], which absorbs |1 ∓ t|^{-1/2} endpoint behaviour.
double split_integral(const Kernel1D& K, const std::function<double(double)>& p) {
  const double b = std::sqrt(2.0);
  auto upper = [&](double u) { return u == 0 ? 0.0 : kernel_upper(K, u) * p(1 - 0.5 * u * u) * u; };
  auto lower = [&](double v) { return v == 0 ? 0.0 : kernel_lower(K, v) * p(0.5 * v * v - 1) * v; };
  double err = 0;
  const double a1 = gauss_kronrod<double, 61>::integrate(upper, 0.0, b, 15, 1e-14, &err);
  const double a2 = gauss_kronrod<double, 61>::integrate(lower, 0.0, b, 15, 1e-14, &err);
  return a1 + a2;
}

double endpoint_shell(const Kernel1D& K, bool plus, double lo, double hi) {
  auto g = [&](double u) { return std::abs(plus ? kernel_upper(K, u) : kernel_lower(K, u)) * u; };
  double err = 0;
  return gauss_kronrod<double, 31>::integrate(g, lo, hi, 10, 1e-10, &err);
}

}  // namespace

void check_integrable(const Kernel1D& K) {
  auto check = [&](bool plus) {
    // Shell masses three decades apart; a log-divergent kernel keeps them
    // equal, an integrable one makes the inner shell small.
    const double j2 = endpoint_shell(K, plus, 1e-3, 1e-2);
    const double j8 = endpoint_shell(K, plus, 1e-6, 1e-5);
    if (!std::isfinite(j2) || !std::isfinite(j8) || (j2 > 0 && j8 > 0.5 * j2) || (j2 == 0 && j8 > 0))
      throw IntegrabilityError(std::string("kernel is not integrable near t = ") + (plus ? "1" : "-1"));
  };
  if (K.singular == EndpointSingularity::AtPlusOne || K.singular == EndpointSingularity::Both) check(true);
  if (K.singular == EndpointSingularity::AtMinusOne || K.singular == EndpointSingularity::Both) check(false);
}

double funk_hecke_multiplier(const Kernel1D& K, int k) {
  if (k < 0) throw ParameterError("funk_hecke_multiplier: negative degree");
  check_integrable(K);
  const double v = split_integral(K, [&](double t) { return legendre_p(k, std::clamp(t, -1.0, 1.0)); });
  if (!std::isfinite(v)) throw IntegrabilityError("Funk-Hecke integral is not finite");
  return 2 * kPi * v;
}

SphereFunction kernel_conv(const SphereFunction& f, const Kernel1D& K) {
  const Coefficients* c = f.coefficients();
  if (!c) throw ParameterError("kernel_conv needs a band-limited (coefficient) function");
  Coefficients out = *c;
  for (int l = 0; l <= out.band_limit; ++l) {
    bool any = false;
    for (int m = -l; m <= l; ++m) any = any || out.at(l, m) != 0.0;
    if (!any) continue;
    const double lam = funk_hecke_multiplier(K, l);
    for (int m = -l; m <= l; ++m) out.at(l, m) *= lam;
  }
  return SphereFunction::from_coefficients(std::move(out));
}

double kernel_conv_at(const SphereFunction& f, const Kernel1D& K, const Vec3& x, int n) {
  Vec3 e1, e2;
  orthonormal_frame(x, e1, e2);
  const GaussLegendre g = gauss_legendre(n, 0.0, std::sqrt(2.0));
  const int na = 2 * n + 1;
  const CircleTable tab(na);
  std::vector<Vec3> pts(na);
  std::vector<double> v(na);
  double total = 0;
  for (int half = 0; half < 2; ++half) {
    for (int i = 0; i < n; ++i) {
      const double u = g.x[i];
      const double t = half == 0 ? 1 - 0.5 * u * u : 0.5 * u * u - 1;
      const double s = std::sqrt(std::max(0.0, 1 - t * t));
      for (int j = 0; j < na; ++j) pts[j] = x * t + (e1 * tab.c[j] + e2 * tab.s[j]) * s;
      f.values(pts, v);
      double ring = 0;
      for (double a : v) ring += a;
      const double kv = half == 0 ? kernel_upper(K, u) : kernel_lower(K, u);
      total += g.w[i] * u * kv * ring * (2 * kPi / na);
    }
  }
  return total;
}

double triple_conv_at(const SphereFunction& f, const Vec3& z, const TripleConvSpec& spec) {
  if (spec.n_polar < 1 || spec.n_azimuth < 1 || spec.n_circle < 2)
    throw ParameterError("triple convolution quadrature sizes too small");
  Vec3 e1, e2;
  orthonormal_frame(z, e1, e2);
  // Polar angle θ of y about z; |z − y| = 2 sin(θ/2) and sinθ/|z − y| = cos(θ/2).
  const GaussLegendre g = gauss_legendre(spec.n_polar, 0.0, kPi);
  const CircleTable tab(spec.n_azimuth);
  DensityEval ev(f, f, spec.n_circle);
  std::vector<Vec3> ys(spec.n_azimuth);
  std::vector<double> fy(spec.n_azimuth);
  double total = 0;
  for (int i = 0; i < spec.n_polar; ++i) {
    const double th = g.x[i];
    const double ct = std::cos(th), st = std::sin(th);
    for (int j = 0; j < spec.n_azimuth; ++j) ys[j] = z * ct + (e1 * tab.c[j] + e2 * tab.s[j]) * st;
    f.values(ys, fy);
    double ring = 0;
    for (int j = 0; j < spec.n_azimuth; ++j) {
      if (fy[j] == 0.0) continue;
      const Vec3 x = z - ys[j];
      const double r = x.norm();
      ring += fy[j] * r * ev.at(x * (1.0 / r), r);
    }
    total += g.w[i] * std::cos(0.5 * th) * ring * (2 * kPi / spec.n_azimuth);
  }
  return total;
}

SphereFunction triple_conv_on_sphere(const SphereFunction& f,
                                     std::shared_ptr<const QuadratureRule> rule,
                                     const TripleConvSpec& spec) {
  if (!rule) throw ParameterError("triple_conv_on_sphere needs a rule");
  if (const Coefficients* c = f.coefficients())
    return SphereFunction::from_coefficients(triple_conv_coefficients(*c, 3 * c->band_limit));
  std::vector<double> v(rule->size(), 0.0);
  if (f.is_zero()) return SphereFunction::from_samples(std::move(rule), std::move(v));
  const std::size_t np = static_cast<std::size_t>(rule->n_phi);
  if (f.zonal()) {
    // The result is zonal too: one evaluation per ring.
    parallel_for(rule->cos_theta.size(), [&](std::size_t i) {
      const double val = triple_conv_at(f, rule->nodes[i * np], spec);
      for (std::size_t j = 0; j < np; ++j) v[i * np + j] = val;
    });
  } else {
    parallel_for(rule->size(), [&](std::size_t i) { v[i] = triple_conv_at(f, rule->nodes[i], spec); });
  }
  return SphereFunction::from_samples(std::move(rule), std::move(v));
}

}  // namespace rlab
