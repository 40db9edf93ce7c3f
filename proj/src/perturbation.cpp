#include "restriction_lab/perturbation.hpp"

#include <algorithm>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "restriction_lab/convolution.hpp"
#include "restriction_lab/errors.hpp"
#include "restriction_lab/parallel.hpp"

namespace rlab {

namespace {

void check_eps(double eps) {
  if (!(eps >= 0 && eps <= 1)) throw ParameterError("perturbation parameter must lie in [0, 1]");
}

// Largest ρ with ρ²/2 + ερ⁴/8 ≤ level.
double radius_at_level(double eps, double level) {
  if (eps == 0) return std::sqrt(2 * level);
  // ερ⁴/8 + ρ²/2 − level = 0 as a quadratic in ρ².
  const double a = eps / 8, q = (-0.5 + std::sqrt(0.25 + 4 * a * level)) / (2 * a);
  return std::sqrt(q);
}

int round_up(int n, int step) { return ((n + step - 1) / step) * step; }

}  // namespace

std::complex<double> w_eps(double eps, double t, double xr, int n_hankel) {
  check_eps(eps);
  if (n_hankel < 64) throw ParameterError("w_eps needs n_hankel >= 64");
  if (!(xr >= 0)) throw ParameterError("w_eps needs |x| >= 0");
  // e^{−h} < e^{−40} beyond rho_max.
  constexpr double kLevel = 40;
  const double rho_max = radius_at_level(eps, kLevel);
  const double phase = xr * rho_max + std::abs(t) * kLevel;
  const double nn = n_hankel + 1.2 * phase;
  if (nn > 1e6) throw ResolutionError("w_eps: too many oscillations for the radial rule");
  const GaussLegendre g = gauss_legendre(round_up(static_cast<int>(nn), 32), 0.0, rho_max);
  std::complex<double> s = 0;
  const std::complex<double> z(1.0, t);
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    const double r = g.x[i], r2 = r * r;
    const double h = 0.5 * r2 + eps * r2 * r2 / 8;
    const double j0 = xr == 0 ? 1.0 : boost::math::cyl_bessel_j(0, xr * r);
    s += g.w[i] * j0 * std::exp(-z * h) * (1 + 0.5 * eps * r2) * r;
  }
  const std::complex<double> out = 2 * kPi * s;
  if (!std::isfinite(out.real()) || !std::isfinite(out.imag()))
    throw ResolutionError("w_eps: non-finite quadrature");
  return out;
}

double w_l4_tail_coefficient(double eps) {
  check_eps(eps);
  // Stationary phase at x = −t∇h(y): ∫|w|⁴dx ≈ (2π)⁴t⁻²∫ a⁴e^{−4h}/det∇²h dy
  // with a = 1 + ερ²/2 and det∇²h = a(1 + 3ερ²/2).
  const double rho_max = radius_at_level(eps, 10);
  const GaussLegendre g = gauss_legendre(128, 0.0, rho_max);
  double s = 0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    const double r = g.x[i], r2 = r * r;
    const double a = 1 + 0.5 * eps * r2;
    const double h = 0.5 * r2 + eps * r2 * r2 / 8;
    s += g.w[i] * r * a * a * a * std::exp(-4 * h) / (1 + 1.5 * eps * r2);
  }
  return std::pow(2 * kPi, 4) * 2 * kPi * s;
}

namespace {

// I(t) = ∫₀^∞ |w_ε(t, r)|⁴ 2πr dr with r = u√(1 + t²).
double slice_integral(double eps, double t, const WNormSpec& spec) {
  const double rho_c = radius_at_level(eps, 9);
  const double u_max = 1.2 * rho_c * (1 + 0.5 * eps * rho_c * rho_c) + 1;
  const int n = std::max(spec.n_x, static_cast<int>(std::ceil(spec.n_x * u_max / 6.1)));
  const GaussLegendre g = gauss_legendre(n, 0.0, u_max);
  const double s2 = 1 + t * t, s = std::sqrt(s2);
  double acc = 0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    const double a = std::norm(w_eps(eps, t, g.x[i] * s, spec.n_hankel));
    acc += g.w[i] * g.x[i] * a * a;
  }
  return 2 * kPi * s2 * acc;
}

}  // namespace

WNorm w_l4_norm(double eps, const WNormSpec& spec) {
  check_eps(eps);
  if (spec.n_t < 8 || spec.n_x < 8 || !(spec.t_max >= 4))
    throw ParameterError("w_l4_norm: grid too small");
  const GaussLegendre g = gauss_legendre(spec.n_t, 0.0, std::atan(spec.t_max));
  std::vector<double> part(g.x.size());
  parallel_for(g.x.size(), [&](std::size_t i) {
    const double t = std::tan(g.x[i]);
    part[i] = g.w[i] * (1 + t * t) * slice_integral(eps, t, spec);
  });
  double inner = 0;
  for (double p : part) inner += p;
  WNorm out;
  const double T = spec.t_max;
  out.c = w_l4_tail_coefficient(eps);
  const double i_t = slice_integral(eps, T, spec);
  out.d = (i_t - out.c / (T * T)) * T * T * T * T;
  out.tail = 2 * (out.c / T + out.d / (3 * T * T * T));
  out.value = 2 * inner + out.tail;
  // The fitted correction must stay small next to the leading term.
  if (!(std::abs(out.d) / (3 * T * T) < 0.05 * out.c))
    throw ResolutionError("w_l4_norm: tail expansion does not certify the truncation");
  return out;
}

double g_eps_norm(double eps) {
  check_eps(eps);
  const GaussLegendre g = gauss_legendre(128, 0.0, radius_at_level(eps, 20));
  double s = 0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    const double r = g.x[i], r2 = r * r;
    s += g.w[i] * r * std::exp(-r2 - 0.25 * eps * r2 * r2) * (1 + 0.5 * eps * r2);
  }
  return 2 * kPi * s;
}

double g_eps_norm_derivative(double eps) {
  check_eps(eps);
  const GaussLegendre g = gauss_legendre(128, 0.0, radius_at_level(eps, 20));
  double s = 0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    const double r = g.x[i], r2 = r * r;
    const double e = std::exp(-r2 - 0.25 * eps * r2 * r2);
    s += g.w[i] * r * e * (0.5 * r2 - 0.25 * r2 * r2 * (1 + 0.5 * eps * r2));
  }
  return 2 * kPi * s;
}

PerturbationRow psi_at(double eps, const WNormSpec& spec) {
  PerturbationRow row;
  row.eps = eps;
  row.w_l4 = w_l4_norm(eps, spec).value;
  row.g_l2sq = g_eps_norm(eps);
  row.psi = std::log(row.w_l4 / (row.g_l2sq * row.g_l2sq));
  return row;
}

PerturbationScan psi_scan(const std::vector<double>& eps_grid, double fd_step,
                          const WNormSpec& spec) {
  for (double e : eps_grid)
    if (!(e >= 0 && e <= 0.5)) throw ParameterError("psi_scan: eps values must lie in [0, 0.5]");
  if (!(fd_step > 0 && fd_step <= 0.5)) throw ParameterError("psi_scan: fd step must lie in (0, 0.5]");
  PerturbationScan scan;
  for (double e : eps_grid) scan.rows.push_back(psi_at(e, spec));
  const double p0 = psi_at(0.0, spec).psi;
  const double ph = psi_at(fd_step, spec).psi, ph2 = psi_at(0.5 * fd_step, spec).psi;
  scan.fd_step = fd_step;
  scan.d_h = (ph - p0) / fd_step;
  scan.d_h2 = (ph2 - p0) / (0.5 * fd_step);
  scan.psi_prime_0 = 2 * scan.d_h2 - scan.d_h;
  return scan;
}

double weighted_multiplier(const std::function<double(double)>& w, int k) {
  if (k < 0) throw ParameterError("weighted_multiplier needs k >= 0");
  Kernel1D K;
  K.k = [w](double t) {
    const double v = std::sqrt(std::max(0.0, 2 + 2 * t));
    return w(v) / v;
  };
  K.singular = EndpointSingularity::AtMinusOne;
  K.near_minus = [w](double v) { return w(v) / v; };
  check_integrable(K);
  return funk_hecke_multiplier(K, k);
}

}  // namespace rlab
