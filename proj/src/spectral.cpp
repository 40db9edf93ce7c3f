#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

#include "restriction_lab/errors.hpp"
#include "restriction_lab/multiscale.hpp"
#include "restriction_lab/parallel.hpp"

namespace rlab {

namespace {

// FFTW planning is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

// |ĝ(ξ)|² on the DFT lattice, visited once per pair ±ξ with its multiplicity.
template <class Visit>
void for_each_power(const PlaneFunction& g, Visit visit) {
  const int n = g.size();
  const int nh = n / 2 + 1;
  const double h = g.spacing();
  double* in = fftw_alloc_real(static_cast<std::size_t>(n) * n);
  fftw_complex* out = fftw_alloc_complex(static_cast<std::size_t>(n) * nh);
  if (!in || !out) {
    fftw_free(in);
    fftw_free(out);
    throw Error("spectral_profile: allocation failed");
  }
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_r2c_2d(n, n, in, out, FFTW_ESTIMATE);
  }
  std::copy(g.samples().begin(), g.samples().end(), in);
  fftw_execute(plan);
  const double dxi = 2 * kPi / (n * h);
  const double scale = h * h;
  for (int a = 0; a < n; ++a) {
    const int ka = a <= n / 2 ? a : a - n;
    for (int b = 0; b < nh; ++b) {
      const fftw_complex& c = out[static_cast<std::size_t>(a) * nh + b];
      const double p = scale * scale * (c[0] * c[0] + c[1] * c[1]);
      const int mult = (b == 0 || (n % 2 == 0 && b == n / 2)) ? 1 : 2;
      visit(std::hypot(ka * dxi, b * dxi), p * mult * dxi * dxi);
    }
  }
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
}

}  // namespace

SpectralProfile spectral_profile(const PlaneFunction& g, int levels) {
  if (levels < 2) throw ParameterError("spectral_profile needs levels >= 2");
  SpectralProfile prof;
  double rho = 2;
  for (int j = 0; j < levels; ++j) {
    prof.rho.push_back(rho);
    rho = rho * rho * rho;
  }
  const double nyquist = kPi / g.spacing();
  if (prof.rho.back() > nyquist)
    throw ResolutionError("spectral_profile: rho_" + std::to_string(levels) + " = " +
                          std::to_string(prof.rho.back()) + " exceeds the grid's Nyquist frequency " +
                          std::to_string(nyquist));
  prof.mass.assign(static_cast<std::size_t>(levels - 1), 0.0);
  for_each_power(g, [&](double r, double m) {
    prof.total += m;
    for (std::size_t j = 0; j + 1 < prof.rho.size(); ++j)
      if (r >= prof.rho[j] && r < prof.rho[j + 1]) prof.mass[j] += m;
  });
  return prof;
}

std::optional<FrequencyGap> freq_gap_finder(const PlaneFunction& g, int levels) {
  SpectralProfile prof = spectral_profile(g, levels);
  if (!(prof.total > 0)) return std::nullopt;
  const auto it = std::min_element(prof.mass.begin(), prof.mass.end());
  const std::size_t j = static_cast<std::size_t>(it - prof.mass.begin());
  FrequencyGap gap;
  gap.s = prof.rho[j];
  gap.S = prof.rho[j + 1];
  gap.mass = *it;
  gap.profile = std::move(prof);
  return gap;
}

LowFrequencyMass low_freq_mass(const PlaneFunction& g, double A) {
  if (!(A > 0)) throw ParameterError("low_freq_mass needs A > 0");
  const int n = g.size();
  const double h = g.spacing(), X = g.extent();
  for (double v : g.samples())
    if (v < 0) throw SignError("low_freq_mass needs a nonnegative function");
  // ĝ is smooth on the scale 1/X, so polar Gauss-Legendre × trapezoid nodes
  // on the disk suffice; ĝ at each node is the separable direct sum.
  const int n_s = std::max(32, static_cast<int>(std::ceil(2 * X * A)) + 16);
  const int n_a = std::max(64, static_cast<int>(std::ceil(4 * X * A)) + 16);
  const GaussLegendre gs = gauss_legendre(n_s, 0.0, A);
  std::vector<double> y(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) y[i] = -X + i * h;
  const std::size_t total = static_cast<std::size_t>(n_s) * n_a;
  std::vector<double> val(total);
  parallel_for(total, [&](std::size_t q) {
    const std::size_t is = q / n_a, ia = q % n_a;
    const double s = gs.x[is], al = 2 * kPi * ia / n_a;
    const double x1 = s * std::cos(al), x2 = s * std::sin(al);
    std::vector<double> c2(n), s2(n);
    for (int j = 0; j < n; ++j) {
      c2[j] = std::cos(y[j] * x2);
      s2[j] = -std::sin(y[j] * x2);
    }
    std::complex<double> acc = 0;
    for (int i = 0; i < n; ++i) {
      double re = 0, im = 0;
      const double* row = &g.samples()[static_cast<std::size_t>(i) * n];
      for (int j = 0; j < n; ++j) {
        re += row[j] * c2[j];
        im += row[j] * s2[j];
      }
      acc += std::polar(1.0, -y[i] * x1) * std::complex<double>(re, im);
    }
    val[q] = std::norm(acc * (h * h)) * gs.w[is] * s * (2 * kPi / n_a);
  });
  LowFrequencyMass out;
  for (double v : val) out.mass += v;
  for (int e = -4; e <= 4; ++e) {
    const double t = std::ldexp(1.0, e);
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        s += g.sample(i, j) * std::exp(-0.5 * t * (y[i] * y[i] + y[j] * y[j]));
    out.t.push_back(t);
    out.pairing.push_back(s * h * h);
  }
  return out;
}

}  // namespace rlab
