#include <string>

#include "restriction_lab/errors.hpp"
#include "restriction_lab/sphere.hpp"

namespace rlab {

double legendre_p(int k, double t) {
  if (k < 0) throw ParameterError("legendre_p: negative degree");
  if (!(std::abs(t) <= 1.0)) throw ParameterError("legendre_p: t outside [-1, 1]");
  if (k == 0) return 1.0;
  double p0 = 1, p1 = t;
  for (int n = 1; n < k; ++n) {
    const double p2 = ((2 * n + 1) * t * p1 - n * p0) / (n + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

void legendre_all(int k, double t, double* out) {
  out[0] = 1.0;
  if (k >= 1) out[1] = t;
  for (int n = 1; n < k; ++n) out[n + 1] = ((2 * n + 1) * t * out[n] - n * out[n - 1]) / (n + 1);
}

void real_sh_all(int L, const Vec3& p, double* out) {
  // q̄_l^m: normalized associated Legendre functions with the sin^m θ factor
  // removed; the azimuthal part comes from Re/Im (x + iy)^m.
  const double z = p.z;
  const double inv4pi = 1.0 / (4 * kPi);
  double qmm = std::sqrt(inv4pi);
  double am = 1.0, bm = 0.0;  // Re, Im of (x + iy)^m
  for (int m = 0; m <= L; ++m) {
    if (m > 0) {
      qmm *= std::sqrt((2.0 * m + 1) / (2.0 * m));
      const double an = am * p.x - bm * p.y;
      bm = am * p.y + bm * p.x;
      am = an;
    }
    const double fc = (m == 0) ? 1.0 : std::sqrt(2.0) * am;
    const double fs = std::sqrt(2.0) * bm;
    double q_lm2 = 0, q_lm1 = qmm;
    for (int l = m; l <= L; ++l) {
      double q;
      if (l == m) {
        q = qmm;
      } else if (l == m + 1) {
        q = std::sqrt(2.0 * m + 3) * z * qmm;
      } else {
        const double l2 = double(l) * l, m2 = double(m) * m;
        const double a = std::sqrt((4 * l2 - 1) / (l2 - m2));
        const double b = std::sqrt((double(l - 1) * (l - 1) - m2) / (4.0 * (l - 1) * (l - 1) - 1));
        q = a * (z * q_lm1 - b * q_lm2);
      }
      if (l > m) {
        q_lm2 = q_lm1;
        q_lm1 = q;
      }
      out[sh_index(l, m)] = q * fc;
      if (m > 0) out[sh_index(l, -m)] = q * fs;
    }
  }
}

double real_sh(int l, int m, const Vec3& p) {
  if (l < 0 || std::abs(m) > l) throw ParameterError("real_sh: need |m| <= l");
  std::vector<double> y(static_cast<std::size_t>(sh_count(l)));
  real_sh_all(l, p, y.data());
  return y[static_cast<std::size_t>(sh_index(l, m))];
}

double& Coefficients::at(int l, int m) {
  if (l > band_limit || l < 0 || std::abs(m) > l) throw ParameterError("coefficient index out of range");
  return c[static_cast<std::size_t>(sh_index(l, m))];
}

double Coefficients::at(int l, int m) const {
  if (l > band_limit) return 0.0;
  return c[static_cast<std::size_t>(sh_index(l, m))];
}

double Coefficients::norm_sq() const {
  double s = 0;
  for (double v : c) s += v * v;
  return s;
}

Coefficients Coefficients::truncated(int L) const {
  Coefficients r(L);
  for (int l = 0; l <= std::min(L, band_limit); ++l)
    for (int m = -l; m <= l; ++m) r.at(l, m) = at(l, m);
  return r;
}

Coefficients sh_analyze(const std::function<double(const Vec3&)>& f, int L,
                        const QuadratureRule& rule) {
  if (L < 0) throw ParameterError("sh_analyze: negative band limit");
  if (rule.exactness_degree < 2 * L)
    throw ParameterError("sh_analyze: rule exactness " + std::to_string(rule.exactness_degree) +
                         " < 2L = " + std::to_string(2 * L));
  Coefficients c(L);
  std::vector<double> y(static_cast<std::size_t>(sh_count(L)));
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double fw = f(rule.nodes[i]) * rule.weights[i];
    if (fw == 0.0) continue;
    real_sh_all(L, rule.nodes[i], y.data());
    for (std::size_t k = 0; k < y.size(); ++k) c.c[k] += fw * y[k];
  }
  return c;
}

Coefficients sh_analyze(const SphereFunction& f, int L, const QuadratureRule& rule) {
  if (rule.exactness_degree < 2 * L)
    throw ParameterError("sh_analyze: rule exactness " + std::to_string(rule.exactness_degree) +
                         " < 2L = " + std::to_string(2 * L));
  const std::vector<double> v = f.sample(rule);
  Coefficients c(L);
  std::vector<double> y(static_cast<std::size_t>(sh_count(L)));
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double fw = v[i] * rule.weights[i];
    if (fw == 0.0) continue;
    real_sh_all(L, rule.nodes[i], y.data());
    for (std::size_t k = 0; k < y.size(); ++k) c.c[k] += fw * y[k];
  }
  return c;
}

double sh_synthesize(const Coefficients& c, const Vec3& p) {
  std::vector<double> y(static_cast<std::size_t>(sh_count(c.band_limit)));
  real_sh_all(c.band_limit, p, y.data());
  double s = 0;
  for (std::size_t k = 0; k < y.size(); ++k) s += c.c[k] * y[k];
  return s;
}

}  // namespace rlab
