#include <algorithm>

#include "restriction_lab/errors.hpp"
#include "restriction_lab/sphere.hpp"

namespace rlab {

SphereFunction::SphereFunction() : rep_(Coefficients(0)) { classify(); }

SphereFunction SphereFunction::constant(double value) {
  Coefficients c(0);
  c.at(0, 0) = value * std::sqrt(4 * kPi);
  return from_coefficients(std::move(c));
}

SphereFunction SphereFunction::harmonic(int l, int m, double scale) {
  if (l < 0 || std::abs(m) > l) throw ParameterError("harmonic: need l >= 0 and |m| <= l");
  Coefficients c(l);
  c.at(l, m) = scale;
  return from_coefficients(std::move(c));
}

SphereFunction SphereFunction::from_coefficients(Coefficients c) {
  if (c.c.size() != static_cast<std::size_t>(sh_count(c.band_limit)))
    throw ParameterError("coefficient vector does not match its band limit");
  SphereFunction f;
  f.rep_ = std::move(c);
  f.classify();
  return f;
}

SphereFunction SphereFunction::from_samples(std::shared_ptr<const QuadratureRule> rule,
                                            std::vector<double> values) {
  if (!rule) throw ParameterError("grid samples need a rule");
  if (values.size() != rule->size()) throw ParameterError("sample count does not match rule size");
  if (rule->cos_theta.empty()) throw ParameterError("grid samples need a product rule");
  SphereFunction f;
  f.rep_ = GridSamples{std::move(rule), std::move(values)};
  f.classify();
  return f;
}

SphereFunction SphereFunction::analytic(Callable fn, AnalyticTraits traits) {
  SphereFunction f;
  f.rep_ = Analytic{std::move(fn), traits};
  f.classify();
  return f;
}

void SphereFunction::classify() {
  zonal_ = even_ = false;
  if (auto* c = std::get_if<Coefficients>(&rep_)) {
    zonal_ = even_ = true;
    for (int l = 0; l <= c->band_limit; ++l)
      for (int m = -l; m <= l; ++m) {
        const double v = c->at(l, m);
        if (v == 0.0) continue;
        if (m != 0) zonal_ = false;
        if (l % 2) even_ = false;
      }
  } else if (auto* s = std::get_if<GridSamples>(&rep_)) {
    const QuadratureRule& r = *s->rule;
    if (r.antipodally_closed()) {
      even_ = true;
      for (std::size_t i = 0; i < r.size() && even_; ++i)
        if (s->values[i] != s->values[r.antipode(i)]) even_ = false;
    }
    zonal_ = true;
    const std::size_t np = static_cast<std::size_t>(r.n_phi);
    for (std::size_t i = 0; i < r.size() && zonal_; ++i)
      if (s->values[i] != s->values[(i / np) * np]) zonal_ = false;
  } else {
    const auto& a = std::get<Analytic>(rep_);
    zonal_ = a.traits.zonal;
    even_ = a.traits.even;
  }
}

double interpolate_samples(const GridSamples& s, const Vec3& p) {
  const QuadratureRule& r = *s.rule;
  const auto& ct = r.cos_theta;
  const int nt = static_cast<int>(ct.size());
  const int np = r.n_phi;
  // Ring bracket in cosθ, with constant extension beyond the outer rings.
  int i0, i1;
  double a;
  const double z = p.z;
  if (z <= ct.front()) {
    i0 = i1 = 0;
    a = 0;
  } else if (z >= ct.back()) {
    i0 = i1 = nt - 1;
    a = 0;
  } else {
    i1 = static_cast<int>(std::upper_bound(ct.begin(), ct.end(), z) - ct.begin());
    i0 = i1 - 1;
    a = (z - ct[i0]) / (ct[i1] - ct[i0]);
    if (a < 1e-13) a = 0;
  }
  double phi = std::atan2(p.y, p.x);
  if (phi < 0) phi += 2 * kPi;
  double u = phi * np / (2 * kPi);
  const double ur = std::round(u);
  if (std::abs(u - ur) < 1e-9) u = ur;
  int j0 = static_cast<int>(std::floor(u));
  const double b = u - j0;
  j0 %= np;
  if (j0 < 0) j0 += np;
  const int j1 = (j0 + 1) % np;
  auto v = [&](int i, int j) { return s.values[static_cast<std::size_t>(i) * np + j]; };
  const double r0 = b == 0 ? v(i0, j0) : (1 - b) * v(i0, j0) + b * v(i0, j1);
  if (a == 0) return r0;
  const double r1 = b == 0 ? v(i1, j0) : (1 - b) * v(i1, j0) + b * v(i1, j1);
  return (1 - a) * r0 + a * r1;
}

double SphereFunction::value(const Vec3& p) const {
  if (auto* c = std::get_if<Coefficients>(&rep_)) {
    if (c->band_limit == 0) return c->c[0] * 0.28209479177387814;  // Y_00
    return sh_synthesize(*c, p);
  }
  if (auto* s = std::get_if<GridSamples>(&rep_)) return interpolate_samples(*s, p);
  return std::get<Analytic>(rep_).f(p);
}

void SphereFunction::values(std::span<const Vec3> pts, std::span<double> out) const {
  if (auto* c = std::get_if<Coefficients>(&rep_)) {
    if (c->band_limit == 0) {
      std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(pts.size()),
                c->c[0] * 0.28209479177387814);
      return;
    }
    std::vector<double> y(static_cast<std::size_t>(sh_count(c->band_limit)));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      real_sh_all(c->band_limit, pts[i], y.data());
      double s = 0;
      for (std::size_t k = 0; k < y.size(); ++k) s += c->c[k] * y[k];
      out[i] = s;
    }
    return;
  }
  for (std::size_t i = 0; i < pts.size(); ++i) out[i] = value(pts[i]);
}

std::vector<double> SphereFunction::sample(const QuadratureRule& rule) const {
  if (auto* s = std::get_if<GridSamples>(&rep_); s && s->rule.get() == &rule) return s->values;
  std::vector<double> v(rule.size());
  values(rule.nodes, v);
  return v;
}

bool SphereFunction::is_zero() const {
  if (auto* c = std::get_if<Coefficients>(&rep_))
    return std::all_of(c->c.begin(), c->c.end(), [](double v) { return v == 0.0; });
  if (auto* s = std::get_if<GridSamples>(&rep_))
    return std::all_of(s->values.begin(), s->values.end(), [](double v) { return v == 0.0; });
  return false;
}

bool SphereFunction::zonal() const { return zonal_; }
bool SphereFunction::even() const { return even_; }

std::optional<int> SphereFunction::band_limit() const {
  if (auto* c = std::get_if<Coefficients>(&rep_)) return c->band_limit;
  if (auto* a = std::get_if<Analytic>(&rep_)) return a->traits.band_limit;
  return std::nullopt;
}

double SphereFunction::l2_norm_sq(const QuadratureRule* fallback) const {
  if (auto* c = std::get_if<Coefficients>(&rep_)) return c->norm_sq();
  if (auto* s = std::get_if<GridSamples>(&rep_)) {
    double t = 0;
    for (std::size_t i = 0; i < s->values.size(); ++i)
      t += s->rule->weights[i] * s->values[i] * s->values[i];
    return t;
  }
  const auto& a = std::get<Analytic>(rep_);
  if (a.traits.l2_norm_sq) return *a.traits.l2_norm_sq;
  if (!fallback) throw ParameterError("l2 norm of an analytic function needs a quadrature rule");
  double t = 0;
  for (std::size_t i = 0; i < fallback->size(); ++i) {
    const double v = a.f(fallback->nodes[i]);
    t += fallback->weights[i] * v * v;
  }
  return t;
}

SphereFunction SphereFunction::reflected() const {
  if (auto* c = std::get_if<Coefficients>(&rep_)) {
    Coefficients r = *c;
    for (int l = 1; l <= r.band_limit; l += 2)
      for (int m = -l; m <= l; ++m) r.at(l, m) = -r.at(l, m);
    return from_coefficients(std::move(r));
  }
  if (auto* s = std::get_if<GridSamples>(&rep_); s && s->rule->antipodally_closed()) {
    std::vector<double> v(s->values.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = s->values[s->rule->antipode(i)];
    return from_samples(s->rule, std::move(v));
  }
  AnalyticTraits t;
  t.zonal = false;
  t.even = even_;
  t.band_limit = band_limit();
  if (auto* a = std::get_if<Analytic>(&rep_)) t.l2_norm_sq = a->traits.l2_norm_sq;
  SphereFunction self = *this;
  return analytic([self](const Vec3& p) { return self.value(-p); }, t);
}

SphereFunction SphereFunction::scaled(double s) const {
  if (auto* c = std::get_if<Coefficients>(&rep_)) {
    Coefficients r = *c;
    for (double& v : r.c) v *= s;
    return from_coefficients(std::move(r));
  }
  if (auto* g = std::get_if<GridSamples>(&rep_)) {
    std::vector<double> v = g->values;
    for (double& x : v) x *= s;
    return from_samples(g->rule, std::move(v));
  }
  const auto& a = std::get<Analytic>(rep_);
  AnalyticTraits t = a.traits;
  if (t.l2_norm_sq) t.l2_norm_sq = *t.l2_norm_sq * s * s;
  auto fn = a.f;
  return analytic([fn, s](const Vec3& p) { return s * fn(p); }, t);
}

SphereFunction SphereFunction::rotated(const Rotation& r) const {
  AnalyticTraits t;
  t.even = even_;
  t.band_limit = band_limit();
  if (auto* a = std::get_if<Analytic>(&rep_)) t.l2_norm_sq = a->traits.l2_norm_sq;
  if (std::get_if<Coefficients>(&rep_)) t.l2_norm_sq = l2_norm_sq();
  SphereFunction self = *this;
  return analytic([self, r](const Vec3& p) { return self.value(r.apply_inverse(p)); }, t);
}

}  // namespace rlab
