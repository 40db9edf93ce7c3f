#include "restriction_lab/extremal.hpp"

#include <algorithm>
#include <array>

#include "restriction_lab/parallel.hpp"

namespace rlab {

double phi_functional(const SphereFunction& f, std::optional<BallGridSpec> spec) {
  const BallGridSpec s = spec ? *spec : auto_grid({&f, &f});
  std::shared_ptr<const QuadratureRule> fallback;
  const QuadratureRule* fb = nullptr;
  if (!f.coefficients() && !f.samples()) {
    fallback = shared_quadrature(s.n_theta, s.n_phi);
    fb = fallback.get();
  }
  const double n2 = f.l2_norm_sq(fb);
  if (!(n2 > 0)) throw DegenerateInputError("phi_functional of the zero function");
  const double c = conv_l2_norm(f, f, s);
  return c * c / (n2 * n2);
}

namespace {

// f(x) and f(−x) from a single harmonic evaluation.
SphereFunction symmetrized_coefficients(const Coefficients& c, double norm_sq) {
  const int L = c.band_limit;
  AnalyticTraits t;
  t.even = true;
  t.l2_norm_sq = norm_sq;
  auto fn = [c, L](const Vec3& p) {
    thread_local std::vector<double> y;
    y.resize(static_cast<std::size_t>(sh_count(L)));
    real_sh_all(L, p, y.data());
    double e = 0, o = 0;
    for (int l = 0; l <= L; ++l) {
      double s = 0;
      for (int m = -l; m <= l; ++m) s += c.at(l, m) * y[static_cast<std::size_t>(sh_index(l, m))];
      (l % 2 ? o : e) += s;
    }
    const double a = std::max(0.0, e + o), b = std::max(0.0, e - o);
    return std::sqrt(0.5 * (a * a + b * b));
  };
  return SphereFunction::analytic(fn, t);
}

}  // namespace

SphereFunction antipodal_symmetrize(const SphereFunction& f, const QuadratureRule* check_rule) {
  constexpr double kNegTol = -1e-12;
  if (const GridSamples* s = f.samples(); s && s->rule->antipodally_closed()) {
    const QuadratureRule& r = *s->rule;
    std::vector<double> v(s->values.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double a = s->values[i], b = s->values[r.antipode(i)];
      if (a < kNegTol) throw SignError("antipodal_symmetrize needs f >= 0 at every node");
      v[i] = std::sqrt(0.5 * (a * a + b * b));
    }
    return SphereFunction::from_samples(s->rule, std::move(v));
  }
  std::shared_ptr<const QuadratureRule> own;
  if (!check_rule) {
    own = shared_quadrature(32, 64);
    check_rule = own.get();
  }
  for (const Vec3& p : check_rule->nodes)
    if (f.value(p) < kNegTol) throw SignError("antipodal_symmetrize needs f >= 0 at every node");
  if (f.even()) return f;
  if (const Coefficients* c = f.coefficients()) return symmetrized_coefficients(*c, c->norm_sq());
  AnalyticTraits t;
  t.even = true;
  if (!f.samples()) {
    try {
      t.l2_norm_sq = f.l2_norm_sq();
    } catch (const ParameterError&) {
    }
  }
  SphereFunction g = f;
  return SphereFunction::analytic(
      [g](const Vec3& p) {
        const double a = std::max(0.0, g.value(p)), b = std::max(0.0, g.value(-p));
        return std::sqrt(0.5 * (a * a + b * b));
      },
      t);
}

SphereFunction abs_function(const SphereFunction& f) {
  if (const GridSamples* s = f.samples()) {
    std::vector<double> v = s->values;
    for (double& x : v) x = std::abs(x);
    return SphereFunction::from_samples(s->rule, std::move(v));
  }
  AnalyticTraits t;
  t.even = f.even();
  t.zonal = f.zonal();
  if (const Coefficients* c = f.coefficients()) t.l2_norm_sq = c->norm_sq();
  SphereFunction g = f;
  return SphereFunction::analytic([g](const Vec3& p) { return std::abs(g.value(p)); }, t);
}

void SymmetrizationOrbit::validate() const {
  for (double a : {phi, psi, alpha, beta})
    if (!(a >= 0 && a <= kPi / 2)) throw ParameterError("orbit angles must lie in [0, pi/2]");
}

double gamma(const SymmetrizationOrbit& o) {
  o.validate();
  return std::cos(o.phi) * std::cos(o.psi) * std::cos(o.alpha) * std::cos(o.beta) +
         std::sin(o.phi) * std::sin(o.psi) * std::sin(o.alpha) * std::sin(o.beta) +
         std::sin(o.phi + o.psi) * std::sin(o.alpha + o.beta);
}

namespace {

using Vec4 = std::array<double, 4>;

double gamma_raw(const Vec4& a) {
  return std::cos(a[0]) * std::cos(a[1]) * std::cos(a[2]) * std::cos(a[3]) +
         std::sin(a[0]) * std::sin(a[1]) * std::sin(a[2]) * std::sin(a[3]) +
         std::sin(a[0] + a[1]) * std::sin(a[2] + a[3]);
}

Vec4 gamma_grad(const Vec4& a) {
  const double c0 = std::cos(a[0]), c1 = std::cos(a[1]), c2 = std::cos(a[2]), c3 = std::cos(a[3]);
  const double s0 = std::sin(a[0]), s1 = std::sin(a[1]), s2 = std::sin(a[2]), s3 = std::sin(a[3]);
  const double sp = std::sin(a[0] + a[1]), cp = std::cos(a[0] + a[1]);
  const double sq = std::sin(a[2] + a[3]), cq = std::cos(a[2] + a[3]);
  return {-s0 * c1 * c2 * c3 + c0 * s1 * s2 * s3 + cp * sq,
          -c0 * s1 * c2 * c3 + s0 * c1 * s2 * s3 + cp * sq,
          -c0 * c1 * s2 * c3 + s0 * s1 * c2 * s3 + sp * cq,
          -c0 * c1 * c2 * s3 + s0 * s1 * s2 * c3 + sp * cq};
}

}  // namespace

GammaMax gamma_max_search(int grid_n, GammaDomain domain) {
  if (grid_n < 8) throw ParameterError("gamma_max_search needs grid_n >= 8");
  const double h = (kPi / 2) / (grid_n - 1);
  std::vector<double> c(grid_n), s(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    c[i] = std::cos(i * h);
    s[i] = std::sin(i * h);
  }
  const int n0 = domain == GammaDomain::PhiZero ? 1 : grid_n;
  struct Best {
    double v = -1;
    int i[4] = {0, 0, 0, 0};
  };
  std::vector<Best> rows(static_cast<std::size_t>(n0));
  parallel_for(static_cast<std::size_t>(n0), [&](std::size_t a) {
    Best b;
    for (int p = 0; p < grid_n; ++p) {
      const double spp = s[a] * c[p] + c[a] * s[p];
      for (int q = 0; q < grid_n; ++q)
        for (int r = 0; r < grid_n; ++r) {
          const double sqr = s[q] * c[r] + c[q] * s[r];
          const double v = c[a] * c[p] * c[q] * c[r] + s[a] * s[p] * s[q] * s[r] + spp * sqr;
          if (v > b.v) b = Best{v, {static_cast<int>(a), p, q, r}};
        }
    }
    rows[a] = b;
  });
  Best best;
  for (const Best& b : rows)
    if (b.v > best.v) best = b;

  // Projected gradient ascent with backtracking; φ stays pinned at 0 on the
  // boundary domain.
  Vec4 x = {best.i[0] * h, best.i[1] * h, best.i[2] * h, best.i[3] * h};
  double fx = gamma_raw(x);
  double step = 0.5;
  for (int it = 0; it < 5000 && step > 1e-16; ++it) {
    Vec4 g = gamma_grad(x);
    if (domain == GammaDomain::PhiZero) g[0] = 0;
    Vec4 y;
    for (int k = 0; k < 4; ++k) y[k] = std::clamp(x[k] + step * g[k], 0.0, kPi / 2);
    const double fy = gamma_raw(y);
    if (fy > fx) {
      x = y;
      fx = fy;
      step *= 1.5;
    } else {
      step *= 0.5;
    }
  }
  GammaMax out;
  out.value = std::max(fx, best.v);
  out.argmax = {x[0], x[1], x[2], x[3]};
  out.grid_step = h;
  return out;
}

namespace {

Coefficients coefficients_of(const SphereFunction& g, const char* who) {
  if (const Coefficients* c = g.coefficients()) return *c;
  if (auto L = g.band_limit()) {
    const QuadratureRule r = make_quadrature(*L + 1, 2 * *L + 1);
    return sh_analyze(g, *L, r);
  }
  throw ParameterError(std::string(who) + " needs a band-limited function");
}

void check_admissible(const Coefficients& c) {
  double odd = 0;
  for (int l = 1; l <= c.band_limit; l += 2)
    for (int m = -l; m <= l; ++m) odd += c.at(l, m) * c.at(l, m);
  if (std::sqrt(odd) > 1e-10 * std::max(1.0, std::sqrt(c.norm_sq())))
    throw AdmissibilityError("second variation needs an even function");
  if (std::abs(c.at(0, 0) * std::sqrt(4 * kPi)) > 1e-8)
    throw AdmissibilityError("second variation needs a mean-zero function");
}

}  // namespace

double second_variation(const SphereFunction& g) {
  const Coefficients c = coefficients_of(g, "second_variation");
  check_admissible(c);
  const Kernel1D K = Kernel1D::inverse_chord();
  double q = 0;
  for (int l = 2; l <= c.band_limit; l += 2) {
    double nl = 0;
    for (int m = -l; m <= l; ++m) nl += c.at(l, m) * c.at(l, m);
    if (nl == 0) continue;
    q += (12 * kPi * funk_hecke_multiplier(K, l) - 16 * kPi * kPi) * nl;
  }
  return q;
}

double second_variation_direct(const SphereFunction& g) {
  const Coefficients c = coefficients_of(g, "second_variation_direct");
  check_admissible(c);
  const SphereFunction gc = SphereFunction::from_coefficients(c);
  const SphereFunction one = SphereFunction::constant(1.0);
  return 6 * conv_inner(gc, gc, one, one) - 16 * kPi * kPi * c.norm_sq();
}

ELResult el_residual(const SphereFunction& f, std::shared_ptr<const QuadratureRule> rule,
                     const TripleConvSpec& spec) {
  if (f.is_zero()) throw DegenerateInputError("el_residual of the zero function");
  ELResult r;
  if (const Coefficients* c = f.coefficients()) {
    const Coefficients T = triple_conv_coefficients(*c, 3 * c->band_limit);
    double tf = 0, ff = c->norm_sq(), tt = T.norm_sq();
    for (int l = 0; l <= c->band_limit; ++l)
      for (int m = -l; m <= l; ++m) tf += T.at(l, m) * c->at(l, m);
    r.lambda = tf / ff;
    double d2 = 0;
    for (int l = 0; l <= T.band_limit; ++l)
      for (int m = -l; m <= l; ++m) {
        const double d = T.at(l, m) - r.lambda * c->at(l, m);
        d2 += d * d;
      }
    r.residual = tt > 0 ? std::sqrt(d2 / tt) : 0.0;
    r.phi = tf / (ff * ff);
    return r;
  }
  if (!rule) rule = shared_quadrature(24, 48);
  const SphereFunction T = triple_conv_on_sphere(f, rule, spec);
  const std::vector<double> fv = f.sample(*rule);
  const std::vector<double>& tv = T.samples()->values;
  double tf = 0, ff = 0, tt = 0;
  for (std::size_t i = 0; i < rule->size(); ++i) {
    const double w = rule->weights[i];
    tf += w * tv[i] * fv[i];
    ff += w * fv[i] * fv[i];
    tt += w * tv[i] * tv[i];
  }
  if (!(ff > 0)) throw DegenerateInputError("el_residual of a function vanishing on the rule");
  r.lambda = tf / ff;
  double d2 = 0;
  for (std::size_t i = 0; i < rule->size(); ++i) {
    const double d = tv[i] - r.lambda * fv[i];
    d2 += rule->weights[i] * d * d;
  }
  r.residual = tt > 0 ? std::sqrt(d2 / tt) : 0.0;
  r.phi = tf / (ff * ff);
  return r;
}

const char* to_string(Termination t) {
  return t == Termination::Tolerance ? "tolerance" : "max_iter";
}

namespace {

void make_even(Coefficients& c) {
  for (int l = 1; l <= c.band_limit; l += 2)
    for (int m = -l; m <= l; ++m) c.at(l, m) = 0;
}

void clamp_nonneg(Coefficients& c, const QuadratureRule& rule) {
  const SphereFunction f = SphereFunction::from_coefficients(c);
  std::vector<double> v = f.sample(rule);
  bool neg = false;
  for (double& x : v)
    if (x < 0) {
      x = 0;
      neg = true;
    }
  if (!neg) return;
  auto q = std::make_shared<const QuadratureRule>(rule);
  c = sh_analyze(SphereFunction::from_samples(q, std::move(v)), c.band_limit, rule);
  make_even(c);
}

void normalize(Coefficients& c) {
  const double n = std::sqrt(c.norm_sq());
  if (!(n > 0)) throw DegenerateInputError("search iterate vanished");
  for (double& x : c.c) x /= n;
}

}  // namespace

SearchTrace extremizer_search(const SphereFunction& f0, const SearchOptions& opt) {
  if (opt.band_limit < 0) throw ParameterError("search band limit must be >= 0");
  if (!(opt.damping > 0 && opt.damping <= 1)) throw ParameterError("damping must lie in (0, 1]");
  if (opt.max_iter < 1) throw ParameterError("max_iter must be >= 1");
  if (f0.is_zero()) throw DegenerateInputError("search start is the zero function");
  const int L = opt.band_limit;
  SearchTrace trace;
  trace.initial_phi = phi_functional(f0);

  Coefficients c;
  if (const Coefficients* fc = f0.coefficients()) {
    c = fc->truncated(L);
  } else {
    const QuadratureRule fine = make_quadrature(std::max(64, 2 * L + 2), std::max(128, 4 * L + 4));
    c = sh_analyze(f0, L, fine);
  }
  const QuadratureRule clamp_rule = make_quadrature(2 * L + 2, 4 * L + 4);
  make_even(c);
  clamp_nonneg(c, clamp_rule);
  normalize(c);

  double prev_phi = 0;
  int decreasing = 0;
  for (int it = 0; it < opt.max_iter; ++it) {
    const Coefficients T = triple_conv_coefficients(c, 3 * L);
    double tf = 0;
    for (int l = 0; l <= L; ++l)
      for (int m = -l; m <= l; ++m) tf += T.at(l, m) * c.at(l, m);
    const double ff = c.norm_sq();
    SearchStep step;
    step.lambda = tf / ff;
    step.phi = tf / (ff * ff);
    double d2 = 0;
    const Coefficients& cc = c;
    for (int l = 0; l <= T.band_limit; ++l)
      for (int m = -l; m <= l; ++m) {
        const double d = T.at(l, m) - step.lambda * cc.at(l, m);
        d2 += d * d;
      }
    step.residual = std::sqrt(d2 / T.norm_sq());
    trace.iterates.push_back(step);
    trace.final_f = c;

    if (step.residual < opt.tol) {
      trace.terminated_by = Termination::Tolerance;
      return trace;
    }
    if (it > 0) {
      const double rise = step.phi - prev_phi;
      if (rise >= 0 && rise < opt.phi_stall) {
        trace.terminated_by = Termination::Tolerance;
        return trace;
      }
      decreasing = rise < 0 ? decreasing + 1 : 0;
      if (decreasing >= 5)
        throw SearchDivergedError("phi decreased for 5 consecutive steps", trace);
    }
    prev_phi = step.phi;

    Coefficients next(L);
    for (int l = 0; l <= L; ++l)
      for (int m = -l; m <= l; ++m)
        next.at(l, m) = (1 - opt.damping) * c.at(l, m) + opt.damping * T.at(l, m) / step.lambda;
    make_even(next);
    clamp_nonneg(next, clamp_rule);
    normalize(next);
    c = std::move(next);
  }
  trace.terminated_by = Termination::MaxIter;
  return trace;
}

}  // namespace rlab
