#include "restriction_lab/multiscale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "restriction_lab/errors.hpp"
#include "restriction_lab/parallel.hpp"

namespace rlab {

std::vector<std::uint32_t> cap_members(const QuadratureRule& rule, const Cap& cap) {
  if (rule.cos_theta.empty()) throw ParameterError("cap_members needs a product rule");
  const Vec3& z = cap.center().vec();
  const double c = std::sqrt(std::max(0.0, 1 - cap.radius() * cap.radius()));
  const double alpha = std::acos(c);
  const double tz = std::acos(std::clamp(z.z, -1.0, 1.0));
  const double sz = std::sqrt(std::max(0.0, 1 - z.z * z.z));
  const double phz = std::atan2(z.y, z.x);
  // Rings whose polar angle lies within α of θ_z, with a small margin.
  const double lo = std::cos(std::min(kPi, tz + alpha)) - 1e-12;
  const double hi = std::cos(std::max(0.0, tz - alpha)) + 1e-12;
  const auto& ct = rule.cos_theta;
  const auto first = std::lower_bound(ct.begin(), ct.end(), lo) - ct.begin();
  const auto last = std::upper_bound(ct.begin(), ct.end(), hi) - ct.begin();
  const int np = rule.n_phi;
  const double dphi = 2 * kPi / np;
  std::vector<std::uint32_t> out;
  for (auto i = first; i < last; ++i) {
    const double cti = ct[static_cast<std::size_t>(i)];
    const double sti = std::sqrt(std::max(0.0, 1 - cti * cti));
    const std::size_t base = static_cast<std::size_t>(i) * np;
    auto test = [&](int j) {
      const std::size_t k = base + static_cast<std::size_t>(((j % np) + np) % np);
      if (cap.contains(rule.nodes[k])) out.push_back(static_cast<std::uint32_t>(k));
    };
    const double den = sti * sz;
    if (den < 1e-12) {
      for (int j = 0; j < np; ++j) test(j);
      continue;
    }
    const double q = (c - cti * z.z) / den;
    if (q > 1 + 1e-12) continue;
    if (q <= -1) {
      for (int j = 0; j < np; ++j) test(j);
      continue;
    }
    const double delta = std::acos(std::clamp(q, -1.0, 1.0));
    const int j0 = static_cast<int>(std::floor((phz - delta) / dphi)) - 1;
    const int j1 = static_cast<int>(std::ceil((phz + delta) / dphi)) + 1;
    if (j1 - j0 + 1 >= np) {
      for (int j = 0; j < np; ++j) test(j);
    } else {
      for (int j = j0; j <= j1; ++j) test(j);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::shared_ptr<const QuadratureRule> multiscale_rule(int k_max) {
  if (k_max < 0 || k_max > 8) throw ParameterError("multiscale levels must lie in [0, 8]");
  int nt = std::max(32, 3 << k_max);
  nt += nt % 2;
  return shared_quadrature(nt, 2 * nt);
}

CapHierarchy CapHierarchy::build(int k_max, std::shared_ptr<const QuadratureRule> rule) {
  if (k_max < 0 || k_max > 8) throw ParameterError("multiscale levels must lie in [0, 8]");
  CapHierarchy h;
  h.rule_ = rule ? std::move(rule) : multiscale_rule(k_max);
  for (int k = 0; k <= k_max; ++k) {
    h.families_.push_back(maximal_cap_centers(k, candidate_grid_for_level(k)));
    const CapFamily& fam = h.families_.back();
    std::vector<std::vector<std::uint32_t>> mem(fam.centers.size());
    std::vector<double> area(fam.centers.size());
    parallel_for(fam.centers.size(), [&](std::size_t j) {
      mem[j] = cap_members(*h.rule_, fam.cap(j));
      double w = 0;
      for (std::uint32_t i : mem[j]) w += h.rule_->weights[i];
      area[j] = w;
    });
    h.members_.push_back(std::move(mem));
    h.areas_.push_back(std::move(area));
  }
  return h;
}

std::shared_ptr<const CapHierarchy> CapHierarchy::shared(int k_max) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const CapHierarchy>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[k_max];
  if (!slot) slot = std::make_shared<const CapHierarchy>(build(k_max));
  return slot;
}

double XpNorm::value() const { return std::pow(norm4, 0.25); }

XpNorm xp_norm(const std::vector<double>& f, double p, const CapHierarchy& h) {
  if (!(p >= 1 && p < 2)) throw ParameterError("xp_norm needs p in [1, 2)");
  const QuadratureRule& rule = h.rule();
  if (f.size() != rule.size()) throw ParameterError("xp_norm: samples do not match the rule");
  std::vector<double> fp(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) fp[i] = std::pow(std::abs(f[i]), p);
  XpNorm out;
  for (int k = 0; k <= h.k_max(); ++k) {
    const CapFamily& fam = h.family(k);
    const double area = fam.cap(0).area();
    double level = 0;
    for (std::size_t j = 0; j < fam.centers.size(); ++j) {
      double s = 0;
      for (std::uint32_t i : h.members(k, j)) s += rule.weights[i] * fp[i];
      level += std::pow(s / area, 4 / p);
    }
    level *= std::ldexp(1.0, -4 * k);
    out.level_terms.push_back(level);
    out.norm4 += level;
  }
  out.tail_share = out.norm4 > 0 ? out.level_terms.back() / out.norm4 : 0.0;
  return out;
}

XpNorm xp_norm(const SphereFunction& f, double p, const CapHierarchy& h) {
  return xp_norm(f.sample(h.rule()), p, h);
}

namespace {

double total_l2(const std::vector<double>& f, const QuadratureRule& rule) {
  double s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) s += rule.weights[i] * f[i] * f[i];
  return s;
}

}  // namespace

double lambda_kj(const std::vector<double>& f, int k, std::size_t j, const CapHierarchy& h) {
  const QuadratureRule& rule = h.rule();
  if (f.size() != rule.size()) throw ParameterError("lambda_kj: samples do not match the rule");
  if (k < 0 || k > h.k_max() || j >= h.family(k).centers.size())
    throw ParameterError("lambda_kj: cap index out of range");
  const double b = total_l2(f, rule);
  if (!(b > 0)) throw DegenerateInputError("lambda_kj of the zero function");
  double a = 0;
  for (std::uint32_t i : h.members(k, j)) a += rule.weights[i] * std::abs(f[i]);
  const double w = h.discrete_area(k, j);
  if (!(w > 0)) return 0.0;
  return a / std::sqrt(w * b);
}

double lambda_kj(const SphereFunction& f, int k, std::size_t j, const CapHierarchy& h) {
  return lambda_kj(f.sample(h.rule()), k, j, h);
}

LambdaMax lambda_max(const std::vector<double>& f, const CapHierarchy& h) {
  const QuadratureRule& rule = h.rule();
  if (f.size() != rule.size()) throw ParameterError("lambda_max: samples do not match the rule");
  const double b = total_l2(f, rule);
  if (!(b > 0)) throw DegenerateInputError("lambda_max of the zero function");
  LambdaMax best;
  best.value = -1;
  for (int k = 0; k <= h.k_max(); ++k)
    for (std::size_t j = 0; j < h.family(k).centers.size(); ++j) {
      const double w = h.discrete_area(k, j);
      if (!(w > 0)) continue;
      double a = 0;
      for (std::uint32_t i : h.members(k, j)) a += rule.weights[i] * std::abs(f[i]);
      const double v = a / std::sqrt(w * b);
      if (v > best.value) best = {v, k, j};
    }
  return best;
}

MetricPartition metric_partition(std::size_t n,
                                 const std::function<double(std::size_t, std::size_t)>& d,
                                 std::size_t s1, std::size_t s2) {
  if (n < 2) throw ParameterError("metric_partition needs at least two points");
  if (s1 >= n || s2 >= n || s1 == s2) throw ParameterError("metric_partition: bad diameter pair");
  const double r = d(s1, s2);
  if (!(r > 0)) throw ParameterError("metric_partition: diameter pair at distance 0");
  const double step = r / (2.0 * n);
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = d(s1, i);
  // 2N − 1 shells [kδ, (k+1)δ) below r and at most N − 2 other points: some
  // shell is empty.
  std::size_t shell = 0;
  for (std::size_t k = 1; k + 1 <= 2 * n; ++k) {
    const double a = k * step, b = (k + 1) * step;
    bool empty = true;
    for (std::size_t i = 0; i < n && empty; ++i)
      if (dist[i] >= a && dist[i] < b) empty = false;
    if (empty) {
      shell = k;
      break;
    }
  }
  if (shell == 0) throw Error("metric_partition: no empty shell; the metric violates the triangle inequality");
  MetricPartition out;
  out.bound = step;
  for (std::size_t i = 0; i < n; ++i) (dist[i] < shell * step ? out.first : out.second).push_back(i);
  out.separation = std::numeric_limits<double>::infinity();
  for (std::size_t a : out.first)
    for (std::size_t b : out.second) out.separation = std::min(out.separation, d(a, b));
  return out;
}

GaugeProfile tail_gauge(const SphereFunction& f, const Cap& cap, const std::vector<double>& r_grid,
                        bool even, std::shared_ptr<const QuadratureRule> rule) {
  for (double R : r_grid)
    if (!(R >= 1)) throw ParameterError("tail_gauge: R values must be >= 1");
  if (!rule) rule = shared_quadrature(256, 512);
  const std::vector<double> v = f.sample(*rule);
  const double r = cap.radius();
  const Vec3& z = cap.center().vec();
  std::vector<double> dist(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec3& x = rule->nodes[i];
    double d = (x - z).norm();
    if (even) d = std::min(d, (x + z).norm());
    dist[i] = d;
  }
  GaugeProfile g;
  g.cap = cap;
  g.r_grid = r_grid;
  for (double R : r_grid) {
    double ht = 0, st = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double m = rule->weights[i] * v[i] * v[i];
      if (std::abs(v[i]) >= R / r) ht += m;
      if (dist[i] >= R * r) st += m;
    }
    g.height_tail.push_back(ht);
    g.spatial_tail.push_back(st);
  }
  return g;
}

namespace {

struct CapNodes {
  std::vector<Vec3> x;
  std::vector<double> w;
};

CapNodes polar_cap_nodes(const Cap& cap, int n) {
  const double alpha = std::asin(cap.radius());
  const GaussLegendre gl = gauss_legendre(n, 0.0, alpha);
  const int nb = 2 * n;
  Vec3 e1, e2;
  const Vec3& z = cap.center().vec();
  orthonormal_frame(z, e1, e2);
  CapNodes c;
  for (int i = 0; i < n; ++i) {
    const double ca = std::cos(gl.x[i]), sa = std::sin(gl.x[i]);
    for (int j = 0; j < nb; ++j) {
      const double b = 2 * kPi * (j + 0.5) / nb;
      c.x.push_back(z * ca + (e1 * std::cos(b) + e2 * std::sin(b)) * sa);
      c.w.push_back(gl.w[i] * sa * 2 * kPi / nb);
    }
  }
  return c;
}

// Arc {φ: A cos φ + B sin φ > K} as (center, half width); half width 0 is
// empty and π is the full circle.
std::pair<double, double> arc_above(double A, double B, double K) {
  const double R = std::hypot(A, B);
  if (K >= R) return {0.0, 0.0};
  if (K <= -R) return {0.0, kPi};
  return {std::atan2(B, A), std::acos(K / R)};
}

double arc_overlap(std::pair<double, double> p, std::pair<double, double> q) {
  if (p.second == 0 || q.second == 0) return 0;
  if (p.second >= kPi) return 2 * q.second;
  if (q.second >= kPi) return 2 * p.second;
  double total = 0;
  for (int k = -1; k <= 1; ++k) {
    const double c = q.first - p.first + 2 * kPi * k;
    const double lo = std::max(-p.second, c - q.second);
    const double hi = std::min(p.second, c + q.second);
    if (hi > lo) total += hi - lo;
  }
  return total;
}

}  // namespace

double cap_pair_interaction(const Cap& a, const Cap& b, int n) {
  if (n < 4) throw ParameterError("cap_pair_interaction needs n >= 4");
  const CapNodes na = polar_cap_nodes(a, n), nb = polar_cap_nodes(b, n);
  const Vec3& za = a.center().vec();
  const Vec3& zb = b.center().vec();
  const double ca = std::sqrt(1 - a.radius() * a.radius());
  const double cb = std::sqrt(1 - b.radius() * b.radius());
  std::vector<double> rows(na.x.size());
  parallel_for(na.x.size(), [&](std::size_t i) {
    double acc = 0;
    for (std::size_t j = 0; j < nb.x.size(); ++j) {
      const Vec3 x = na.x[i] + nb.x[j];
      const double r = x.norm();
      if (r < 1e-12 || r >= 2) continue;
      const Vec3 u = x * (1 / r);
      Vec3 e1, e2;
      orthonormal_frame(u, e1, e2);
      const double s = std::sqrt(std::max(0.0, 1 - 0.25 * r * r));
      // y(φ) = (r/2)u + s(e1 cos φ + e2 sin φ); y ∈ A and x − y ∈ B.
      const auto pa = arc_above(s * e1.dot(za), s * e2.dot(za), ca - 0.5 * r * u.dot(za));
      const auto pb = arc_above(-s * e1.dot(zb), -s * e2.dot(zb), cb - 0.5 * r * u.dot(zb));
      acc += nb.w[j] * arc_overlap(pa, pb) / r;
    }
    rows[i] = na.w[i] * acc;
  });
  double total = 0;
  for (double v : rows) total += v;
  return std::sqrt(std::max(0.0, total));
}

}  // namespace rlab
