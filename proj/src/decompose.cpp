#include <algorithm>
#include <numeric>

#include "restriction_lab/errors.hpp"
#include "restriction_lab/multiscale.hpp"

namespace rlab {

namespace {

bool samples_even(const std::vector<double>& v, const QuadratureRule& rule) {
  if (!rule.antipodally_closed()) return false;
  double scale = 0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i] - v[rule.antipode(i)]) > 1e-14 * scale) return false;
  return true;
}

double weighted_l2(const std::vector<double>& v, const QuadratureRule& rule) {
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s += rule.weights[i] * v[i] * v[i];
  return s;
}

struct SplitIndices {
  std::vector<char> in_e;
  LambdaMax best;
  double threshold = 0;
  bool antipodal = false;
};

SplitIndices split_indices(const std::vector<double>& f, const CapHierarchy& h) {
  const QuadratureRule& rule = h.rule();
  for (double x : f)
    if (x < -1e-12) throw SignError("mvv_split needs a nonnegative function");
  SplitIndices s;
  s.best = lambda_max(f, h);
  const auto& mem = h.members(s.best.level, s.best.index);
  std::vector<std::uint32_t> order(mem.begin(), mem.end());
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return f[a] < f[b]; });
  double total = 0;
  for (std::uint32_t i : mem) total += rule.weights[i] * std::max(0.0, f[i]);
  double acc = 0;
  s.threshold = order.empty() ? 0.0 : f[order.back()];
  for (std::uint32_t i : order) {
    acc += rule.weights[i] * std::max(0.0, f[i]);
    if (acc >= 0.5 * total) {
      s.threshold = f[i];
      break;
    }
  }
  s.in_e.assign(f.size(), 0);
  for (std::uint32_t i : mem)
    if (f[i] <= s.threshold) s.in_e[i] = 1;
  s.antipodal = samples_even(f, rule);
  if (s.antipodal)
    for (std::uint32_t i : mem)
      if (s.in_e[i]) s.in_e[rule.antipode(i)] = 1;
  return s;
}

}  // namespace

const char* to_string(DecomposeStop s) {
  switch (s) {
    case DecomposeStop::StopNorm:
      return "stop_norm";
    case DecomposeStop::ZeroConvolution:
      return "zero_convolution";
    case DecomposeStop::MaxSteps:
      return "max_steps";
  }
  return "unknown";
}

MvvSplit mvv_split(const SphereFunction& f, const CapHierarchy& h) {
  const std::vector<double> v = f.sample(h.rule());
  const SplitIndices s = split_indices(v, h);
  std::vector<double> g(v.size(), 0.0), r(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) (s.in_e[i] ? g[i] : r[i]) = v[i];
  MvvSplit out;
  out.g = SphereFunction::from_samples(h.rule_ptr(), std::move(g));
  out.h = SphereFunction::from_samples(h.rule_ptr(), std::move(r));
  out.level = s.best.level;
  out.index = s.best.index;
  out.cap = h.family(s.best.level).cap(s.best.index);
  out.threshold = s.threshold;
  out.antipodal = s.antipodal;
  return out;
}

DecompositionResult decompose(const SphereFunction& f, const CapHierarchy& h,
                              const DecomposeOptions& opt) {
  if (opt.max_steps < 1) throw ParameterError("decompose needs max_steps >= 1");
  if (!(opt.s_est >= 0)) throw ParameterError("decompose needs S_est > 0");
  if (!(opt.stop_norm >= 0)) throw ParameterError("decompose needs stop_norm >= 0");
  const QuadratureRule& rule = h.rule();
  const auto rp = h.rule_ptr();
  const std::vector<double> f0 = f.sample(rule);
  const double nf2 = weighted_l2(f0, rule);
  if (!(nf2 > 0)) throw DegenerateInputError("decompose of the zero function");
  const double s_est = opt.s_est > 0 ? opt.s_est : std::pow(2 * kPi, 0.25);
  const double s2 = s_est * s_est;

  DecompositionResult out;
  out.input_norm_sq = nf2;
  std::vector<double> G = f0;
  double eps = 0.5;
  while (out.steps < opt.max_steps) {
    const double ng2 = weighted_l2(G, rule);
    if (std::sqrt(ng2) < opt.stop_norm * std::sqrt(nf2)) {
      out.stopped_by = DecomposeStop::StopNorm;
      break;
    }
    const SphereFunction gs = SphereFunction::from_samples(rp, G);
    const double cn = conv_l2_norm(gs, gs, opt.grid);
    if (cn == 0) {
      out.stopped_by = DecomposeStop::ZeroConvolution;
      break;
    }
    while (cn < eps * eps * s2 * nf2) {
      eps *= 0.5;
      if (eps * eps * s2 * nf2 == 0)
        throw UnderflowError("decompose: epsilon underflow at step " + std::to_string(out.steps) +
                             " with remainder mass " + std::to_string(ng2 / nf2));
    }
    const SplitIndices sp = split_indices(G, h);
    std::vector<double> piece(G.size(), 0.0);
    for (std::size_t i = 0; i < G.size(); ++i)
      if (sp.in_e[i]) {
        piece[i] = G[i];
        G[i] = 0;
      }
    DecompositionPiece p;
    p.l2_mass = weighted_l2(piece, rule) / nf2;
    p.f = SphereFunction::from_samples(rp, std::move(piece));
    p.cap = h.family(sp.best.level).cap(sp.best.index);
    p.eps_star = eps;
    p.sandwich_upper = cn <= 4 * eps * eps * s2 * nf2;
    out.pieces.push_back(std::move(p));
    ++out.steps;
  }
  if (out.steps == opt.max_steps) {
    const double ng2 = weighted_l2(G, rule);
    if (std::sqrt(ng2) < opt.stop_norm * std::sqrt(nf2)) out.stopped_by = DecomposeStop::StopNorm;
  }
  out.remainder_mass = weighted_l2(G, rule) / nf2;
  // Reconstruction at the nodes.
  std::vector<double> diff = f0;
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= G[i];
  for (const auto& p : out.pieces) {
    const std::vector<double>& v = p.f.samples()->values;
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= v[i];
  }
  out.reconstruction_error = std::sqrt(weighted_l2(diff, rule) / nf2);
  out.remainder = SphereFunction::from_samples(rp, std::move(G));
  return out;
}

double max_piece_distance(const DecompositionResult& d, double min_mass) {
  double m = 0;
  for (std::size_t a = 0; a < d.pieces.size(); ++a)
    for (std::size_t b = a + 1; b < d.pieces.size(); ++b)
      if (d.pieces[a].l2_mass >= min_mass && d.pieces[b].l2_mass >= min_mass)
        m = std::max(m, cap_quotient_distance(d.pieces[a].cap, d.pieces[b].cap));
  return m;
}

}  // namespace rlab
