// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <json.hpp>
#include <string>
#include <vector>

#include "restriction_lab/app.hpp"
#include "restriction_lab/convolution.hpp"
#include "restriction_lab/extremal.hpp"
#include "restriction_lab/multiscale.hpp"
#include "restriction_lab/paraboloid.hpp"
#include "restriction_lab/perturbation.hpp"

using namespace rlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void need(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [failed]");
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

int failures = 0;

void run(int n, const char* title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", n, title, o.detail.c_str(), t);
  std::fflush(stdout);
}

Coefficients random_coefficients(int L, Rng& rng) {
  Coefficients c(L);
  for (double& v : c.c) v = rng.uniform(-1, 1);
  return c;
}

// Checks of a trials report, looked up by name prefix.
bool report_passes(const nlohmann::json& rep, const std::string& prefix) {
  bool any = false;
  for (const auto& c : rep["checks"])
    if (c["name"].get<std::string>().rfind(prefix, 0) == 0) {
      any = true;
      if (!c["pass"].get<bool>()) return false;
    }
  return any;
}

std::vector<std::vector<double>> csv_rows(const std::string& csv) {
  std::vector<std::vector<double>> rows;
  std::size_t pos = csv.find('\n') + 1;
  while (pos < csv.size()) {
    const std::size_t end = csv.find('\n', pos);
    std::vector<double> row;
    std::size_t a = pos;
    while (a < end) {
      const std::size_t b = std::min(csv.find(',', a), end);
      row.push_back(std::stod(csv.substr(a, b - a)));
      a = b + 1;
    }
    rows.push_back(row);
    pos = end + 1;
  }
  return rows;
}

}  // namespace

int main() {
  const RunConfig cfg;

  run(1, "constant suite", [&] {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const SphereFunction one = SphereFunction::constant(1.0);
    const BallGridSpec grid = cfg.ball_grid();
    const double n = conv_l2_norm(one, one, grid);
    double area = 0;
    const auto rule = shared_quadrature(cfg.n_theta, cfg.n_phi);
    for (double w : rule->weights) area += w;
    const double phi = phi_functional(one, grid);
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.need(rel(n * n, 32 * std::pow(kPi, 3)) <= 1e-4, fmt("|s*s|^2 rel err %.2e", rel(n * n, 32 * std::pow(kPi, 3))));
    o.need(rel(area, 4 * kPi) <= 1e-10, fmt("|1|^2 rel err %.2e", rel(area, 4 * kPi)));
    o.need(rel(phi, 2 * kPi) <= 1e-4, fmt("Phi(1) rel err %.2e", rel(phi, 2 * kPi)));
    o.need(t < 60, fmt("runtime %.2f s", t));
    return o;
  });

  run(2, "Funk-Hecke multipliers", [&] {
    Outcome o;
    const Kernel1D K = Kernel1D::inverse_chord();
    double worst = 0, diag = 0;
    for (int k = 0; k <= 10; ++k) {
      const double want = 4 * kPi / (2 * k + 1);
      worst = std::max(worst, std::abs(funk_hecke_multiplier(K, k) - want));
      for (int m : {-k, 0, k}) {
        const SphereFunction Y = SphereFunction::harmonic(k, m);
        const Coefficients c = *kernel_conv(Y, K).coefficients();
        double r = 0;
        for (std::size_t i = 0; i < c.c.size(); ++i) {
          const double e = c.c[i] - (static_cast<int>(i) == sh_index(k, m) ? want : 0.0);
          r += e * e;
        }
        diag = std::max(diag, std::sqrt(r));
      }
    }
    o.need(worst <= 1e-8, fmt("max |lambda_k - 4pi/(2k+1)| %.2e", worst));
    o.need(diag < 1e-8, fmt("diagonality residual %.2e", diag));
    return o;
  });

  run(3, "second variation at constants", [&] {
    Outcome o;
    const SphereFunction Y2 = SphereFunction::harmonic(2, 0);
    const double q = second_variation(Y2);
    const double want = -32 * kPi * kPi / 5;
    o.need(rel(q, want) <= 1e-4, fmt("q(Y2) = %.8f, rel err %.2e", q, rel(q, want)));
    const double h = 0.02, n4 = 16 * kPi * kPi;
    const auto F = [&](double e) {
      Coefficients c(2);
      c.at(0, 0) = std::sqrt(4 * kPi);
      c.at(2, 0) = e;
      return phi_functional(SphereFunction::from_coefficients(c)) * n4;
    };
    const double d2 = (F(h) - 2 * F(0) + F(-h)) / (h * h);
    o.need(d2 < 0, fmt("FD second derivative %.6f", d2));
    o.need(rel(d2, 2 * q) <= 0.02, fmt("vs 2q rel err %.2e", rel(d2, 2 * q)));
    return o;
  });

  run(4, "Gamma functional", [&] {
    Outcome o;
    const GammaMax g = gamma_max_search(64);
    o.need(std::abs(g.value - 1.5) <= 1e-6, fmt("max %.12f", g.value));
    const double q = kPi / 4;
    const double off = std::max({std::abs(g.argmax.phi - q), std::abs(g.argmax.psi - q),
                                 std::abs(g.argmax.alpha - q), std::abs(g.argmax.beta - q)});
    o.need(off <= g.grid_step, fmt("argmax offset %.2e (grid step %.4f)", off, g.grid_step));
    // Uniqueness: every grid point within 1e-3 of the max lies next to (π/4)⁴.
    const int n = 33;
    const double step = kPi / 2 / (n - 1);
    double far = 0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            const SymmetrizationOrbit p{a * step, b * step, c * step, d * step};
            if (gamma(p) < 1.5 - 1e-3) continue;
            far = std::max({far, std::abs(p.phi - q), std::abs(p.psi - q), std::abs(p.alpha - q),
                            std::abs(p.beta - q)});
          }
    o.need(far <= 2 * step, fmt("near-max points within %.4f of (pi/4)^4", far));
    const double z = gamma({0, 0, 0, 0});
    o.need(z == 1.0, fmt("Gamma(0,0,0,0) = %.17g", z));
    return o;
  });

  run(5, "paraboloid comparison and cap concentration", [&] {
    Outcome o;
    const double p = parab_functional(PlaneFunction::gaussian());
    o.need(rel(p, kPi) <= 1e-4, fmt("P(gaussian) rel err %.2e", rel(p, kPi)));
    const double ratio = phi_functional(SphereFunction::constant(1.0)) / p;
    o.need(std::abs(ratio - 2) <= 2e-3, fmt("Phi(1)/P = %.8f", ratio));
    const CommandOutput t = cmd_trials("cap_concentration", cfg);
    const auto rep = nlohmann::json::parse(t.json);
    const auto rows = csv_rows(t.csv);
    std::string vals;
    for (const auto& r : rows) vals += fmt(" %.3g:%.5f", r[0], r[1]);
    o.need(report_passes(rep, "phi_decreasing_in_r"), "Phi decreasing in r over r = 0.5, 0.25, 0.125");
    o.need(report_passes(rep, "phi_below_2pi"), "all Phi < 2pi");
    o.need(report_passes(rep, "phi_r0125"), fmt("Phi(0.125) = %.5f in (4.5, 5.2)", rows[2][1]));
    o.need(report_passes(rep, "limit_gap"),
           fmt("limit gap at r = %.5f is %.2e", rows.back()[0], rows.back()[2]));
    const double golden[] = {4.661520, 4.725251, 4.729594, 4.717015, 4.713541};
    double dev = 0;
    for (std::size_t i = 0; i < rows.size() && i < 5; ++i) dev = std::max(dev, rel(rows[i][1], golden[i]));
    o.need(rows.size() == 5 && dev <= 1e-5, "goldens" + vals);
    return o;
  });

  run(6, "perturbation", [&] {
    Outcome o;
    const double w0 = 8 * std::pow(kPi, 6);
    const WNorm n = w_l4_norm(0);
    o.need(rel(n.value, w0) <= 1e-4, fmt("|w0|^4 = %.6f, rel err %.2e", n.value, rel(n.value, w0)));
    const PerturbationScan s = psi_scan({0.0});
    o.need(std::abs(s.psi_prime_0 - 0.25) <= 0.02, fmt("Psi'(0) = %.6f", s.psi_prime_0));
    const double gd = g_eps_norm_derivative(0);
    o.need(std::abs(gd) <= 1e-6, fmt("d|g|^2/deps = %.2e", gd));
    const double e = std::exp(s.rows[0].psi), want = std::pow(2 * kPi, 3) * kPi;
    o.need(rel(e, want) <= 1e-3, fmt("exp(Psi(0)) rel err %.2e", rel(e, want)));
    return o;
  });

  run(7, "identities and symmetrization", [&] {
    Outcome o;
    Rng rng(cfg.seed);
    double refl = 0, swap = 0;
    const int L = 2;
    const BallGridSpec g = BallGridSpec::exact_for(L, L, L, L);
    for (int t = 0; t < 100; ++t) {
      SphereFunction f[4];
      for (auto& x : f) x = SphereFunction::from_coefficients(random_coefficients(L, rng));
      const double a = conv_l2_norm(f[0], f[1], g), b = conv_l2_norm(f[0], f[1].reflected(), g);
      refl = std::max(refl, std::abs(a - b) / a);
      const double lhs = conv_inner(f[0], f[1], f[2], f[3], g);
      const double rhs = conv_inner(f[0], f[2].reflected(), f[1].reflected(), f[3], g);
      swap = std::max(swap, std::abs(lhs - rhs) / (a * conv_l2_norm(f[2], f[3], g)));
    }
    o.need(refl <= 1e-6, fmt("reflection max rel dev %.2e", refl));
    o.need(swap <= 1e-6, fmt("swap max rel dev %.2e", swap));
    const BallGridSpec star_grid{32, 24, 49, 48};
    double gap = 1e300;
    for (int t = 0; t < 200; ++t) {
      const Coefficients p = random_coefficients(2, rng);
      const QuadratureRule rule = make_quadrature(6, 10);
      const SphereFunction f = SphereFunction::from_coefficients(sh_analyze(
          [&p](const Vec3& x) { return std::pow(sh_synthesize(p, x), 2); }, 4, rule));
      gap = std::min(gap, phi_functional(antipodal_symmetrize(f), star_grid) - phi_functional(f));
    }
    o.need(gap >= -1e-6, fmt("min Phi(f*) - Phi(f) over 200 trials %.4f", gap));
    return o;
  });

  run(8, "decomposition", [&] {
    Outcome o;
    const auto h = CapHierarchy::shared(cfg.k_max);
    const auto rule = h->rule_ptr();
    int steps = 0;
    double recon = 0, mass = 0;
    bool mono = true;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const SphereFunction f =
          SphereFunction::from_samples(rule, random_function(6, 1000 + seed).sample(*rule));
      const DecompositionResult d = decompose(f, *h);
      steps = std::max(steps, d.steps);
      recon = std::max(recon, d.reconstruction_error);
      double m = 0;
      for (std::size_t i = 0; i < d.pieces.size(); ++i) {
        m += d.pieces[i].l2_mass;
        if (i && d.pieces[i].eps_star > d.pieces[i - 1].eps_star) mono = false;
      }
      mass = std::max(mass, m);
    }
    o.need(steps <= 50, fmt("max steps %.0f", steps));
    o.need(recon < 1e-10, fmt("max reconstruction error %.2e", recon));
    o.need(mass <= 1 + 1e-12, fmt("max piece mass sum %.6f", mass));
    o.need(mono, "eps* nonincreasing");
    // Near-extremal inputs: search outputs from random starts.
    double bound = 0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      SearchOptions opt;
      const SearchTrace tr = extremizer_search(random_function(4, seed), opt);
      const SphereFunction fe = SphereFunction::from_coefficients(tr.final_f);
      const DecompositionResult d =
          decompose(SphereFunction::from_samples(rule, fe.sample(*rule)), *h);
      bound = std::max(bound, max_piece_distance(d, 0.05));
    }
    o.need(std::isfinite(bound), fmt("near-extremal pairwise rho bound %.4f", bound));
    return o;
  });

  run(9, "cap interaction", [&] {
    Outcome o;
    const CommandOutput t = cmd_trials("cap_interaction", cfg);
    const auto rep = nlohmann::json::parse(t.json);
    const auto rows = csv_rows(t.csv);
    o.need(report_passes(rep, "nonincreasing_"), fmt("nonincreasing over %.0f rows", rows.size()));
    o.need(report_passes(rep, "self_interaction_max"), fmt("rho = 0 value %.4f is the max", rows[0][1]));
    o.need(report_passes(rep, "far_ratio"),
           fmt("ratio at rho = %.2f is %.4f", rows.back()[0], rows.back()[1] / rows[0][1]));
    return o;
  });

  run(10, "search never exceeds 2pi", [&] {
    Outcome o;
    double top = 0, worst_res = 0;
    int converged = 0, diverged = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      SearchOptions opt;
      opt.band_limit = cfg.band_limit;
      SearchTrace tr;
      try {
        tr = extremizer_search(random_function(cfg.band_limit, seed), opt);
      } catch (const SearchDivergedError& e) {
        tr = e.trace();
        ++diverged;
      }
      for (const SearchStep& s : tr.iterates) top = std::max(top, s.phi);
      if (tr.terminated_by == Termination::Tolerance) {
        ++converged;
        worst_res = std::max(worst_res, tr.iterates.back().residual);
      }
    }
    o.need(top <= 2 * kPi + 1e-4, fmt("max Phi over all iterates %.10f (2pi = %.10f)", top, 2 * kPi));
    o.need(worst_res < 1e-4, fmt("max residual of converged runs %.2e", worst_res));
    o.detail += fmt("; %.0f of 50 converged, %.0f diverged", converged, diverged);
    return o;
  });

  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
