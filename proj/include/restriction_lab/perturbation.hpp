#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace rlab {

// w_ε(t, |x|) = 2π∫₀^∞ J₀(|x|ρ) e^{−(1+it)(ρ²/2 + ερ⁴/8)} (1 + ερ²/2) ρ dρ.
// Gauss-Legendre in ρ on [0, ρ_max]; the node count grows with the number
// of oscillations of the integrand. n_hankel is the floor.
std::complex<double> w_eps(double eps, double t, double xr, int n_hankel = 128);

struct WNormSpec {
  int n_t = 48;       // nodes in θ, t = tan θ, on [0, atan T₀]
  int n_x = 48;       // nodes in u, |x| = u√(1 + t²)
  double t_max = 20;  // T₀
  int n_hankel = 128;
};

struct WNorm {
  double value = 0;  // ‖w_ε‖₄⁴
  double tail = 0;   // contribution of |t| > T₀
  double c = 0, d = 0;  // I(t) ≈ C/t² + D/t⁴ for large t
};

// ‖w_ε‖₄⁴ = ∫_ℝ ∫₀^∞ |w_ε(t, r)|⁴ 2πr dr dt. The range |t| > T₀ is closed
// with the expansion of I(t) = ∫|w_ε(t, ·)|⁴: C from stationary phase, D
// fitted to I(T₀).
WNorm w_l4_norm(double eps, const WNormSpec& spec = {});

// Large-t coefficient C(ε) = lim t²I(t).
double w_l4_tail_coefficient(double eps);

// ∫_{ℝ²} e^{−|y|² − ε|y|⁴/4}(1 + ε|y|²/2) dy and its ε-derivative.
double g_eps_norm(double eps);
double g_eps_norm_derivative(double eps);

struct PerturbationRow {
  double eps = 0, w_l4 = 0, g_l2sq = 0, psi = 0;
};

struct PerturbationScan {
  std::vector<PerturbationRow> rows;
  // One-sided difference quotients of Ψ at 0 with steps h and h/2, and the
  // Richardson combination 2D(h/2) − D(h).
  double fd_step = 0;
  double d_h = 0, d_h2 = 0, psi_prime_0 = 0;
};

PerturbationRow psi_at(double eps, const WNormSpec& spec = {});
PerturbationScan psi_scan(const std::vector<double>& eps_grid, double fd_step = 0.02,
                          const WNormSpec& spec = {});

// λ_k(w) = 2π∫ w(√(2+2t)) (2+2t)^{−1/2} P_k(t) dt.
double weighted_multiplier(const std::function<double(double)>& w, int k);

}  // namespace rlab
