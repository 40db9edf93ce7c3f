#pragma once

#include <optional>
#include <string>
#include <vector>

#include "restriction_lab/convolution.hpp"
#include "restriction_lab/errors.hpp"

namespace rlab {

// Φ(f) = ‖fσ*fσ‖₂² / ‖f‖₂⁴. Analytic inputs without a stored norm use the
// grid's angular rule for ‖f‖₂.
double phi_functional(const SphereFunction& f, std::optional<BallGridSpec> spec = std::nullopt);

// f_⋆(x) = √((f(x)² + f(−x)²)/2). Grid samples on an antipodally closed rule
// are mapped node by node; other inputs give an analytic even function. The
// sign precondition is checked on `check_rule` (default 32 × 64).
SphereFunction antipodal_symmetrize(const SphereFunction& f,
                                    const QuadratureRule* check_rule = nullptr);
SphereFunction abs_function(const SphereFunction& f);

struct SymmetrizationOrbit {
  double phi = 0, psi = 0, alpha = 0, beta = 0;
  void validate() const;
};

double gamma(const SymmetrizationOrbit& o);

enum class GammaDomain { Box, PhiZero };

struct GammaMax {
  double value = 0;
  SymmetrizationOrbit argmax;
  double grid_step = 0;
};

// Dense scan of the box (grid_n points per axis) followed by projected
// Newton refinement from the best grid point.
GammaMax gamma_max_search(int grid_n, GammaDomain domain = GammaDomain::Box);

// Taylor coefficient q(g) of ε ↦ Φ(1 + εg)‖1‖⁴ at ε = 0, summed over the
// harmonic components of an even, mean-zero, band-limited g.
double second_variation(const SphereFunction& g);
// Same quantity from 6⟨gσ*gσ, σ*σ⟩ − 16π²‖g‖² on the ball grid.
double second_variation_direct(const SphereFunction& g);

struct ELResult {
  double residual = 0;
  double lambda = 0;
  double phi = 0;  // ⟨T f, f⟩/‖f‖⁴
};

// λ = ⟨T f, f⟩/‖f‖², residual = ‖T f − λ f‖/‖T f‖. Band-limited inputs go
// through the exact Galerkin route; others are sampled on `rule`.
ELResult el_residual(const SphereFunction& f,
                     std::shared_ptr<const QuadratureRule> rule = nullptr,
                     const TripleConvSpec& spec = {});

enum class Termination { Tolerance, MaxIter };
const char* to_string(Termination t);

struct SearchStep {
  double phi = 0, residual = 0, lambda = 0;
};

struct SearchTrace {
  std::vector<SearchStep> iterates;
  Termination terminated_by = Termination::MaxIter;
  Coefficients final_f;
  double initial_phi = 0;  // Φ of the unprojected start
};

struct SearchOptions {
  int max_iter = 200;
  double tol = 1e-5;
  double damping = 0.5;  // θ; 1 gives the undamped iteration
  int band_limit = 4;
  // Stop when Φ rises by less than this between steps.
  double phi_stall = 1e-13;
};

class SearchDivergedError : public DivergenceError {
 public:
  SearchDivergedError(const std::string& what, SearchTrace trace)
      : DivergenceError(what), trace_(std::move(trace)) {}
  const SearchTrace& trace() const { return trace_; }

 private:
  SearchTrace trace_;
};

// Damped Euler-Lagrange iteration f ← normalize((1 − θ)f + θ T(f)/λ) in the
// space of even spherical polynomials of degree ≤ band_limit, with clamping
// to f ≥ 0 after each step.
SearchTrace extremizer_search(const SphereFunction& f0, const SearchOptions& opt = {});

}  // namespace rlab
