#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "restriction_lab/convolution.hpp"
#include "restriction_lab/paraboloid.hpp"

namespace rlab {

// Indices of the rule's nodes inside the cap, ascending.
std::vector<std::uint32_t> cap_members(const QuadratureRule& rule, const Cap& cap);

// Sample rule used by the multiscale code: fine enough that level k_max caps
// hold a few dozen nodes. Antipodally closed.
std::shared_ptr<const QuadratureRule> multiscale_rule(int k_max);

// Maximal cap families for levels 0..k_max with the nodes of a sample rule
// inside each cap. Cap integrals are sums over those nodes.
class CapHierarchy {
 public:
  static CapHierarchy build(int k_max, std::shared_ptr<const QuadratureRule> rule = nullptr);
  // Process-wide instance for the default rule.
  static std::shared_ptr<const CapHierarchy> shared(int k_max);

  int k_max() const { return static_cast<int>(families_.size()) - 1; }
  const QuadratureRule& rule() const { return *rule_; }
  std::shared_ptr<const QuadratureRule> rule_ptr() const { return rule_; }
  const CapFamily& family(int k) const { return families_.at(static_cast<std::size_t>(k)); }
  const std::vector<std::uint32_t>& members(int k, std::size_t j) const {
    return members_.at(static_cast<std::size_t>(k)).at(j);
  }
  // Σ of rule weights over the cap's nodes.
  double discrete_area(int k, std::size_t j) const {
    return areas_.at(static_cast<std::size_t>(k)).at(j);
  }

 private:
  std::shared_ptr<const QuadratureRule> rule_;
  std::vector<CapFamily> families_;
  std::vector<std::vector<std::vector<std::uint32_t>>> members_;
  std::vector<std::vector<double>> areas_;
};

struct XpNorm {
  double norm4 = 0;  // ‖f‖⁴_{X_p} truncated at k_max
  std::vector<double> level_terms;
  // Share of the k_max term in the total; a large share means the
  // truncation is not yet settled.
  double tail_share = 0;
  double value() const;  // ‖f‖_{X_p}
};

// ‖f‖⁴_{X_p} = Σ_k Σ_j 2^{−4k}(|C|⁻¹∫_C|f|^p)^{4/p} with exact cap areas |C|.
XpNorm xp_norm(const SphereFunction& f, double p, const CapHierarchy& h);
XpNorm xp_norm(const std::vector<double>& samples, double p, const CapHierarchy& h);

// Λ_{k,j}(f) = (W⁻¹∫_C|f|)(W⁻¹∫|f|²)^{−1/2} with W the discrete area of C,
// so that Λ ≤ 1 holds exactly for the discrete sums.
double lambda_kj(const SphereFunction& f, int k, std::size_t j, const CapHierarchy& h);
double lambda_kj(const std::vector<double>& samples, int k, std::size_t j, const CapHierarchy& h);

struct LambdaMax {
  double value = 0;
  int level = 0;
  std::size_t index = 0;
};
// Ties go to the smallest level, then the smallest index.
LambdaMax lambda_max(const std::vector<double>& samples, const CapHierarchy& h);

struct MvvSplit {
  SphereFunction g, h;  // samples on the hierarchy rule
  Cap cap{UnitVector3(), 1.0};
  int level = 0;
  std::size_t index = 0;
  double threshold = 0;  // R
  bool antipodal = false;
};

// g = fχ_E with E = {x ∈ C: f(x) ≤ R} and R the smallest sample value for
// which ∫_C fχ_{f≤R} ≥ ½∫_C f. For even f the set E is extended by −E.
MvvSplit mvv_split(const SphereFunction& f, const CapHierarchy& h);

struct DecomposeOptions {
  double s_est = 0;  // 0 selects S⁴ = 2π
  int max_steps = 50;
  // Stop once ‖G‖₂ < stop_norm·‖f‖₂, i.e. remainder mass below stop_norm².
  double stop_norm = 0.25;
  BallGridSpec grid{24, 16, 33, 48};
};

struct DecompositionPiece {
  SphereFunction f;
  Cap cap{UnitVector3(), 1.0};
  double eps_star = 0;
  double l2_mass = 0;  // ‖f_ν‖₂²/‖f‖₂²
  // ‖G_νσ*G_νσ‖₂ ≤ 4(ε⋆)²S²‖f‖₂², checked rather than assumed since S_est
  // is only an estimate.
  bool sandwich_upper = false;
};

enum class DecomposeStop { StopNorm, ZeroConvolution, MaxSteps };
const char* to_string(DecomposeStop s);

struct DecompositionResult {
  std::vector<DecompositionPiece> pieces;
  SphereFunction remainder;
  double remainder_mass = 0;
  int steps = 0;
  DecomposeStop stopped_by = DecomposeStop::MaxSteps;
  double input_norm_sq = 0;
  // ‖f − Σf_ν − G‖₂/‖f‖₂ at the nodes.
  double reconstruction_error = 0;
};

DecompositionResult decompose(const SphereFunction& f, const CapHierarchy& h,
                              const DecomposeOptions& opt = {});

// Largest ϱ (antipodes identified) between caps of pieces with mass ≥ min_mass.
double max_piece_distance(const DecompositionResult& d, double min_mass);

struct MetricPartition {
  std::vector<std::size_t> first, second;
  double separation = 0;  // realized min distance between the parts
  double bound = 0;       // r/2N
};

MetricPartition metric_partition(std::size_t n,
                                 const std::function<double(std::size_t, std::size_t)>& metric,
                                 std::size_t s1, std::size_t s2);

// ‖χ_Aσ*χ_Bσ‖₂ from ∫_A∫_B (χ_Aσ*χ_Bσ)(a + b), with the density at a + b
// taken exactly from the arcs of the fiber circle inside A and B. Polar rules
// with n radial and 2n angular nodes per cap.
double cap_pair_interaction(const Cap& a, const Cap& b, int n = 24);

struct GaugeProfile {
  std::vector<double> r_grid, height_tail, spatial_tail;
  Cap cap{UnitVector3(), 1.0};
};

// ∫_{|f| ≥ R/r} f² and ∫_{|x − z| ≥ Rr} f², with min(|x − z|, |x + z|) when
// `even` is set; integrals on `rule` (the default is 256 × 512).
GaugeProfile tail_gauge(const SphereFunction& f, const Cap& cap, const std::vector<double>& r_grid,
                        bool even = false, std::shared_ptr<const QuadratureRule> rule = nullptr);

struct SpectralProfile {
  std::vector<double> rho;   // ladder ρ₁ = 2, ρ_{j+1} = ρ_j³
  std::vector<double> mass;  // mass[j] on ρ_j ≤ |ξ| < ρ_{j+1}
  double total = 0;          // (2π)²‖g‖₂² from the samples
};

// ĝ(ξ) = ∫e^{−ix·ξ}g(x)dx through an FFT of the samples.
SpectralProfile spectral_profile(const PlaneFunction& g, int levels);

struct FrequencyGap {
  double s = 0, S = 0;  // S = s³
  double mass = 0;
  SpectralProfile profile;
};

std::optional<FrequencyGap> freq_gap_finder(const PlaneFunction& g, int levels);

struct LowFrequencyMass {
  double mass = 0;  // ∫_{|ξ|≤A}|ĝ|²
  std::vector<double> t, pairing;  // ∫gφ_t with φ_t = e^{−t|y|²/2}
};

LowFrequencyMass low_freq_mass(const PlaneFunction& g, double A);

}  // namespace rlab
