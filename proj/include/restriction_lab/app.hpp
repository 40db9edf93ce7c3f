#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "restriction_lab/convolution.hpp"
#include "restriction_lab/errors.hpp"
#include "restriction_lab/extremal.hpp"

namespace rlab {

// Every field maps to a key of the same name in the JSON config file.
struct RunConfig {
  int n_theta = 48;
  int n_phi = 97;
  int n_radial = 64;
  int n_circle = 96;
  int band_limit = 4;
  double s_est = 0;  // 0 selects S⁴ = 2π
  std::uint64_t seed = 1;
  int max_iter = 200;
  double tol = 1e-5;
  double damping = 0.5;
  int k_max = 6;
  std::string start = "constant";  // search start
  std::string input = "constant";  // decompose input (function spec)
  double eps_max = 0.2;
  int n_eps = 5;
  std::string out;
  // Per-check relative tolerance overrides, keyed by check name.
  std::map<std::string, double> tolerances;

  void validate() const;
  BallGridSpec ball_grid() const;
  double s_est_value() const;
  // JSON object with every field; doubles printed with 17 significant digits
  // so that parse(serialize(c)) == c.
  std::string to_json() const;
  // Unknown keys and type mismatches are usage errors.
  static RunConfig from_json(const std::string& text);
  static RunConfig load(const std::string& path);
  bool operator==(const RunConfig&) const = default;
};

enum class CheckKind { Equal, AtLeast, AtMost };

struct Check {
  std::string name;
  double expected = 0, actual = 0, rel_tol = 0;
  CheckKind kind = CheckKind::Equal;
  bool pass = false;
};

// The tolerance is relative unless expected == 0, where it is absolute.
bool check_passes(CheckKind kind, double expected, double actual, double rel_tol);

struct CheckReport {
  std::string suite;
  std::vector<Check> checks;

  void add(const std::string& name, double expected, double actual, double rel_tol,
           CheckKind kind = CheckKind::Equal);
  bool overall_pass() const;
  std::string to_json() const;
};

// Scientific notation with 12 significant digits.
std::string format_double(double v);
// format_double for finite values, null otherwise.
std::string json_number(double v);
std::string json_escape(const std::string& s);

// constant, harmonic(l,m), cap(z1,z2,z3,r), cappair(r), gaussiancap(r),
// random(L,seed), or a path to a JSON sample file {n_theta, n_phi, values}.
SphereFunction parse_function_spec(const std::string& spec);
// Nonnegative even polynomial of degree ≤ L: the even part of p² for a
// random p of degree ⌊L/2⌋ with coefficients uniform in [−1, 1].
SphereFunction random_function(int L, std::uint64_t seed);
SphereFunction cap_pair_bump(double r);

// mt19937_64 seeded with `seed`; uniforms are (x >> 11)·2⁻⁵³.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }  // [0, 1)
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

 private:
  std::mt19937_64 gen_;
};

struct CommandOutput {
  std::string csv;
  std::string json;
  bool passed = true;
};

const std::vector<std::string>& verify_suites();
CheckReport cmd_verify(const std::string& suite, const RunConfig& cfg);
// A diverged search returns its partial trace with passed = false.
CommandOutput cmd_search(const RunConfig& cfg);
std::string search_csv(const SearchTrace& trace);
CommandOutput cmd_trials(const std::string& kind, const RunConfig& cfg);
CommandOutput cmd_decompose(const RunConfig& cfg);
CommandOutput cmd_scan_perturbation(const RunConfig& cfg);

// Writes to path.tmp and renames.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace rlab
