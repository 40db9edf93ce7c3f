#include <fstream>
#include <json.hpp>
#include <sstream>

#include "restriction_lab/app.hpp"
#include "restriction_lab/paraboloid.hpp"

namespace rlab {

SphereFunction random_function(int L, std::uint64_t seed) {
  if (L < 0 || L > 32) throw ParameterError("random function band limit must lie in [0, 32]");
  const int d = L / 2;
  Rng rng(seed);
  Coefficients p(d);
  for (double& x : p.c) x = rng.uniform(-1.0, 1.0);
  const SphereFunction P = SphereFunction::from_coefficients(std::move(p));
  const QuadratureRule rule = make_quadrature(2 * d + 2, 4 * d + 2);
  Coefficients q = sh_analyze(
      [&P](const Vec3& x) {
        const double a = P.value(x), b = P.value(-x);
        return 0.5 * (a * a + b * b);
      },
      2 * d, rule);
  // Odd coefficients vanish exactly for the even part.
  for (int l = 1; l <= q.band_limit; l += 2)
    for (int m = -l; m <= l; ++m) q.at(l, m) = 0.0;
  return SphereFunction::from_coefficients(std::move(q));
}

SphereFunction cap_pair_bump(double r) {
  if (!(r > 0 && r <= 1)) throw ParameterError("cappair radius must lie in (0, 1]");
  AnalyticTraits t;
  t.zonal = true;
  t.even = true;
  return SphereFunction::analytic(
      [r](const Vec3& p) {
        if (p.z == 0) return 0.0;
        const double s = (p.x * p.x + p.y * p.y) / (r * r);
        return s < 1 ? (1 - s) * (1 - s) : 0.0;
      },
      t);
}

namespace {

double parse_number(const std::string& s, const std::string& spec) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("function spec '" + spec + "': bad number '" + s + "'");
  }
  while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
  if (used != s.size()) throw UsageError("function spec '" + spec + "': bad number '" + s + "'");
  return v;
}

int parse_integer(const std::string& s, const std::string& spec) {
  const double v = parse_number(s, spec);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw UsageError("function spec '" + spec + "': expected an integer, got '" + s + "'");
  return static_cast<int>(v);
}

SphereFunction load_sample_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open sample file '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(s.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("sample file '" + path + "': " + e.what());
  }
  if (!j.is_object() || !j.contains("n_theta") || !j.contains("n_phi") || !j.contains("values"))
    throw UsageError("sample file '" + path + "' needs n_theta, n_phi and values");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "n_theta" && it.key() != "n_phi" && it.key() != "values")
      throw UsageError("sample file '" + path + "': unknown key '" + it.key() + "'");
  if (!j["n_theta"].is_number_integer() || !j["n_phi"].is_number_integer() || !j["values"].is_array())
    throw UsageError("sample file '" + path + "': wrong field types");
  const int nt = j["n_theta"].get<int>(), np = j["n_phi"].get<int>();
  if (nt < 2 || np < 4) throw UsageError("sample file '" + path + "': grid too small");
  std::vector<double> v;
  v.reserve(j["values"].size());
  for (const auto& x : j["values"]) {
    if (!x.is_number()) throw UsageError("sample file '" + path + "': values must be numbers");
    v.push_back(x.get<double>());
  }
  if (v.size() != static_cast<std::size_t>(nt) * np)
    throw UsageError("sample file '" + path + "': expected n_theta*n_phi values");
  return SphereFunction::from_samples(shared_quadrature(nt, np), std::move(v));
}

}  // namespace

SphereFunction parse_function_spec(const std::string& spec) {
  const auto open = spec.find('(');
  if (open == std::string::npos) {
    if (spec == "constant") return SphereFunction::constant(1.0);
    if (spec.empty()) throw UsageError("empty function spec");
    return load_sample_file(spec);
  }
  if (spec.back() != ')') throw UsageError("function spec '" + spec + "': missing ')'");
  const std::string name = spec.substr(0, open);
  std::vector<std::string> args;
  {
    std::string inner = spec.substr(open + 1, spec.size() - open - 2);
    std::stringstream ss(inner);
    std::string a;
    while (std::getline(ss, a, ',')) args.push_back(a);
    if (!inner.empty() && inner.back() == ',') args.push_back("");
  }
  auto need = [&](std::size_t n) {
    if (args.size() != n)
      throw UsageError("function spec '" + spec + "': " + name + " takes " + std::to_string(n) +
                       " arguments");
  };
  try {
    if (name == "constant") {
      need(1);
      return SphereFunction::constant(parse_number(args[0], spec));
    }
    if (name == "harmonic") {
      need(2);
      return SphereFunction::harmonic(parse_integer(args[0], spec), parse_integer(args[1], spec));
    }
    if (name == "cap") {
      need(4);
      const Cap c(UnitVector3(parse_number(args[0], spec), parse_number(args[1], spec),
                              parse_number(args[2], spec)),
                  parse_number(args[3], spec));
      return SphereFunction::analytic([c](const Vec3& p) { return c.contains(p) ? 1.0 : 0.0; });
    }
    if (name == "cappair") {
      need(1);
      return cap_pair_bump(parse_number(args[0], spec));
    }
    if (name == "gaussiancap") {
      need(1);
      return cap_trial(parse_number(args[0], spec));
    }
    if (name == "random") {
      need(2);
      const int seed = parse_integer(args[1], spec);
      if (seed < 0) throw UsageError("function spec '" + spec + "': seed must be >= 0");
      return random_function(parse_integer(args[0], spec), static_cast<std::uint64_t>(seed));
    }
  } catch (const ParameterError& e) {
    throw UsageError("function spec '" + spec + "': " + e.what());
  }
  throw UsageError("unknown function spec '" + name + "'");
}

}  // namespace rlab
