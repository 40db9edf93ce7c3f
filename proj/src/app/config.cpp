#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "restriction_lab/app.hpp"

namespace rlab {

namespace {

using nlohmann::json;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int get_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw UsageError("config: '" + key + "' must be an integer");
  const auto x = v.get<long long>();
  if (x < -2147483647LL || x > 2147483647LL) throw UsageError("config: '" + key + "' out of range");
  return static_cast<int>(x);
}

double get_double(const json& v, const std::string& key) {
  if (!v.is_number()) throw UsageError("config: '" + key + "' must be a number");
  return v.get<double>();
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw UsageError("config: '" + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

void RunConfig::validate() const {
  if (n_theta < 2 || n_phi < 4 || n_radial < 4 || n_circle < 16)
    throw UsageError("config: quadrature sizes must be positive (n_theta >= 2, n_phi >= 4, "
                     "n_radial >= 4, n_circle >= 16)");
  if (band_limit < 0 || band_limit > 16) throw UsageError("config: band_limit must lie in [0, 16]");
  if (!(s_est >= 0) || !std::isfinite(s_est)) throw UsageError("config: s_est must be positive");
  if (max_iter < 1) throw UsageError("config: max_iter must be >= 1");
  if (!(tol > 0)) throw UsageError("config: tol must be positive");
  if (!(damping > 0 && damping <= 1)) throw UsageError("config: damping must lie in (0, 1]");
  if (k_max < 0 || k_max > 8) throw UsageError("config: k_max must lie in [0, 8]");
  if (!(eps_max > 0 && eps_max <= 0.5)) throw UsageError("config: eps_max must lie in (0, 0.5]");
  if (n_eps < 2 || n_eps > 1000) throw UsageError("config: n_eps must lie in [2, 1000]");
  for (const auto& [k, v] : tolerances)
    if (!(v >= 0)) throw UsageError("config: tolerance override '" + k + "' must be >= 0");
}

BallGridSpec RunConfig::ball_grid() const {
  BallGridSpec s;
  s.n_radial = n_radial;
  s.n_theta = n_theta;
  s.n_phi = n_phi;
  s.n_circle = n_circle;
  return s;
}

double RunConfig::s_est_value() const { return s_est > 0 ? s_est : std::pow(2 * kPi, 0.25); }

std::string RunConfig::to_json() const {
  std::ostringstream o;
  o << "{\n";
  o << "  \"schema\": \"v1\",\n";
  o << "  \"n_theta\": " << n_theta << ",\n";
  o << "  \"n_phi\": " << n_phi << ",\n";
  o << "  \"n_radial\": " << n_radial << ",\n";
  o << "  \"n_circle\": " << n_circle << ",\n";
  o << "  \"band_limit\": " << band_limit << ",\n";
  o << "  \"s_est\": " << g17(s_est) << ",\n";
  o << "  \"seed\": " << seed << ",\n";
  o << "  \"max_iter\": " << max_iter << ",\n";
  o << "  \"tol\": " << g17(tol) << ",\n";
  o << "  \"damping\": " << g17(damping) << ",\n";
  o << "  \"k_max\": " << k_max << ",\n";
  o << "  \"start\": \"" << json_escape(start) << "\",\n";
  o << "  \"input\": \"" << json_escape(input) << "\",\n";
  o << "  \"eps_max\": " << g17(eps_max) << ",\n";
  o << "  \"n_eps\": " << n_eps << ",\n";
  o << "  \"out\": \"" << json_escape(out) << "\",\n";
  o << "  \"tolerances\": {";
  bool first = true;
  for (const auto& [k, v] : tolerances) {
    o << (first ? "" : ", ") << "\"" << json_escape(k) << "\": " << g17(v);
    first = false;
  }
  o << "}\n}\n";
  return o.str();
}

RunConfig RunConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config: top level must be an object");
  RunConfig c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const json& v = it.value();
    if (k == "schema") {
      if (get_string(v, k) != "v1") throw UsageError("config: unsupported schema '" + v.get<std::string>() + "'");
    } else if (k == "n_theta") {
      c.n_theta = get_int(v, k);
    } else if (k == "n_phi") {
      c.n_phi = get_int(v, k);
    } else if (k == "n_radial") {
      c.n_radial = get_int(v, k);
    } else if (k == "n_circle") {
      c.n_circle = get_int(v, k);
    } else if (k == "band_limit") {
      c.band_limit = get_int(v, k);
    } else if (k == "s_est") {
      c.s_est = get_double(v, k);
    } else if (k == "seed") {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw UsageError("config: 'seed' must be a nonnegative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (k == "max_iter") {
      c.max_iter = get_int(v, k);
    } else if (k == "tol") {
      c.tol = get_double(v, k);
    } else if (k == "damping") {
      c.damping = get_double(v, k);
    } else if (k == "k_max") {
      c.k_max = get_int(v, k);
    } else if (k == "start") {
      c.start = get_string(v, k);
    } else if (k == "input") {
      c.input = get_string(v, k);
    } else if (k == "eps_max") {
      c.eps_max = get_double(v, k);
    } else if (k == "n_eps") {
      c.n_eps = get_int(v, k);
    } else if (k == "out") {
      c.out = get_string(v, k);
    } else if (k == "tolerances") {
      if (!v.is_object()) throw UsageError("config: 'tolerances' must be an object");
      for (auto t = v.begin(); t != v.end(); ++t) c.tolerances[t.key()] = get_double(t.value(), t.key());
    } else {
      throw UsageError("config: unknown key '" + k + "'");
    }
  }
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("config: cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return from_json(s.str());
}

}  // namespace rlab
