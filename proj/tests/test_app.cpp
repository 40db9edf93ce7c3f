#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "restriction_lab/app.hpp"
#include "restriction_lab/paraboloid.hpp"

using namespace rlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "rlab_test_app";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("config round trip") {
  RunConfig c;
  c.n_theta = 33;
  c.tol = 0.1 + 0.2;  // not representable in few digits
  c.damping = 1.0 / 3;
  c.seed = 18446744073709551615ull;
  c.start = "cap(0,0,1,0.2)";
  c.out = "a \"quoted\" path";
  c.tolerances["gamma_max"] = 1e-3;
  const RunConfig d = RunConfig::from_json(c.to_json());
  CHECK(d == c);
  CHECK(RunConfig::from_json(d.to_json()).to_json() == c.to_json());
  CHECK(RunConfig::from_json("{}") == RunConfig{});
}

TEST_CASE("config rejects bad input") {
  CHECK_THROWS_AS(RunConfig::from_json("{\"n_thetaa\": 3}"), UsageError);
  CHECK_THROWS_AS(RunConfig::from_json("{\"n_theta\": 2.5}"), UsageError);
  CHECK_THROWS_AS(RunConfig::from_json("{\"tol\": \"small\"}"), UsageError);
  CHECK_THROWS_AS(RunConfig::from_json("{\"seed\": -1}"), UsageError);
  CHECK_THROWS_AS(RunConfig::from_json("[1, 2]"), UsageError);
  CHECK_THROWS_AS(RunConfig::from_json("{"), UsageError);
  CHECK_THROWS_AS(RunConfig::from_json("{\"schema\": \"v2\"}"), UsageError);
  CHECK_THROWS_AS(RunConfig::from_json("{\"tolerances\": []}"), UsageError);
  CHECK_THROWS_AS(RunConfig::load((scratch_dir() / "missing.json").string()), UsageError);
  RunConfig c;
  c.damping = 0;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = RunConfig{};
  c.eps_max = 0.7;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = RunConfig{};
  c.k_max = 9;
  CHECK_THROWS_AS(c.validate(), UsageError);
}

TEST_CASE("config file load") {
  const fs::path p = scratch_dir() / "cfg.json";
  std::ofstream(p) << "{\"schema\": \"v1\", \"seed\": 7, \"band_limit\": 6}";
  const RunConfig c = RunConfig::load(p.string());
  CHECK(c.seed == 7);
  CHECK(c.band_limit == 6);
}

TEST_CASE("check semantics and report json") {
  CHECK(check_passes(CheckKind::Equal, 2, 2.001, 1e-3));
  CHECK_FALSE(check_passes(CheckKind::Equal, 2, 2.003, 1e-3));
  CHECK(check_passes(CheckKind::Equal, 0, 1e-7, 1e-6));
  CHECK(check_passes(CheckKind::AtMost, 1, 0.5, 0));
  CHECK_FALSE(check_passes(CheckKind::AtLeast, 1, 0.5, 0));
  CHECK_FALSE(check_passes(CheckKind::AtMost, 1, std::nan(""), 1));

  CheckReport r;
  r.suite = "demo";
  r.add("a\"b", 1, 1, 0);
  r.add("inf", 0, std::numeric_limits<double>::infinity(), 1, CheckKind::AtMost);
  const auto j = nlohmann::json::parse(r.to_json());
  CHECK(j["schema"] == "v1");
  CHECK(j["suite"] == "demo");
  CHECK(j["checks"][0]["name"] == "a\"b");
  CHECK(j["checks"][0]["pass"] == true);
  CHECK(j["checks"][1]["actual"].is_null());
  CHECK(j["overall_pass"] == false);
  CHECK(format_double(1.0 / 3) == "3.33333333333e-01");
  CHECK(json_escape("x\n\t\x01") == "x\\n\\t\\u0001");
}

TEST_CASE("function specs") {
  CHECK(parse_function_spec("constant").value(Vec3{0, 0, 1}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(parse_function_spec("constant(2.5)").value(Vec3{1, 0, 0}) == doctest::Approx(2.5).epsilon(1e-15));
  const SphereFunction h = parse_function_spec("harmonic(2,-1)");
  CHECK(h.value(Vec3{0.6, 0, 0.8}) == doctest::Approx(real_sh(2, -1, Vec3{0.6, 0, 0.8})));
  const SphereFunction c = parse_function_spec("cap(0,0,2,0.3)");
  CHECK(c.value(Vec3{0, 0, 1}) == 1.0);
  CHECK(c.value(Vec3{0, 0, -1}) == 0.0);
  CHECK(parse_function_spec("gaussiancap(0.25)").l2_norm_sq() == doctest::Approx(1.0));
  const SphereFunction r1 = parse_function_spec("random(4,3)"), r2 = random_function(4, 3);
  CHECK(r1.coefficients()->c == r2.coefficients()->c);
  CHECK(random_function(4, 3).coefficients()->c != random_function(4, 4).coefficients()->c);
  CHECK(parse_function_spec("cappair(0.3)").even());

  for (const char* bad : {"", "harmonic(2)", "harmonic(2,x)", "harmonic(1.5,0)", "cap(0,0,1)",
                          "gaussiancap(0.9)", "random(4,-1)", "nosuch(1)", "constant(1", "no_file.json"})
    CHECK_THROWS_AS(parse_function_spec(bad), UsageError);
}

TEST_CASE("sample files") {
  const fs::path p = scratch_dir() / "samples.json";
  const auto rule = make_quadrature(4, 8);
  nlohmann::json j;
  j["n_theta"] = 4;
  j["n_phi"] = 8;
  std::vector<double> v;
  for (const Vec3& x : rule.nodes) v.push_back(1 + x.z * x.z);
  j["values"] = v;
  std::ofstream(p) << j.dump();
  const SphereFunction f = parse_function_spec(p.string());
  REQUIRE(f.samples());
  CHECK(f.samples()->values == v);

  j["extra"] = 1;
  std::ofstream(p) << j.dump();
  CHECK_THROWS_AS(parse_function_spec(p.string()), UsageError);
  j.erase("extra");
  j["values"].push_back(1.0);
  std::ofstream(p) << j.dump();
  CHECK_THROWS_AS(parse_function_spec(p.string()), UsageError);
}

TEST_CASE("seeded RNG") {
  Rng a(42), b(42), c(43);
  bool same = true, differ = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform(), y = b.uniform(), z = c.uniform();
    same &= x == y;
    differ |= x != z;
    CHECK(x >= 0);
    CHECK(x < 1);
  }
  CHECK(same);
  CHECK(differ);
  // Golden first draw of mt19937_64 seeded with 1.
  std::mt19937_64 g(1);
  CHECK(Rng(1).uniform() == static_cast<double>(g() >> 11) * 0x1.0p-53);
}

TEST_CASE("atomic file writes") {
  const fs::path p = scratch_dir() / "out.csv";
  write_file_atomic(p.string(), "a,b\n1,2\n");
  CHECK(slurp(p) == "a,b\n1,2\n");
  CHECK_FALSE(fs::exists(p.string() + ".tmp"));
  CHECK_THROWS_AS(write_file_atomic((scratch_dir() / "no" / "dir" / "x").string(), "z"), IoError);
}

TEST_CASE("commands are deterministic and well formed") {
  RunConfig cfg;
  cfg.seed = 5;
  cfg.start = "random";
  cfg.max_iter = 20;
  const CommandOutput a = cmd_search(cfg), b = cmd_search(cfg);
  CHECK(a.csv == b.csv);
  CHECK(a.json == b.json);
  CHECK(a.csv.rfind("iter,phi,residual,lambda\n", 0) == 0);
  const auto j = nlohmann::json::parse(a.json);
  CHECK(j["command"] == "search");
  CHECK(j["seed"] == 5);
  CHECK(j["final_phi"].get<double>() <= 2 * kPi + 1e-4);

  cfg.n_eps = 3;
  cfg.eps_max = 0.1;
  const CommandOutput s = cmd_scan_perturbation(cfg);
  std::istringstream in(s.csv);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# psi_prime_0=", 0) == 0);
  std::getline(in, line);
  CHECK(line == "eps,w_l4,g_l2sq,psi");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);

  CHECK_THROWS_AS(cmd_verify("nosuch", cfg), UsageError);
  CHECK_THROWS_AS(cmd_trials("nosuch", cfg), UsageError);
  const CheckReport r = cmd_verify("constants", cfg);
  CHECK(r.overall_pass());
  cfg.tolerances["phi_one"] = -1;
  CHECK_THROWS_AS(cmd_verify("constants", cfg), UsageError);
}
