// restriction-lab: command-line front end over the C API.
//
// Exit codes: 0 success, 2 usage or config error, 3 numerical failure
// (including failed checks and diverged searches).
#include <CLI11.hpp>

#include <cstdio>
#include <cstdint>
#include <optional>
#include <string>

#include "restriction_lab/restriction_lab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

int exit_code(rlab_status s) {
  switch (s) {
    case RLAB_OK:
      return kExitOk;
    case RLAB_ERR_USAGE:
    case RLAB_ERR_PARAMETER:
    case RLAB_ERR_NULL_ARGUMENT:
    case RLAB_ERR_IO:
      return kExitUsage;
    default:
      return kExitNumerical;
  }
}

struct Options {
  std::string config, out, suite, kind, start, input;
  std::optional<std::uint64_t> seed;
};

int report_error(rlab_status s) {
  std::fprintf(stderr, "restriction-lab: %s: %s\n", rlab_status_string(s), rlab_last_error());
  return exit_code(s);
}

// Primary text goes to --out or stdout. A secondary JSON summary goes to
// <out>.json, or to stderr when writing to stdout.
int emit(const std::string& out_path, const char* primary, const char* summary) {
  if (out_path.empty()) {
    std::fputs(primary, stdout);
    if (summary && *summary) std::fputs(summary, stderr);
    return kExitOk;
  }
  rlab_status s = rlab_write_file(out_path.c_str(), primary);
  if (s == RLAB_OK && summary && *summary)
    s = rlab_write_file((out_path + ".json").c_str(), summary);
  return s == RLAB_OK ? kExitOk : report_error(s);
}

int run(const std::string& command, const Options& o) {
  rlab_config* cfg = nullptr;
  rlab_status s = o.config.empty() ? rlab_config_new(&cfg) : rlab_config_load(o.config.c_str(), &cfg);
  if (s != RLAB_OK) return report_error(s);
  if (o.seed) rlab_config_set_seed(cfg, *o.seed);
  if (!o.start.empty()) s = rlab_config_set_string(cfg, "start", o.start.c_str());
  if (s == RLAB_OK && !o.input.empty()) s = rlab_config_set_string(cfg, "input", o.input.c_str());
  if (s == RLAB_OK && !o.out.empty()) s = rlab_config_set_string(cfg, "out", o.out.c_str());
  if (s != RLAB_OK) {
    rlab_config_free(cfg);
    return report_error(s);
  }
  const std::string out_path = rlab_config_out(cfg);

  rlab_output* res = nullptr;
  if (command == "verify") {
    if (o.suite.empty()) {
      rlab_config_free(cfg);
      std::fprintf(stderr, "restriction-lab: verify needs --suite\n");
      return kExitUsage;
    }
    s = rlab_verify(cfg, o.suite.c_str(), &res);
  } else if (command == "search") {
    s = rlab_search(cfg, &res);
  } else if (command == "trials") {
    if (o.kind.empty()) {
      rlab_config_free(cfg);
      std::fprintf(stderr, "restriction-lab: trials needs --kind\n");
      return kExitUsage;
    }
    s = rlab_trials(cfg, o.kind.c_str(), &res);
  } else if (command == "decompose") {
    s = rlab_decompose(cfg, &res);
  } else {
    s = rlab_scan_perturbation(cfg, &res);
  }
  rlab_config_free(cfg);
  if (s != RLAB_OK && s != RLAB_CHECKS_FAILED) return report_error(s);

  const char* csv = rlab_output_csv(res);
  const char* json = rlab_output_json(res);
  int code = *csv ? emit(out_path, csv, json) : emit(out_path, json, nullptr);
  if (code == kExitOk && s == RLAB_CHECKS_FAILED) {
    std::fprintf(stderr, "restriction-lab: %s did not pass\n", command.c_str());
    code = kExitNumerical;
  }
  rlab_output_free(res);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for the sphere restriction functional"};
  app.set_version_flag("--version", std::string(rlab_version()));
  app.require_subcommand(1);
  Options o;
  const char* commands[] = {"verify", "search", "trials", "decompose", "scan-perturbation"};
  const char* help[] = {"run a verification suite", "extremizer search from a start function",
                        "cap concentration or cap interaction trials",
                        "cap decomposition of an input function", "scan of the perturbation functional"};
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(commands[i], help[i]);
    sub->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--out", o.out, "output path (default stdout)");
    sub->add_option("--suite", o.suite,
                    "constants, harmonics, identities, symmetrization or perturbation");
    sub->add_option("--kind", o.kind, "cap_concentration or cap_interaction");
    sub->add_option("--start", o.start, "search start: constant, random, cappair or a function spec");
    sub->add_option("--input", o.input, "decompose input: function spec or sample file");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  for (const char* c : commands)
    if (app.got_subcommand(c)) return run(c, o);
  return kExitUsage;
}
