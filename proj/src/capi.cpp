#include "restriction_lab/restriction_lab.h"

#include <cmath>
#include <exception>
#include <new>
#include <string>

#include "restriction_lab/app.hpp"
#include "restriction_lab/errors.hpp"
#include "restriction_lab/extremal.hpp"

struct rlab_config {
  rlab::RunConfig cfg;
  std::string json;
};

struct rlab_output {
  rlab::CommandOutput out;
};

struct rlab_function {
  rlab::SphereFunction f;
};

namespace {

thread_local std::string g_last_error;

rlab_status fail(rlab_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs body, translating exceptions into status codes.
template <class F>
rlab_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const rlab::UsageError& e) {
    return fail(RLAB_ERR_USAGE, e.what());
  } catch (const rlab::ParameterError& e) {
    return fail(RLAB_ERR_PARAMETER, e.what());
  } catch (const rlab::DegenerateInputError& e) {
    return fail(RLAB_ERR_DEGENERATE, e.what());
  } catch (const rlab::IntegrabilityError& e) {
    return fail(RLAB_ERR_INTEGRABILITY, e.what());
  } catch (const rlab::ResolutionError& e) {
    return fail(RLAB_ERR_RESOLUTION, e.what());
  } catch (const rlab::DivergenceError& e) {
    return fail(RLAB_ERR_DIVERGENCE, e.what());
  } catch (const rlab::UnderflowError& e) {
    return fail(RLAB_ERR_UNDERFLOW, e.what());
  } catch (const rlab::SignError& e) {
    return fail(RLAB_ERR_SIGN, e.what());
  } catch (const rlab::AdmissibilityError& e) {
    return fail(RLAB_ERR_ADMISSIBILITY, e.what());
  } catch (const rlab::IoError& e) {
    return fail(RLAB_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(RLAB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RLAB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RLAB_ERR_INTERNAL, "unknown exception");
  }
}

rlab_status null_arg(const char* what) {
  return fail(RLAB_ERR_NULL_ARGUMENT, std::string("null argument: ") + what);
}

rlab_status finish(rlab::CommandOutput o, rlab_output** out) {
  const bool passed = o.passed;
  *out = new rlab_output{std::move(o)};
  return passed ? RLAB_OK : RLAB_CHECKS_FAILED;
}

}  // namespace

extern "C" {

const char* rlab_version(void) { return "0.1.0"; }

const char* rlab_status_string(rlab_status s) {
  switch (s) {
    case RLAB_OK: return "ok";
    case RLAB_CHECKS_FAILED: return "checks failed";
    case RLAB_ERR_USAGE: return "usage error";
    case RLAB_ERR_PARAMETER: return "parameter error";
    case RLAB_ERR_DEGENERATE: return "degenerate input";
    case RLAB_ERR_INTEGRABILITY: return "integrability error";
    case RLAB_ERR_RESOLUTION: return "resolution error";
    case RLAB_ERR_DIVERGENCE: return "divergence";
    case RLAB_ERR_UNDERFLOW: return "underflow";
    case RLAB_ERR_SIGN: return "sign error";
    case RLAB_ERR_ADMISSIBILITY: return "admissibility error";
    case RLAB_ERR_IO: return "i/o error";
    case RLAB_ERR_NULL_ARGUMENT: return "null argument";
    case RLAB_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* rlab_last_error(void) { return g_last_error.c_str(); }

rlab_status rlab_config_new(rlab_config** out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new rlab_config{};
    return RLAB_OK;
  });
}

rlab_status rlab_config_load(const char* path, rlab_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new rlab_config{rlab::RunConfig::load(path), {}};
    return RLAB_OK;
  });
}

rlab_status rlab_config_parse(const char* json, rlab_config** out) {
  if (!json) return null_arg("json");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new rlab_config{rlab::RunConfig::from_json(json), {}};
    return RLAB_OK;
  });
}

void rlab_config_free(rlab_config* cfg) { delete cfg; }

rlab_status rlab_config_set_seed(rlab_config* cfg, uint64_t seed) {
  if (!cfg) return null_arg("cfg");
  cfg->cfg.seed = seed;
  return RLAB_OK;
}

rlab_status rlab_config_set_string(rlab_config* cfg, const char* key, const char* value) {
  if (!cfg) return null_arg("cfg");
  if (!key) return null_arg("key");
  if (!value) return null_arg("value");
  return guarded([&] {
    const std::string k = key;
    if (k == "start")
      cfg->cfg.start = value;
    else if (k == "input")
      cfg->cfg.input = value;
    else if (k == "out")
      cfg->cfg.out = value;
    else
      throw rlab::UsageError("unknown config string key '" + k + "'");
    return RLAB_OK;
  });
}

const char* rlab_config_out(const rlab_config* cfg) { return cfg ? cfg->cfg.out.c_str() : ""; }

const char* rlab_config_to_json(rlab_config* cfg) {
  if (!cfg) return "";
  cfg->json = cfg->cfg.to_json();
  return cfg->json.c_str();
}

rlab_status rlab_verify(const rlab_config* cfg, const char* suite, rlab_output** out) {
  if (!cfg) return null_arg("cfg");
  if (!suite) return null_arg("suite");
  if (!out) return null_arg("out");
  return guarded([&] {
    const rlab::CheckReport r = rlab::cmd_verify(suite, cfg->cfg);
    rlab::CommandOutput o;
    o.json = r.to_json();
    o.passed = r.overall_pass();
    return finish(std::move(o), out);
  });
}

rlab_status rlab_search(const rlab_config* cfg, rlab_output** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guarded([&] { return finish(rlab::cmd_search(cfg->cfg), out); });
}

rlab_status rlab_trials(const rlab_config* cfg, const char* kind, rlab_output** out) {
  if (!cfg) return null_arg("cfg");
  if (!kind) return null_arg("kind");
  if (!out) return null_arg("out");
  return guarded([&] { return finish(rlab::cmd_trials(kind, cfg->cfg), out); });
}

rlab_status rlab_decompose(const rlab_config* cfg, rlab_output** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guarded([&] { return finish(rlab::cmd_decompose(cfg->cfg), out); });
}

rlab_status rlab_scan_perturbation(const rlab_config* cfg, rlab_output** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guarded([&] { return finish(rlab::cmd_scan_perturbation(cfg->cfg), out); });
}

const char* rlab_output_csv(const rlab_output* out) { return out ? out->out.csv.c_str() : ""; }
const char* rlab_output_json(const rlab_output* out) { return out ? out->out.json.c_str() : ""; }
int rlab_output_passed(const rlab_output* out) { return out && out->out.passed ? 1 : 0; }
void rlab_output_free(rlab_output* out) { delete out; }

rlab_status rlab_write_file(const char* path, const char* content) {
  if (!path) return null_arg("path");
  if (!content) return null_arg("content");
  return guarded([&] {
    rlab::write_file_atomic(path, content);
    return RLAB_OK;
  });
}

rlab_status rlab_function_parse(const char* spec, rlab_function** out) {
  if (!spec) return null_arg("spec");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new rlab_function{rlab::parse_function_spec(spec)};
    return RLAB_OK;
  });
}

void rlab_function_free(rlab_function* f) { delete f; }

rlab_status rlab_function_eval(const rlab_function* f, double x, double y, double z,
                               double* value) {
  if (!f) return null_arg("f");
  if (!value) return null_arg("value");
  return guarded([&] {
    *value = f->f(rlab::UnitVector3(x, y, z));
    return RLAB_OK;
  });
}

rlab_status rlab_function_l2_norm_sq(const rlab_function* f, double* value) {
  if (!f) return null_arg("f");
  if (!value) return null_arg("value");
  return guarded([&] {
    const auto rule = rlab::shared_quadrature(48, 97);
    *value = f->f.l2_norm_sq(rule.get());
    return RLAB_OK;
  });
}

rlab_status rlab_phi(const rlab_function* f, double* value) {
  if (!f) return null_arg("f");
  if (!value) return null_arg("value");
  return guarded([&] {
    *value = rlab::phi_functional(f->f);
    return RLAB_OK;
  });
}

rlab_status rlab_conv_l2_norm(const rlab_function* f, const rlab_function* g, double* value) {
  if (!f) return null_arg("f");
  if (!g) return null_arg("g");
  if (!value) return null_arg("value");
  return guarded([&] {
    *value = rlab::conv_l2_norm(f->f, g->f);
    return RLAB_OK;
  });
}

rlab_status rlab_inverse_chord_multiplier(int k, double* value) {
  if (!value) return null_arg("value");
  return guarded([&] {
    if (k < 0) throw rlab::ParameterError("multiplier degree must be >= 0");
    *value = rlab::funk_hecke_multiplier(rlab::Kernel1D::inverse_chord(), k);
    return RLAB_OK;
  });
}

rlab_status rlab_gamma(double phi, double psi, double alpha, double beta, double* value) {
  if (!value) return null_arg("value");
  return guarded([&] {
    *value = rlab::gamma({phi, psi, alpha, beta});
    return RLAB_OK;
  });
}

rlab_status rlab_cap_quotient_distance(const double z1[3], double r1, const double z2[3],
                                       double r2, double* value) {
  if (!z1) return null_arg("z1");
  if (!z2) return null_arg("z2");
  if (!value) return null_arg("value");
  return guarded([&] {
    const rlab::Cap a(rlab::UnitVector3(z1[0], z1[1], z1[2]), r1);
    const rlab::Cap b(rlab::UnitVector3(z2[0], z2[1], z2[2]), r2);
    *value = rlab::cap_quotient_distance(a, b);
    return RLAB_OK;
  });
}

}  // extern "C"
