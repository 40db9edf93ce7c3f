/* Exercises the C interface through the shared library only. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "restriction_lab/restriction_lab.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static const double kPi = 3.14159265358979323846;

static void test_status_and_nulls(void) {
  double v = 0;
  rlab_config* cfg = NULL;
  EXPECT(strcmp(rlab_version(), "0.1.0") == 0);
  EXPECT(strcmp(rlab_status_string(RLAB_OK), "ok") == 0);
  EXPECT(strcmp(rlab_status_string((rlab_status)99), "unknown status") == 0);
  EXPECT(rlab_config_new(NULL) == RLAB_ERR_NULL_ARGUMENT);
  EXPECT(strstr(rlab_last_error(), "out") != NULL);
  EXPECT(rlab_phi(NULL, &v) == RLAB_ERR_NULL_ARGUMENT);
  EXPECT(rlab_verify(NULL, "constants", NULL) == RLAB_ERR_NULL_ARGUMENT);
  EXPECT(rlab_config_set_seed(NULL, 1) == RLAB_ERR_NULL_ARGUMENT);
  EXPECT(rlab_gamma(0, 0, 0, 0, NULL) == RLAB_ERR_NULL_ARGUMENT);
  EXPECT(strcmp(rlab_output_csv(NULL), "") == 0);
  EXPECT(rlab_output_passed(NULL) == 0);
  rlab_config_free(NULL);
  rlab_output_free(NULL);
  rlab_function_free(NULL);

  EXPECT(rlab_config_parse("{\"bogus\": 1}", &cfg) == RLAB_ERR_USAGE);
  EXPECT(strstr(rlab_last_error(), "bogus") != NULL);
  EXPECT(rlab_config_load("/nonexistent/cfg.json", &cfg) == RLAB_ERR_USAGE);
  EXPECT(rlab_config_new(&cfg) == RLAB_OK);
  EXPECT(strcmp(rlab_last_error(), "") == 0);
  EXPECT(rlab_config_set_string(cfg, "nope", "x") == RLAB_ERR_USAGE);
  EXPECT(rlab_config_set_string(cfg, "out", "file.csv") == RLAB_OK);
  EXPECT(strcmp(rlab_config_out(cfg), "file.csv") == 0);
  EXPECT(strstr(rlab_config_to_json(cfg), "\"out\": \"file.csv\"") != NULL);
  rlab_config_free(cfg);
}

static void test_scalars(void) {
  double v = 0;
  rlab_function* one = NULL;
  rlab_function* bad = NULL;
  const double z1[3] = {0, 0, 1}, z2[3] = {0, 0, -1};
  EXPECT(rlab_function_parse("constant", &one) == RLAB_OK);
  EXPECT(rlab_phi(one, &v) == RLAB_OK && fabs(v - 2 * kPi) < 1e-8);
  EXPECT(rlab_function_l2_norm_sq(one, &v) == RLAB_OK && fabs(v - 4 * kPi) < 1e-10);
  EXPECT(rlab_conv_l2_norm(one, one, &v) == RLAB_OK && fabs(v * v - 32 * pow(kPi, 3)) < 1e-3);
  EXPECT(rlab_function_eval(one, 0, 0, 1, &v) == RLAB_OK && fabs(v - 1) < 1e-15);
  EXPECT(rlab_function_parse("harmonic(1)", &bad) == RLAB_ERR_USAGE);
  EXPECT(rlab_inverse_chord_multiplier(3, &v) == RLAB_OK && fabs(v - 4 * kPi / 7) < 1e-10);
  EXPECT(rlab_inverse_chord_multiplier(-1, &v) == RLAB_ERR_PARAMETER);
  EXPECT(rlab_gamma(kPi / 4, kPi / 4, kPi / 4, kPi / 4, &v) == RLAB_OK && fabs(v - 1.5) < 1e-15);
  EXPECT(rlab_gamma(-1, 0, 0, 0, &v) == RLAB_ERR_PARAMETER);
  EXPECT(rlab_cap_quotient_distance(z1, 0.1, z2, 0.1, &v) == RLAB_OK && v == 0);
  EXPECT(rlab_cap_quotient_distance(z1, 0.1, NULL, 0.1, &v) == RLAB_ERR_NULL_ARGUMENT);
  rlab_function_free(one);
}

static void test_commands(void) {
  rlab_config* cfg = NULL;
  rlab_output* a = NULL;
  rlab_output* b = NULL;
  EXPECT(rlab_config_parse("{\"start\": \"random\", \"seed\": 9, \"max_iter\": 15}", &cfg) == RLAB_OK);
  EXPECT(rlab_search(cfg, &a) <= RLAB_CHECKS_FAILED);
  EXPECT(rlab_search(cfg, &b) <= RLAB_CHECKS_FAILED);
  EXPECT(strcmp(rlab_output_csv(a), rlab_output_csv(b)) == 0);
  EXPECT(strcmp(rlab_output_json(a), rlab_output_json(b)) == 0);
  EXPECT(strncmp(rlab_output_csv(a), "iter,phi,residual,lambda\n", 25) == 0);
  rlab_output_free(a);
  rlab_output_free(b);

  EXPECT(rlab_verify(cfg, "constants", &a) == RLAB_OK);
  EXPECT(rlab_output_passed(a) == 1);
  EXPECT(strstr(rlab_output_json(a), "\"overall_pass\": true") != NULL);
  EXPECT(strcmp(rlab_output_csv(a), "") == 0);
  rlab_output_free(a);
  a = NULL;
  EXPECT(rlab_verify(cfg, "nosuch", &a) == RLAB_ERR_USAGE);
  EXPECT(a == NULL);
  EXPECT(rlab_trials(cfg, "nosuch", &a) == RLAB_ERR_USAGE);
  rlab_config_free(cfg);

  /* A tolerance override of 0 on an inexact check turns it into a failure. */
  EXPECT(rlab_config_parse("{\"tolerances\": {\"norm_sigma_conv_sq\": 0}}", &cfg) == RLAB_OK);
  EXPECT(rlab_verify(cfg, "constants", &a) == RLAB_CHECKS_FAILED);
  EXPECT(rlab_output_passed(a) == 0);
  rlab_output_free(a);
  rlab_config_free(cfg);

  EXPECT(rlab_write_file("/nonexistent/dir/x.csv", "x") == RLAB_ERR_IO);
  EXPECT(strlen(rlab_last_error()) > 0);
}

int main(void) {
  test_status_and_nulls();
  test_scalars();
  test_commands();
  if (failures) fprintf(stderr, "%d failures\n", failures);
  else printf("all C API checks passed\n");
  return failures ? 1 : 0;
}
