/* Exercises the shared library through its C header only. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "pwlsep/pwlsep.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static const char* kFourD =
    "{\"dimension\":4,\"points\":[[\"1\",\"1\",\"0\",\"0\"],[\"-2\",\"1\",\"0\",\"0\"],[\"1\",\"-2\",\"0\",\"0\"],"
    "[\"0\",\"0\",\"1\",\"1\"],[\"0\",\"0\",\"-2\",\"1\"],[\"0\",\"0\",\"1\",\"-2\"]],"
    "\"labels\":[\"B\",\"B\",\"B\",\"R\",\"R\",\"R\"],\"blue_groups\":1,\"red_groups\":1}";

static void test_instance_and_solve(void) {
  pwlsep_instance* inst = NULL;
  EXPECT(pwlsep_instance_parse(kFourD, &inst) == PWLSEP_OK);
  if (!inst) return;
  EXPECT(pwlsep_instance_size(inst) == 6);
  EXPECT(pwlsep_instance_dimension(inst) == 4);
  EXPECT(pwlsep_instance_num_z(inst) == 6);

  pwlsep_solve_options opt;
  pwlsep_solve_options_init(&opt);
  EXPECT(opt.workers == 1);
  pwlsep_result* r = NULL;
  EXPECT(pwlsep_solve(inst, &opt, &r) == PWLSEP_OK);
  if (r) {
    EXPECT(pwlsep_result_optimal(r));
    EXPECT(pwlsep_result_assigned(r) == 5);
    EXPECT(pwlsep_result_outlier_count(r) == 1);
    EXPECT(pwlsep_result_group(r, 99) == -1);
    char* js = NULL;
    EXPECT(pwlsep_result_to_json(r, 0, &js) == PWLSEP_OK);
    EXPECT(js && strstr(js, "\"assigned\": 5") != NULL);
    pwlsep_string_free(js);
    char* farkas = NULL;
    EXPECT(pwlsep_result_farkas_jsonl(r, &farkas) == PWLSEP_OK);
    pwlsep_string_free(farkas);
    pwlsep_result_free(r);
  }

  pwlsep_result* e = NULL;
  EXPECT(pwlsep_solve_enumerative(inst, &e) == PWLSEP_OK);
  if (e) EXPECT(pwlsep_result_assigned(e) == 5);
  pwlsep_result_free(e);

  EXPECT(pwlsep_instance_set_budgets(inst, 2, 1) == PWLSEP_OK);
  EXPECT(pwlsep_solve(inst, NULL, &r) == PWLSEP_OK);
  if (r) EXPECT(pwlsep_result_assigned(r) == 6);
  pwlsep_result_free(r);

  char* lp = NULL;
  EXPECT(pwlsep_export_lp(inst, "100", 1, &lp) == PWLSEP_OK);
  EXPECT(lp && strstr(lp, "Minimize") != NULL);
  pwlsep_string_free(lp);
  EXPECT(pwlsep_export_lp(inst, "not-a-number", 0, &lp) == PWLSEP_ERR_INPUT);

  char* svg = NULL;
  EXPECT(pwlsep_plot_svg(inst, NULL, 0, 0, &svg) == PWLSEP_ERR_PRECONDITION);
  EXPECT(strlen(pwlsep_last_error()) > 0);
  pwlsep_instance_free(inst);
}

static void test_errors(void) {
  pwlsep_instance* inst = NULL;
  EXPECT(pwlsep_instance_parse("{not json", &inst) == PWLSEP_ERR_INPUT);
  EXPECT(inst == NULL);
  EXPECT(pwlsep_instance_load("/nonexistent/dir/file.json", &inst) == PWLSEP_ERR_IO);
  EXPECT(pwlsep_instance_generate("no-such-family", 1, 0, 0, &inst) == PWLSEP_ERR_INPUT);
  EXPECT(pwlsep_instance_generate("xor", 1, 2, 0, &inst) == PWLSEP_ERR_INPUT);
  EXPECT(pwlsep_instance_parse(NULL, &inst) == PWLSEP_ERR_INPUT);
  pwlsep_instance_free(NULL);
  pwlsep_result_free(NULL);
  pwlsep_string_free(NULL);
}

static void test_cuts_and_lab(void) {
  pwlsep_instance* inst = NULL;
  EXPECT(pwlsep_instance_generate("hull-inclusion", 3, 0, 0, &inst) == PWLSEP_OK);
  if (!inst) return;
  char* cuts = NULL;
  EXPECT(pwlsep_cuts_jsonl(inst, NULL, 1, 0, &cuts) == PWLSEP_OK);
  pwlsep_string_free(cuts);

  char* report = NULL;
  const char* all_in = "{\"coeffs\":{\"z_0_0\":\"1\"},\"rhs\":\"1\"}";
  EXPECT(pwlsep_check_inequality(inst, all_in, &report) == PWLSEP_OK);
  EXPECT(report && strstr(report, "verdict") != NULL);
  pwlsep_string_free(report);
  const char* wrong = "{\"coeffs\":{\"z_0_0\":\"1\"},\"rhs\":\"0\"}";
  report = NULL;
  EXPECT(pwlsep_check_inequality(inst, wrong, &report) == PWLSEP_ERR_CONTRADICTION);
  pwlsep_string_free(report);
  pwlsep_instance_free(inst);

  char* names = NULL;
  EXPECT(pwlsep_theorem_names(&names) == PWLSEP_OK);
  EXPECT(names && strstr(names, "obstacle-minimal") != NULL);
  pwlsep_string_free(names);
  char* fams = NULL;
  EXPECT(pwlsep_families(&fams) == PWLSEP_OK);
  EXPECT(fams && strstr(fams, "xor") != NULL);
  pwlsep_string_free(fams);

  char *js = NULL, *txt = NULL;
  EXPECT(pwlsep_theorem_suite("obstacle-minimal", 3, 1, 1, &js, &txt) == PWLSEP_OK);
  pwlsep_string_free(js);
  pwlsep_string_free(txt);
}

int main(void) {
  EXPECT(pwlsep_version() != NULL);
  test_instance_and_solve();
  test_errors();
  test_cuts_and_lab();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}
