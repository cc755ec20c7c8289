/* Exercises the C API: prints the fidelities at (2,2) and exits nonzero on
 * any unexpected result. */
#include <math.h>
#include <stdio.h>

#include "pbt.h"

static int fail(const char *what) {
  fprintf(stderr, "%s: %s\n", what, pbt_last_error_message());
  return 1;
}

int main(void) {
  PbtReport *report = NULL;
  if (pbt_fidelity_standard(2, 2, &report) != PBT_STATUS_OK) {
    return fail("standard");
  }
  double f = pbt_report_fidelity(report);
  printf("standard %.17g\n", f);
  pbt_report_free(report);
  if (fabs(f - (2.0 + sqrt(3.0)) / 8.0) > 1e-15) {
    return 1;
  }

  if (pbt_fidelity_optimized(2, 2, &report) != PBT_STATUS_OK) {
    return fail("optimized");
  }
  printf("optimized %.17g with %zu coefficients\n", pbt_report_fidelity(report),
         pbt_report_coefficient_count(report));
  printf("%s\n", pbt_report_json(report));
  pbt_report_free(report);

  bool passed = false;
  double margin = 0.0;
  if (pbt_verify(2, 12, PBT_MODE_STANDARD, &passed, &margin) != PBT_STATUS_SIZE_CAP) {
    return 1;
  }
  printf("size cap: %s\n", pbt_last_error_message());
  printf("version %s\n", pbt_version());
  return 0;
}
