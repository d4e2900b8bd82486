/* The public header must compile as plain C and the library must link from
 * a C translation unit. */

#include <stdio.h>
#include <string.h>

#include "labelbias/labelbias.h"

int main(void) {
  if (strcmp(lb_version(), "0.1.0") != 0) {
    fprintf(stderr, "unexpected version: %s\n", lb_version());
    return 1;
  }

  lb_stylized_params params;
  params.alpha = 0.4;
  params.beta = 0.0;
  params.gamma = 0.4;
  params.delta = 0.4;

  double cov_a1_z = 0.0, cov_b1_z = 0.0;
  if (lb_stylized_conditional_covs(params, &cov_a1_z, &cov_b1_z) != LB_OK) {
    fprintf(stderr, "conditional covs failed: %s\n", lb_last_error());
    return 1;
  }
  if (cov_b1_z > -0.063 || cov_b1_z < -0.065) {
    fprintf(stderr, "unexpected Cov(B1, Z | A0): %f\n", cov_b1_z);
    return 1;
  }

  lb_sem* sem = NULL;
  if (lb_sem_stylized(params, &sem) != LB_OK) {
    fprintf(stderr, "sem build failed: %s\n", lb_last_error());
    return 1;
  }
  lb_sem_free(sem);

  if (lb_sem_stylized((lb_stylized_params){0.9, 0.9, 0.9, 0.1}, &sem) != LB_ERR_INVALID_PARAMS) {
    fprintf(stderr, "expected invalid-params\n");
    return 1;
  }

  printf("C header OK\n");
  return 0;
}
