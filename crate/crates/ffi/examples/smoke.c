#include <math.h>
#include <stdio.h>
#include "geomatch.h"

int main(void) {
    double s[] = {0.0, 0.0, 2.0, 0.0};
    double t[] = {1.0, 0.0};
    GmInstance *inst = NULL;
    GmSolution *sol = NULL;
    if (gm_instance_new(s, 2, t, 1, &inst) != GM_STATUS_OK) {
        fprintf(stderr, "%s\n", gm_last_error_message());
        return 1;
    }
    if (gm_solve(inst, "gt", 0.1, &sol) != GM_STATUS_OK) {
        fprintf(stderr, "%s\n", gm_last_error_message());
        return 1;
    }
    char *json = gm_solution_to_json(sol);
    printf("%s\n", json);
    gm_string_free(json);
    gm_solution_free(sol);
    gm_instance_free(inst);
    return 0;
}
