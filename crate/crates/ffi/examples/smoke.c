#include <stdio.h>
#include "regrich.h"

int main(void) {
    double a[] = {2, 0, 0, 0, 0, 0, 1, 0};
    double b[] = {0, 0, -1, 0, 0, 0, 0, 0};
    RegrichDatum *h = NULL;
    if (regrich_datum_new(2, 1, a, b, NULL, &h) != REGRICH_STATUS_OK) {
        fprintf(stderr, "%s\n", regrich_last_error());
        return 1;
    }
    RegrichVerdict v;
    double margin;
    regrich_is_rich(h, NULL, &v, &margin);
    printf("regrich %s: %s\n", regrich_version(), v == REGRICH_VERDICT_POOR ? "poor" : "not poor");
    regrich_datum_free(h);
    return v == REGRICH_VERDICT_POOR ? 0 : 1;
}
