#include <stdio.h>
#include <string.h>
#include "semiso.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__,   \
                    #cond, semiso_last_error());                      \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    SemisoField *k = NULL;
    CHECK(semiso_field_new("p=3 n=3 mod=[1,2,0,1]", &k) == SEMISO_STATUS_OK);
    CHECK(semiso_field_order(k) == 27);

    SemisoPoly *x2 = NULL, *x4 = NULL;
    CHECK(semiso_poly_parse(k, "x^2", &x2) == SEMISO_STATUS_OK);
    CHECK(semiso_poly_parse(k, "x^4", &x4) == SEMISO_STATUS_OK);
    bool planar = false;
    CHECK(semiso_poly_is_planar(x4, &planar) == SEMISO_STATUS_OK && planar);

    SemisoVerdict *v = NULL;
    CHECK(semiso_ccz_equivalent(x2, x4, 0, 0.0, &v) == SEMISO_STATUS_OK);
    CHECK(semiso_verdict_kind(v) == SEMISO_VERDICT_KIND_INEQUIVALENT);
    char *json = semiso_verdict_to_json(v);
    CHECK(json != NULL && strstr(json, "\"inequivalent\"") != NULL);
    semiso_string_free(json);
    semiso_verdict_free(v);

    SemisoPoly *bad = NULL;
    CHECK(semiso_poly_parse(k, "x^^2", &bad) == SEMISO_STATUS_PARSE);
    CHECK(bad == NULL);
    CHECK(strstr(semiso_last_error(), "parse error") != NULL);

    semiso_poly_free(x2);
    semiso_poly_free(x4);
    semiso_field_free(k);
    puts("ok");
    return 0;
}
