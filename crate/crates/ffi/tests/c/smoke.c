#include <stdio.h>
#include <string.h>

#include "towerlab.h"

static int fail(const char *what) {
    const char *err = towerlab_last_error();
    fprintf(stderr, "%s: %s\n", what, err ? err : "(no message)");
    return 1;
}

int main(void) {
    TowerlabSpec *spec = NULL;
    if (towerlab_spec_q5(&spec) != TOWERLAB_STATUS_OK) return fail("q5");
    if (towerlab_spec_q(spec) != 5) return fail("q");

    char *json = NULL;
    if (towerlab_spec_to_json(spec, &json) != TOWERLAB_STATUS_OK) return fail("to_json");
    if (strstr(json, "(x^6 + x^5 + 2x + 3)/(x^5 - x)") == NULL) return fail("g text");

    TowerlabSpec *copy = NULL;
    if (towerlab_spec_from_json(json, &copy) != TOWERLAB_STATUS_OK) return fail("from_json");
    towerlab_string_free(json);

    char *report = NULL;
    if (towerlab_spec_validate(copy, &report) != TOWERLAB_STATUS_OK) return fail("validate");
    towerlab_string_free(report);

    char *table = NULL;
    if (towerlab_spec_analyze_json(copy, 1, &table) != TOWERLAB_STATUS_OK) return fail("analyze");
    if (strstr(table, "\"genus\":\"25\"") == NULL) return fail("genus");
    towerlab_string_free(table);

    TowerlabSpec *bad = NULL;
    if (towerlab_spec_family(5, 1, "2", "3", &bad) != TOWERLAB_STATUS_CONFIG_ERROR) return fail("family q5");
    if (bad != NULL) return fail("handle on error");

    towerlab_spec_free(copy);
    towerlab_spec_free(spec);
    puts("ok");
    return 0;
}
