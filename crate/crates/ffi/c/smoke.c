#include <stdio.h>
#include <string.h>

#include "inertia_lab.h"

int main(void) {
    IlFamily *fam = NULL;
    if (il_family_from_preset("a5", &fam) != IL_OK) {
        fprintf(stderr, "%s\n", il_last_error());
        return 1;
    }
    char *n = NULL;
    il_family_n(fam, &n);
    printf("N = %s\n", n);
    il_string_free(n);

    char *json = NULL;
    bool ok = false;
    int32_t rc = il_family_certify(fam, "-3", &json, &ok);
    il_family_free(fam);
    if (rc != IL_OK) {
        fprintf(stderr, "%s\n", il_last_error());
        return 1;
    }
    printf("all_certified = %d\n", ok);
    il_string_free(json);

    const char *argv[] = {"reproduce", "s3"};
    IlReport *report = NULL;
    rc = il_run(2, argv, &report);
    printf("reproduce s3: rc=%d passed=%d verdicts=%zu\n", rc, il_report_passed(report),
           il_report_verdict_count(report));
    il_report_free(report);
    return rc == IL_OK && ok ? 0 : 1;
}
