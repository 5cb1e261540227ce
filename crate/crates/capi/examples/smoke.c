/* Minimal consumer of the C API.
 *
 * Build (from the workspace root, after `cargo build -p bootcat-capi`):
 *   cc -I crates/capi/include crates/capi/examples/smoke.c \
 *      target/debug/libbootcat_capi.a -lm -o smoke
 */
#include <assert.h>
#include <stdio.h>

#include "bootcat.h"

int main(void) {
    BcObject *a = NULL, *b = NULL, *t = NULL;
    char *s = NULL;

    assert(bc_object_parse("kappa(2)", &a) == BcStatus_Ok);
    assert(bc_object_parse("moore(12)", &b) == BcStatus_Ok);

    assert(bc_kk_json(a, b, &s) == BcStatus_Ok);
    printf("KK(kappa(2), moore(12)) = %s\n", s);
    bc_string_free(s);

    assert(bc_tensor(a, b, &t) == BcStatus_Ok);
    assert(bc_object_display(t, &s) == BcStatus_Ok);
    printf("K(kappa(2) (x) moore(12)) = %s\n", s);
    bc_string_free(s);

    assert(bc_support(b, &s) == BcStatus_Ok);
    printf("supp moore(12) = %s\n", s);
    bc_string_free(s);

    bool flag = false;
    assert(bc_member(b, "2,3", &flag) == BcStatus_Ok && flag);
    assert(bc_is_smashing("0", &flag) == BcStatus_Ok && !flag);

    BcObject *bad = NULL;
    assert(bc_object_parse("Z/0", &bad) == BcStatus_ParseError);
    printf("expected failure: %s\n", bc_last_error_message());

    bc_object_free(a);
    bc_object_free(b);
    bc_object_free(t);
    return 0;
}
