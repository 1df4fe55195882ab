#include <stdio.h>
#include <string.h>
#include "symdyn.h"

static int fail(const char *what) {
    const char *msg = symdyn_last_error();
    fprintf(stderr, "%s: %s\n", what, msg ? msg : "(no message)");
    return 1;
}

int main(void) {
    SymdynSpace *space = NULL;
    if (symdyn_space_from_json("{\"alphabet_size\":2,\"order\":1,\"forbidden_words\":[\"11\"]}", &space) != SYMDYN_STATUS_OK)
        return fail("space");

    uint64_t fixed = 0;
    if (symdyn_space_periodic_count(space, 5, &fixed) != SYMDYN_STATUS_OK)
        return fail("periodic");

    SymdynSystem *system = NULL;
    if (symdyn_system_from_json(space, "{\"factors\":[{\"kind\":\"shift_power\",\"p\":1},{\"kind\":\"shift_power\",\"p\":2}]}", &system) != SYMDYN_STATUS_OK)
        return fail("system");

    bool ok = false;
    char *json = NULL;
    if (symdyn_certify_delta(system, 2, 40, &ok, &json) != SYMDYN_STATUS_OK)
        return fail("certify");

    printf("periodic=%llu satisfied=%d json=%d\n", (unsigned long long)fixed, ok, json[0] == '{');
    symdyn_string_free(json);
    symdyn_system_free(system);
    symdyn_space_free(space);

    if (symdyn_space_from_json("{\"alphabet_size\":", &space) != SYMDYN_STATUS_INVALID_JSON)
        return 1;
    printf("error=%s\n", symdyn_last_error() ? "set" : "missing");
    return 0;
}
