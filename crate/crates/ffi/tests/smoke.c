#include <stdio.h>
#include <string.h>
#include "qhoare.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (line %d)\n", #cond, __LINE__); return 1; } } while (0)

int main(void) {
    QhCircuit *c = NULL, *o = NULL;
    CHECK(qh_circuit_parse("alloc a\nalloc b\nh a\ncx a b\nswap a b\n", &c) == QH_STATUS_OK);

    QhPassConfig cfg = qh_pass_config_default();
    cfg.window = 16;
    char *log = NULL;
    CHECK(qh_optimize(c, &cfg, &o, &log) == QH_STATUS_OK);
    CHECK(strstr(log, "trivial_single") != NULL);

    QhMetrics m;
    CHECK(qh_circuit_metrics(o, &m) == QH_STATUS_OK);
    CHECK(m.width == 2 && m.gates == 2);

    QhEquivalence e;
    CHECK(qh_verify(c, o, &e) == QH_STATUS_OK);
    CHECK(e.common_phase);

    char *text = qh_circuit_serialize(o);
    CHECK(strcmp(text, "alloc a\nalloc b\nh a\ncx a b\n") == 0);

    QhCircuit *bad = NULL;
    CHECK(qh_circuit_parse("alloc a\nbogus a\n", &bad) == QH_STATUS_PARSE);
    CHECK(bad == NULL);
    CHECK(strstr(qh_last_error(), "line 2") != NULL);

    qh_string_free(text);
    qh_string_free(log);
    qh_circuit_free(o);
    qh_circuit_free(c);
    printf("ok %s\n", qh_version());
    return 0;
}
