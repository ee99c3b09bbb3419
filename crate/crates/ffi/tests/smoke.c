#include <stdio.h>
#include <string.h>
#include "zhu.h"

int main(void) {
    ZhuSession *s = zhu_session_new();
    if (zhu_session_configure(s, "{\"command\": \"identities\", \"identities\": {\"max_n\": 3, \"max_n_two_var\": 2, \"max_wt\": 2}}") != ZHU_STATUS_OK) return 10;
    if (zhu_session_run(s) != ZHU_STATUS_OK) return 11;
    char *text = NULL;
    if (zhu_session_output(s, ZHU_OUTPUT_TEXT, &text) != ZHU_STATUS_OK) return 12;
    int ok = strstr(text, "summary:") != NULL;
    zhu_string_free(text);
    if (zhu_session_configure(s, "{\"n\": 99}") != ZHU_STATUS_USAGE) return 13;
    char *err = zhu_last_error();
    if (err == NULL) return 14;
    zhu_string_free(err);
    zhu_session_free(s);
    char *b = NULL;
    zhu_binomial(-2, 3, &b);
    printf("%s\n", b);
    ok = ok && strcmp(b, "-4") == 0;
    zhu_string_free(b);
    return ok ? 0 : 15;
}
