#include <stdio.h>
#include <string.h>
#include "mes.h"

int main(void) {
    MesComposition *c = NULL;
    if (mes_composition_parse("2,2", &c) != MES_STATUS_OK) return 1;
    MesTensor *t = NULL;
    if (mes_coproduct(c, &t) != MES_STATUS_OK || mes_tensor_len(t) != 3) return 2;

    MesSeries *s = NULL;
    if (mes_g_tilde_sh(c, 10, &s) != MES_STATUS_OK) return 3;
    char *num = NULL, *den = NULL;
    if (mes_series_coeff(s, 4, &num, &den) != MES_STATUS_OK) return 4;
    printf("%s/%s\n", num, den);
    mes_string_free(num);
    mes_string_free(den);

    MesComposition *bad = NULL;
    if (mes_composition_parse("2,0", &bad) != MES_STATUS_INVALID_ARGUMENT) return 5;
    if (strlen(mes_last_error()) == 0) return 6;

    mes_series_free(s);
    mes_tensor_free(t);
    mes_composition_free(c);
    return 0;
}
