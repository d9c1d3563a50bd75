/* cc -Icrates/ffi/include crates/ffi/examples/score.c -Ltarget/release -lsimkit_ffi -o score */
#include <stdio.h>
#include "simkit.h"

int main(int argc, char **argv) {
    if (argc != 2) {
        fprintf(stderr, "usage: %s FILE.embp\n", argv[0]);
        return 1;
    }
    SimkitPairs *pairs = NULL;
    if (simkit_pairs_open(argv[1], &pairs) != SIMKIT_STATUS_OK) {
        char msg[256];
        simkit_last_error(msg, sizeof msg);
        fprintf(stderr, "simkit: %s\n", msg);
        return 2;
    }
    const char *names[] = {"Dot", "Cosine", "OS", "HTS"};
    for (uint32_t m = SIMKIT_METRIC_DOT; m <= SIMKIT_METRIC_TANH; m++) {
        double mse, rho;
        uint8_t defined;
        if (simkit_pairs_evaluate(pairs, m, 1e-8, &mse, &rho, &defined) == SIMKIT_STATUS_OK) {
            printf("%-6s mse %.6f  rho %.6f\n", names[m], mse, defined ? rho : 0.0);
        }
    }
    simkit_pairs_free(pairs);
    return 0;
}
