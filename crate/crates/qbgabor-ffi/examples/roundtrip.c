/* Round-trip smoke test against the C API.
 *
 * Build (from the workspace root, after `cargo build --release -p qbgabor-ffi`):
 *   cc crates/qbgabor-ffi/examples/roundtrip.c \
 *      -Icrates/qbgabor-ffi/include \
 *      target/release/libqbgabor_ffi.a -lm -lpthread -ldl -o roundtrip
 */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "qbgabor.h"

int main(void) {
    QbgSignal *window = NULL, *f = NULL, *back = NULL, *dual = NULL;
    QbgSystem *system = NULL;
    QbgGrid *grid = NULL;
    double lower = 0.0, upper = 0.0;

    if (qbg_signal_gaussian(128, &window) != QBG_STATUS_OK) goto fail;
    if (qbg_system_create(window, 4, 16, &system) != QBG_STATUS_OK) goto fail;
    if (qbg_system_frame_bounds(system, &lower, &upper) != QBG_STATUS_OK) goto fail;
    printf("frame bounds: [%.6f, %.6f]\n", lower, upper);

    if (qbg_system_canonical_dual(system, 0, 1e-10, 500, &dual) != QBG_STATUS_OK) goto fail;
    if (qbg_signal_random(128, 7, &f) != QBG_STATUS_OK) goto fail;
    if (qbg_dgt(system, f, 0, &grid) != QBG_STATUS_OK) goto fail;
    if (qbg_idgt(system, grid, 1, &back) != QBG_STATUS_OK) goto fail;

    {
        double fr[128], fi[128], br[128], bi[128];
        double err = 0.0, ref = 0.0;
        int i;
        if (qbg_signal_copy_data(f, fr, fi) != QBG_STATUS_OK) goto fail;
        if (qbg_signal_copy_data(back, br, bi) != QBG_STATUS_OK) goto fail;
        for (i = 0; i < 128; i++) {
            err += (fr[i] - br[i]) * (fr[i] - br[i]) + (fi[i] - bi[i]) * (fi[i] - bi[i]);
            ref += fr[i] * fr[i] + fi[i] * fi[i];
        }
        printf("relative roundtrip error: %.3e\n", sqrt(err / ref));
        if (sqrt(err / ref) > 1e-10) goto fail;
    }

    qbg_signal_free(back);
    qbg_grid_free(grid);
    qbg_signal_free(dual);
    qbg_signal_free(f);
    qbg_system_free(system);
    qbg_signal_free(window);
    printf("ok\n");
    return 0;

fail:
    fprintf(stderr, "failure: %s\n", qbg_last_error_message());
    return 1;
}
