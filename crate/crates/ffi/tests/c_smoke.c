#include <stdio.h>
#include <string.h>

#include "xorshift_gf2.h"

int main(void) {
    XsSpec *spec = NULL;
    if (xs_spec_from_poly("degs:4,1,0", 2, &spec) != XS_STATUS_OK) {
        fprintf(stderr, "construct: %s\n", xs_last_error());
        return 1;
    }
    uint64_t seed[2] = {1, 1};
    XsGenerator *gen = NULL;
    if (xs_generator_new(spec, seed, 2, &gen) != XS_STATUS_OK) {
        fprintf(stderr, "seed: %s\n", xs_last_error());
        return 1;
    }
    uint8_t buf[2];
    xs_generator_fill_bytes(gen, buf, sizeof buf);
    xs_generator_free(gen);
    xs_spec_free(spec);
    if (buf[0] != 0x48 || buf[1] != 0xda) {
        fprintf(stderr, "stream mismatch: %02x %02x\n", buf[0], buf[1]);
        return 1;
    }
    if (xs_spec_from_poly("degs:4,3,2,1,0", 2, &spec) != XS_STATUS_NOT_PRIMITIVE) {
        return 1;
    }
    puts("ok");
    return 0;
}
