#include <stdio.h>
#include <string.h>

#include "skinrule.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "check failed at line %d: %s\n", __LINE__, #cond); \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    uint32_t rule = 0;
    CHECK(skin_rule_from_name("rgb-ratio", &rule) == SKIN_STATUS_OK);
    CHECK(rule == 4);

    uint8_t label = 0;
    CHECK(skin_classify(rule, 150, 100, 50, &label) == SKIN_STATUS_OK && label == 1);
    CHECK(skin_classify(99, 0, 0, 0, &label) == SKIN_STATUS_INVALID_ARGUMENT);
    CHECK(strstr(skin_last_error_message(), "99") != NULL);

    SkinLut *lut = skin_lut_build(rule);
    CHECK(lut != NULL);
    const uint8_t rgb[6] = {150, 100, 50, 0, 0, 255};
    uint8_t mask[2] = {7, 7};
    CHECK(skin_lut_classify_rgb8(lut, rgb, 2, mask) == SKIN_STATUS_OK);
    CHECK(mask[0] == 255 && mask[1] == 0);
    skin_lut_free(lut);

    SkinChannelRanges ranges;
    CHECK(skin_channel_ranges(0, &ranges) == SKIN_STATUS_OK);
    CHECK(ranges.r_min == 96 && ranges.g_max == 239 && ranges.b_max == 254 && !ranges.empty);

    printf("ok\n");
    return 0;
}
