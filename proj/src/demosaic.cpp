#include "flopforge/demosaic.hpp"

#include <algorithm>

#include "flopforge/parallel.hpp"

namespace flopforge {

namespace {

// Edge-replicating sample access; equivalent to padding the mosaic by one
// replicated row/column on every side.
inline int clamped(const BayerImage& raw, int x, int y) {
    x = std::clamp(x, 0, raw.width - 1);
    y = std::clamp(y, 0, raw.height - 1);
    return raw.sample(x, y);
}

inline std::uint8_t avg2(int a, int b) {
    return static_cast<std::uint8_t>((a + b + 1) / 2);
}

inline std::uint8_t avg4(int a, int b, int c, int d) {
    return static_cast<std::uint8_t>((a + b + c + d + 2) / 4);
}

} // namespace

std::array<std::uint8_t, 3> demosaic_at(const BayerImage& raw, int x, int y) {
    const auto own = static_cast<std::uint8_t>(raw.sample(x, y));
    const int north = clamped(raw, x, y - 1);
    const int south = clamped(raw, x, y + 1);
    const int west = clamped(raw, x - 1, y);
    const int east = clamped(raw, x + 1, y);

    const bool odd_row = (y & 1) != 0;
    const bool odd_col = (x & 1) != 0;

    if (!odd_row && !odd_col) {
        // B site: green from the cross, red from the diagonals.
        const std::uint8_t g = avg4(north, south, west, east);
        const std::uint8_t r = avg4(clamped(raw, x - 1, y - 1), clamped(raw, x + 1, y - 1),
                                    clamped(raw, x - 1, y + 1), clamped(raw, x + 1, y + 1));
        return {r, g, own};
    }
    if (!odd_row && odd_col) {
        // G site in a blue row: blue left/right, red above/below.
        return {avg2(north, south), own, avg2(west, east)};
    }
    if (odd_row && !odd_col) {
        // G site in a red row: red left/right, blue above/below.
        return {avg2(west, east), own, avg2(north, south)};
    }
    // R site: green from the cross, blue from the diagonals.
    const std::uint8_t g = avg4(north, south, west, east);
    const std::uint8_t b = avg4(clamped(raw, x - 1, y - 1), clamped(raw, x + 1, y - 1),
                                clamped(raw, x - 1, y + 1), clamped(raw, x + 1, y + 1));
    return {own, g, b};
}

RgbImage demosaic_bilinear(const BayerImage& raw) {
    raw.validate();
    RgbImage out(raw.width, raw.height);
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (int y = 0; y < raw.height; ++y) {
        for (int x = 0; x < raw.width; ++x) {
            out.set_pixel(x, y, demosaic_at(raw, x, y));
        }
    }
    return out;
}

RgbImage demosaic_bilinear_serial(const BayerImage& raw) {
    raw.validate();
    RgbImage out(raw.width, raw.height);
    for (int y = 0; y < raw.height; ++y) {
        for (int x = 0; x < raw.width; ++x) {
            out.set_pixel(x, y, demosaic_at(raw, x, y));
        }
    }
    return out;
}

} // namespace flopforge
