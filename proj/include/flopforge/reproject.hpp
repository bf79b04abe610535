#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "flopforge/image.hpp"
#include "flopforge/lens.hpp"

namespace flopforge {

// Per-target-pixel source lookup coordinates. Depends only on the
// (lens, camera) pair, so it is built once and reused across frames;
// immutable after construction and safe to share between threads.
struct RemapTable {
    int width = 0;  // target (camera) dimensions
    int height = 0;
    int src_width = 0; // source (lens) dimensions the table was built for
    int src_height = 0;
    std::vector<double> src_x; // width * height, image coordinates
    std::vector<double> src_y;

    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
};

RemapTable build_remap(const EquidistantLens& lens, const RectilinearCamera& cam);
RemapTable build_remap_serial(const EquidistantLens& lens, const RectilinearCamera& cam);

inline std::uint8_t round_channel(double value) {
    // half away from zero, clamped to the 8-bit range
    return static_cast<std::uint8_t>(std::clamp<long>(std::lround(value), 0, 255));
}

// Bilinear blend of the four pixels around (px, py), fetched through any
// sampler with signature (x, y) -> array<uint8_t, 3>. Coordinates outside
// the pixel-center rectangle yield black.
template <class Sampler>
std::array<std::uint8_t, 3> bilinear_sample(int width, int height, double px, double py,
                                            Sampler&& pixel) {
    if (!(px >= 0.0 && py >= 0.0 && px <= width - 1.0 && py <= height - 1.0)) {
        return {0, 0, 0};
    }
    const int x0 = static_cast<int>(px);
    const int y0 = static_cast<int>(py);
    const int x1 = std::min(x0 + 1, width - 1);
    const int y1 = std::min(y0 + 1, height - 1);
    const double fx = px - x0;
    const double fy = py - y0;
    const auto p00 = pixel(x0, y0);
    const auto p10 = pixel(x1, y0);
    const auto p01 = pixel(x0, y1);
    const auto p11 = pixel(x1, y1);
    std::array<std::uint8_t, 3> out{};
    for (int ch = 0; ch < 3; ++ch) {
        const double top = p00[ch] * (1.0 - fx) + p10[ch] * fx;
        const double bottom = p01[ch] * (1.0 - fx) + p11[ch] * fx;
        out[ch] = round_channel(top * (1.0 - fy) + bottom * fy);
    }
    return out;
}

// Bilinear colour at real-valued pixel coordinates; outside the image is
// black rather than an error.
std::array<std::uint8_t, 3> interpolate_bilinear(const RgbImage& image, double px, double py);

RgbImage apply_remap(const RgbImage& src, const RemapTable& map);
RgbImage apply_remap_serial(const RgbImage& src, const RemapTable& map);

// Casts a ray for every target pixel and samples the equidistant source.
// The source must match the lens dimensions; target fov wider than the lens
// coverage simply produces black corners.
RgbImage reproject(const RgbImage& src, const EquidistantLens& lens,
                   const RectilinearCamera& cam);
RgbImage reproject_serial(const RgbImage& src, const EquidistantLens& lens,
                          const RectilinearCamera& cam);

} // namespace flopforge
