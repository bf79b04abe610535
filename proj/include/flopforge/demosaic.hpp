#pragma once

#include <array>
#include <cstdint>

#include "flopforge/image.hpp"

namespace flopforge {

// Bilinear BGGR demosaic: each pixel's missing channels are averages of the
// nearest same-channel neighbours, borders replicate edge pixels, and
// averages round half away from zero. Output dimensions equal the input's.
RgbImage demosaic_bilinear(const BayerImage& raw);

// Plain-loop reference the OpenMP version is tested against; bit-identical.
RgbImage demosaic_bilinear_serial(const BayerImage& raw);

// Demosaiced colour of a single site, same stencils as the full pass. Used
// by the fused preprocessing path to demosaic only sampled neighbourhoods.
std::array<std::uint8_t, 3> demosaic_at(const BayerImage& raw, int x, int y);

} // namespace flopforge
