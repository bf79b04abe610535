#include <random>

#include <doctest.h>

#include "flopforge/demosaic.hpp"
#include "flopforge/errors.hpp"

using namespace flopforge;

namespace {

// B G   (even rows: blue/green, odd rows: green/red)
// G R
BayerImage bggr_constant(int width, int height, std::uint8_t blue, std::uint8_t green,
                         std::uint8_t red) {
    BayerImage raw(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const bool odd_row = (y & 1) != 0;
            const bool odd_col = (x & 1) != 0;
            if (!odd_row && !odd_col) {
                raw.sample(x, y) = blue;
            } else if (odd_row && odd_col) {
                raw.sample(x, y) = red;
            } else {
                raw.sample(x, y) = green;
            }
        }
    }
    return raw;
}

BayerImage random_mosaic(int width, int height, std::uint8_t max_value, std::uint32_t seed) {
    BayerImage raw(width, height);
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> value(0, max_value);
    for (auto& sample : raw.samples) {
        sample = static_cast<std::uint8_t>(value(rng));
    }
    return raw;
}

} // namespace

TEST_CASE("uniform mosaics demosaic to the same uniform colour") {
    const BayerImage raw = bggr_constant(8, 8, 128, 128, 128);
    const RgbImage rgb = demosaic_bilinear(raw);
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
            const auto p = rgb.pixel(x, y);
            CHECK(p[0] == 128);
            CHECK(p[1] == 128);
            CHECK(p[2] == 128);
        }
    }
}

TEST_CASE("channel-constant mosaics produce exact interior colours") {
    const BayerImage raw = bggr_constant(4, 4, 200, 100, 50);
    const RgbImage rgb = demosaic_bilinear(raw);
    for (int y = 1; y < 3; ++y) {
        for (int x = 1; x < 3; ++x) {
            const auto p = rgb.pixel(x, y);
            CHECK(p[0] == 50);
            CHECK(p[1] == 100);
            CHECK(p[2] == 200);
        }
    }
}

TEST_CASE("a lone bright blue site spreads by the bilinear stencil") {
    BayerImage raw(6, 6);
    raw.sample(2, 2) = 255; // a B site

    const RgbImage rgb = demosaic_bilinear(raw);

    // hand-applied stencils
    CHECK(rgb.pixel(2, 2)[2] == 255); // own site
    CHECK(rgb.pixel(1, 2)[2] == 128); // horizontal G neighbours: (0+255)/2 rounded up
    CHECK(rgb.pixel(3, 2)[2] == 128);
    CHECK(rgb.pixel(2, 1)[2] == 128); // vertical G neighbours
    CHECK(rgb.pixel(2, 3)[2] == 128);
    CHECK(rgb.pixel(1, 1)[2] == 64); // diagonal R sites: 255/4 = 63.75 rounded
    CHECK(rgb.pixel(3, 1)[2] == 64);
    CHECK(rgb.pixel(1, 3)[2] == 64);
    CHECK(rgb.pixel(3, 3)[2] == 64);

    // nothing leaks outside the stencil footprint or into other channels
    CHECK(rgb.pixel(4, 2)[2] == 0);
    CHECK(rgb.pixel(0, 0)[2] == 0);
    for (int y = 0; y < 6; ++y) {
        for (int x = 0; x < 6; ++x) {
            CHECK(rgb.pixel(x, y)[0] == 0);
            CHECK(rgb.pixel(x, y)[1] == 0);
        }
    }
}

TEST_CASE("channel provenance: the own-site channel is the raw sample") {
    const BayerImage raw = random_mosaic(64, 64, 255, 99);
    const RgbImage rgb = demosaic_bilinear(raw);
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            const bool odd_row = (y & 1) != 0;
            const bool odd_col = (x & 1) != 0;
            const auto p = rgb.pixel(x, y);
            if (!odd_row && !odd_col) {
                CHECK(p[2] == raw.sample(x, y)); // blue site
            } else if (odd_row && odd_col) {
                CHECK(p[0] == raw.sample(x, y)); // red site
            } else {
                CHECK(p[1] == raw.sample(x, y)); // green site
            }
        }
    }
}

TEST_CASE("demosaic is linear within 8-bit rounding") {
    const BayerImage raw = random_mosaic(64, 64, 127, 4242);
    BayerImage doubled(64, 64);
    for (std::size_t i = 0; i < raw.samples.size(); ++i) {
        doubled.samples[i] = static_cast<std::uint8_t>(raw.samples[i] * 2);
    }
    const RgbImage rgb = demosaic_bilinear(raw);
    const RgbImage rgb2 = demosaic_bilinear(doubled);
    for (std::size_t i = 0; i < rgb.pixels.size(); ++i) {
        const int difference = static_cast<int>(rgb2.pixels[i]) - 2 * rgb.pixels[i];
        CHECK(std::abs(difference) <= 1);
    }
}

TEST_CASE("the OpenMP pass matches the serial reference bit for bit") {
    const BayerImage raw = random_mosaic(128, 96, 255, 7);
    CHECK(demosaic_bilinear(raw) == demosaic_bilinear_serial(raw));
}

TEST_CASE("demosaic_at agrees with the full pass everywhere") {
    const BayerImage raw = random_mosaic(32, 32, 255, 13);
    const RgbImage rgb = demosaic_bilinear(raw);
    for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 32; ++x) {
            CHECK(demosaic_at(raw, x, y) == rgb.pixel(x, y));
        }
    }
}

TEST_CASE("odd dimensions and size mismatches are format errors") {
    CHECK_THROWS_AS(demosaic_bilinear(BayerImage(5, 4)), FormatError);
    CHECK_THROWS_AS(demosaic_bilinear(BayerImage(4, 5)), FormatError);
    BayerImage broken(4, 4);
    broken.samples.pop_back();
    CHECK_THROWS_AS(demosaic_bilinear(broken), FormatError);
}
