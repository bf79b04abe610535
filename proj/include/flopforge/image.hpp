#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace flopforge {

// 8-bit RGB image, row-major triples.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; // width * height * 3

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3) {}

    std::uint8_t* at(int x, int y) {
        return pixels.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }
    const std::uint8_t* at(int x, int y) const {
        return pixels.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }
    std::array<std::uint8_t, 3> pixel(int x, int y) const {
        const std::uint8_t* p = at(x, y);
        return {p[0], p[1], p[2]};
    }
    void set_pixel(int x, int y, std::array<std::uint8_t, 3> rgb) {
        std::uint8_t* p = at(x, y);
        p[0] = rgb[0];
        p[1] = rgb[1];
        p[2] = rgb[2];
    }
    bool operator==(const RgbImage&) const = default;
};

// Raw 8-bit sensor frame in a BGGR mosaic (also serves as the plain
// greyscale payload of a PGM file). Width and height must be even to form
// complete 2x2 BGGR cells; demosaicing validates this.
struct BayerImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> samples; // width * height, row-major

    BayerImage() = default;
    BayerImage(int w, int h) : width(w), height(h), samples(static_cast<std::size_t>(w) * h) {}

    std::uint8_t sample(int x, int y) const {
        return samples[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& sample(int x, int y) {
        return samples[static_cast<std::size_t>(y) * width + x];
    }
    bool operator==(const BayerImage&) const = default;

    void validate() const; // throws FormatError on odd dimensions / size mismatch
};

// Binary PPM (P6) and PGM (P5), 8-bit only. Readers throw FormatError on
// malformed headers or truncated payloads, InputError on unreadable files.
RgbImage read_ppm(std::istream& in);
RgbImage read_ppm(const std::filesystem::path& path);
void write_ppm(std::ostream& out, const RgbImage& image);
void write_ppm(const std::filesystem::path& path, const RgbImage& image);

BayerImage read_pgm(std::istream& in);
BayerImage read_pgm(const std::filesystem::path& path);
void write_pgm(std::ostream& out, const BayerImage& image);
void write_pgm(const std::filesystem::path& path, const BayerImage& image);

} // namespace flopforge
