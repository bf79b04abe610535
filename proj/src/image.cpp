#include "flopforge/image.hpp"

#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "flopforge/errors.hpp"

namespace flopforge {

void BayerImage::validate() const {
    if (width <= 0 || height <= 0) {
        throw FormatError("mosaic dimensions must be positive");
    }
    if (width % 2 != 0 || height % 2 != 0) {
        throw FormatError("BGGR mosaic needs even dimensions, got " + std::to_string(width) +
                          "x" + std::to_string(height));
    }
    if (samples.size() != static_cast<std::size_t>(width) * height) {
        throw FormatError("mosaic sample count does not match dimensions");
    }
}

namespace {

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in) {
    std::string token;
    int ch = in.get();
    while (ch != std::istream::traits_type::eof()) {
        if (ch == '#') {
            while (ch != '\n' && ch != std::istream::traits_type::eof()) {
                ch = in.get();
            }
        } else if (std::isspace(ch)) {
            if (!token.empty()) {
                in.unget();
                return token;
            }
        } else {
            token.push_back(static_cast<char>(ch));
        }
        ch = in.get();
    }
    return token;
}

int header_value(std::istream& in, const char* what, int max_value) {
    const std::string token = next_token(in);
    if (token.empty()) {
        throw FormatError(std::string("missing ") + what + " in image header");
    }
    int value = 0;
    try {
        value = std::stoi(token);
    } catch (...) {
        throw FormatError(std::string("non-numeric ") + what + " '" + token + "'");
    }
    if (value < 1 || value > max_value) {
        throw FormatError(std::string(what) + " out of range: " + token);
    }
    return value;
}

void read_header(std::istream& in, const char* magic, int& width, int& height) {
    const std::string seen = next_token(in);
    if (seen != magic) {
        throw FormatError("expected " + std::string(magic) + " image, got '" + seen + "'");
    }
    width = header_value(in, "width", std::numeric_limits<int>::max());
    height = header_value(in, "height", std::numeric_limits<int>::max());
    const int maxval = header_value(in, "maxval", 65535);
    if (maxval > 255) {
        throw FormatError("only 8-bit images are supported, maxval=" + std::to_string(maxval));
    }
    // single whitespace byte separates header from payload
    in.get();
}

void read_payload(std::istream& in, std::uint8_t* data, std::size_t count) {
    in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count) {
        throw FormatError("truncated image payload");
    }
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open " + path.string());
    }
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    return out;
}

} // namespace

RgbImage read_ppm(std::istream& in) {
    int width = 0;
    int height = 0;
    read_header(in, "P6", width, height);
    RgbImage image(width, height);
    read_payload(in, image.pixels.data(), image.pixels.size());
    return image;
}

RgbImage read_ppm(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_ppm(in);
}

void write_ppm(std::ostream& out, const RgbImage& image) {
    out << "P6\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()),
              static_cast<std::streamsize>(image.pixels.size()));
    if (!out) {
        throw InputError("failed to write PPM payload");
    }
}

void write_ppm(const std::filesystem::path& path, const RgbImage& image) {
    auto out = open_output(path);
    write_ppm(out, image);
}

BayerImage read_pgm(std::istream& in) {
    int width = 0;
    int height = 0;
    read_header(in, "P5", width, height);
    BayerImage image(width, height);
    read_payload(in, image.samples.data(), image.samples.size());
    return image;
}

BayerImage read_pgm(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_pgm(in);
}

void write_pgm(std::ostream& out, const BayerImage& image) {
    out << "P5\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.samples.data()),
              static_cast<std::streamsize>(image.samples.size()));
    if (!out) {
        throw InputError("failed to write PGM payload");
    }
}

void write_pgm(const std::filesystem::path& path, const BayerImage& image) {
    auto out = open_output(path);
    write_pgm(out, image);
}

} // namespace flopforge
