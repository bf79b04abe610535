#include "flopforge/reproject.hpp"

#include <string>

#include "flopforge/errors.hpp"
#include "flopforge/parallel.hpp"

namespace flopforge {

namespace {

void remap_row(RemapTable& map, const EquidistantLens& lens, const RectilinearCamera& cam,
               int ty) {
    for (int tx = 0; tx < cam.width; ++tx) {
        const ScreenCoord s = to_screen(tx, ty, cam.width, cam.height);
        const Vec3 ray = pixel_ray(s, cam.focal_px);
        const ScreenCoord hit = equidistant_lookup(ray, lens.r_pp);
        const std::size_t i = map.index(tx, ty);
        to_image(hit, lens.width, lens.height, map.src_x[i], map.src_y[i]);
    }
}

RemapTable empty_remap(const EquidistantLens& lens, const RectilinearCamera& cam) {
    RemapTable map;
    map.width = cam.width;
    map.height = cam.height;
    map.src_width = lens.width;
    map.src_height = lens.height;
    const std::size_t count = static_cast<std::size_t>(cam.width) * cam.height;
    map.src_x.resize(count);
    map.src_y.resize(count);
    return map;
}

} // namespace

RemapTable build_remap(const EquidistantLens& lens, const RectilinearCamera& cam) {
    RemapTable map = empty_remap(lens, cam);
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (int ty = 0; ty < cam.height; ++ty) {
        remap_row(map, lens, cam, ty);
    }
    return map;
}

RemapTable build_remap_serial(const EquidistantLens& lens, const RectilinearCamera& cam) {
    RemapTable map = empty_remap(lens, cam);
    for (int ty = 0; ty < cam.height; ++ty) {
        remap_row(map, lens, cam, ty);
    }
    return map;
}

std::array<std::uint8_t, 3> interpolate_bilinear(const RgbImage& image, double px, double py) {
    return bilinear_sample(image.width, image.height, px, py,
                           [&image](int x, int y) { return image.pixel(x, y); });
}

namespace {

void check_remap_source(const RgbImage& src, const RemapTable& map) {
    if (src.width != map.src_width || src.height != map.src_height) {
        throw ConfigError("remap table was built for a " + std::to_string(map.src_width) + "x" +
                          std::to_string(map.src_height) + " source, got " +
                          std::to_string(src.width) + "x" + std::to_string(src.height));
    }
}

} // namespace

RgbImage apply_remap(const RgbImage& src, const RemapTable& map) {
    check_remap_source(src, map);
    RgbImage out(map.width, map.height);
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            const std::size_t i = map.index(x, y);
            out.set_pixel(x, y, interpolate_bilinear(src, map.src_x[i], map.src_y[i]));
        }
    }
    return out;
}

RgbImage apply_remap_serial(const RgbImage& src, const RemapTable& map) {
    check_remap_source(src, map);
    RgbImage out(map.width, map.height);
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            const std::size_t i = map.index(x, y);
            out.set_pixel(x, y, interpolate_bilinear(src, map.src_x[i], map.src_y[i]));
        }
    }
    return out;
}

namespace {

void check_lens_source(const RgbImage& src, const EquidistantLens& lens) {
    if (src.width != lens.width || src.height != lens.height) {
        throw ConfigError("source image is " + std::to_string(src.width) + "x" +
                          std::to_string(src.height) + " but the lens expects " +
                          std::to_string(lens.width) + "x" + std::to_string(lens.height));
    }
}

} // namespace

RgbImage reproject(const RgbImage& src, const EquidistantLens& lens,
                   const RectilinearCamera& cam) {
    check_lens_source(src, lens);
    return apply_remap(src, build_remap(lens, cam));
}

RgbImage reproject_serial(const RgbImage& src, const EquidistantLens& lens,
                          const RectilinearCamera& cam) {
    check_lens_source(src, lens);
    return apply_remap_serial(src, build_remap_serial(lens, cam));
}

} // namespace flopforge
