#include "flopforge/lens.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "flopforge/errors.hpp"

namespace flopforge {

double focal_length(int width, int height, double fov_rad) {
    if (width < 1 || height < 1) {
        throw ConfigError("image dimensions must be positive");
    }
    if (fov_rad <= 0) {
        throw ConfigError("field of view must be positive");
    }
    if (fov_rad >= std::numbers::pi) {
        throw ConfigError("rectilinear field of view must be below pi radians; "
                          "the image would be infinite");
    }
    const double diagonal = std::hypot(width - 1.0, height - 1.0);
    return diagonal / (2.0 * std::tan(fov_rad / 2.0));
}

Vec3 pixel_ray(ScreenCoord s, double focal_px) {
    if (focal_px <= 0) {
        throw ConfigError("focal length must be positive");
    }
    const double norm = std::sqrt(focal_px * focal_px + s.x * s.x + s.y * s.y);
    return {focal_px / norm, s.x / norm, s.y / norm};
}

ScreenCoord equidistant_lookup(const Vec3& v, double radians_per_pixel) {
    if (radians_per_pixel <= 0) {
        throw ConfigError("radians per pixel must be positive");
    }
    const double theta = std::acos(std::clamp(v.x, -1.0, 1.0));
    if (theta < 1e-9) {
        return {0.0, 0.0};
    }
    const double alpha = theta / (radians_per_pixel * std::sin(theta));
    return {alpha * v.y, alpha * v.z};
}

EquidistantLens::EquidistantLens(int width_, int height_, double fov_rad,
                                 std::optional<double> radians_per_pixel)
    : width(width_), height(height_), fov(fov_rad) {
    if (width < 1 || height < 1) {
        throw ConfigError("lens image dimensions must be positive");
    }
    if (fov <= 0) {
        throw ConfigError("lens field of view must be positive");
    }
    r_pp = radians_per_pixel.value_or(fov / width);
    if (r_pp <= 0) {
        throw ConfigError("radians per pixel must be positive");
    }
    // The radial pixel extent must span the full field of view.
    const double radial_extent = std::max(width, height);
    if (r_pp * radial_extent < fov - 1e-9) {
        throw ConfigError("lens of " + std::to_string(rad2deg(fov)) +
                          " deg cannot fit a " + std::to_string(width) + "x" +
                          std::to_string(height) + " image at " + std::to_string(r_pp) +
                          " rad/px");
    }
}

RectilinearCamera::RectilinearCamera(int width_, int height_, double fov_rad)
    : width(width_), height(height_), fov(fov_rad) {
    focal_px = focal_length(width, height, fov);
    if (focal_px == 0.0) {
        // a 1x1 target has no off-axis pixels; any positive focal length
        // yields its single optical-axis ray
        focal_px = 1.0;
    }
}

ScreenCoord to_screen(double px, double py, int width, int height) {
    return {px - (width - 1) / 2.0, (height - 1) / 2.0 - py};
}

void to_image(ScreenCoord s, int width, int height, double& px, double& py) {
    px = s.x + (width - 1) / 2.0;
    py = (height - 1) / 2.0 - s.y;
}

} // namespace flopforge
