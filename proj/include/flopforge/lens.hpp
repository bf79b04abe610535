#pragma once

#include <numbers>
#include <optional>

namespace flopforge {

constexpr double deg2rad(double degrees) { return degrees * std::numbers::pi / 180.0; }
constexpr double rad2deg(double radians) { return radians * 180.0 / std::numbers::pi; }

// Real-valued pixel coordinates with the origin at the image center,
// +x to the right and +y up.
struct ScreenCoord {
    double x = 0;
    double y = 0;
};

struct Vec3 {
    double x = 0;
    double y = 0;
    double z = 0;
};

// Focal length in pixels for a rectilinear image of the given size and
// (diagonal) field of view: ||(width-1, height-1)|| / (2 tan(fov/2)).
// fov must lie in (0, pi); at pi the image would be infinite.
double focal_length(int width, int height, double fov_rad);

// Unit ray through a target pixel: (f, s_x, s_y) normalized. The first
// component is always positive.
Vec3 pixel_ray(ScreenCoord s, double focal_px);

// Where a unit ray lands in the equidistant source image, in screen-centered
// coordinates. theta = arccos(v_x) is the ray's polar angle; the returned
// radius is theta / radians_per_pixel, and rays within 1e-9 of the optical
// axis map to (0, 0) to avoid the 0/0 in theta/sin(theta).
ScreenCoord equidistant_lookup(const Vec3& v, double radians_per_pixel);

// Equidistant (fisheye) source model. r_pp is how many radians of view one
// pixel spans; by default the lens fov spans the image width.
struct EquidistantLens {
    int width = 0;
    int height = 0;
    double fov = 0;  // radians
    double r_pp = 0; // radians per pixel

    EquidistantLens(int width, int height, double fov_rad,
                    std::optional<double> radians_per_pixel = std::nullopt);
};

// Rectilinear (pinhole) target model; focal length derived from the size and
// field of view.
struct RectilinearCamera {
    int width = 0;
    int height = 0;
    double fov = 0;      // radians, in (0, pi)
    double focal_px = 0; // derived

    RectilinearCamera(int width, int height, double fov_rad);
};

// Conversions between image coordinates (pixel (0,0) top-left, +y down) and
// screen-centered coordinates. The center sits at ((width-1)/2, (height-1)/2).
ScreenCoord to_screen(double px, double py, int width, int height);
void to_image(ScreenCoord s, int width, int height, double& px, double& py);

} // namespace flopforge
