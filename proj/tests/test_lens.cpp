#include <cmath>
#include <random>

#include <doctest.h>

#include "flopforge/errors.hpp"
#include "flopforge/lens.hpp"

using namespace flopforge;

TEST_CASE("focal_length evaluates the projection formula") {
    // 3x3 at 90 degrees: ||(2,2)|| / (2 tan 45) = sqrt(8)/2
    CHECK(focal_length(3, 3, std::numbers::pi / 2) ==
          doctest::Approx(std::sqrt(8.0) / 2.0).epsilon(1e-12));

    // the production target: 1280x1024 at 150 degrees
    CHECK(focal_length(1280, 1024, deg2rad(150.0)) == doctest::Approx(219.42).epsilon(5e-5));

    CHECK_THROWS_AS(focal_length(1280, 1024, std::numbers::pi), ConfigError);
    CHECK_THROWS_AS(focal_length(1280, 1024, 4.0), ConfigError);
    CHECK_THROWS_AS(focal_length(1280, 1024, 0.0), ConfigError);
    CHECK_THROWS_AS(focal_length(0, 1024, 1.0), ConfigError);
}

TEST_CASE("pixel_ray casts unit rays with a positive first component") {
    SUBCASE("optical axis") {
        const Vec3 v = pixel_ray({0.0, 0.0}, 100.0);
        CHECK(v.x == 1.0);
        CHECK(v.y == 0.0);
        CHECK(v.z == 0.0);
    }
    SUBCASE("45 degrees right") {
        const Vec3 v = pixel_ray({100.0, 0.0}, 100.0);
        CHECK(v.x == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
        CHECK(v.y == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
        CHECK(v.z == doctest::Approx(0.0));
    }
    SUBCASE("45 degrees down") {
        const Vec3 v = pixel_ray({0.0, -100.0}, 100.0);
        CHECK(v.x == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
        CHECK(v.y == doctest::Approx(0.0));
        CHECK(v.z == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("always unit length, always forward") {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> coord(-2000.0, 2000.0);
        for (int i = 0; i < 1000; ++i) {
            const Vec3 v = pixel_ray({coord(rng), coord(rng)}, 219.42);
            CHECK(std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z) ==
                  doctest::Approx(1.0).epsilon(1e-12));
            CHECK(v.x > 0.0);
        }
    }
    CHECK_THROWS_AS(pixel_ray({0.0, 0.0}, 0.0), ConfigError);
}

TEST_CASE("equidistant_lookup maps polar angle to radius") {
    SUBCASE("optical axis hits the center exactly") {
        const ScreenCoord hit = equidistant_lookup({1.0, 0.0, 0.0}, 0.001);
        CHECK(hit.x == 0.0);
        CHECK(hit.y == 0.0);
    }
    SUBCASE("half a radian off axis along +y") {
        const ScreenCoord hit =
            equidistant_lookup({std::cos(0.5), std::sin(0.5), 0.0}, 0.001);
        CHECK(hit.x == doctest::Approx(500.0).epsilon(1e-9));
        CHECK(hit.y == doctest::Approx(0.0));
    }
    SUBCASE("same angle rotated to -z") {
        const ScreenCoord hit =
            equidistant_lookup({std::cos(0.5), 0.0, -std::sin(0.5)}, 0.001);
        CHECK(hit.x == doctest::Approx(0.0));
        CHECK(hit.y == doctest::Approx(-500.0).epsilon(1e-9));
    }
    CHECK_THROWS_AS(equidistant_lookup({1.0, 0.0, 0.0}, 0.0), ConfigError);
}

TEST_CASE("projection properties over random screen points") {
    const double f = focal_length(1280, 1024, deg2rad(150.0));
    const double r_pp = deg2rad(195.0) / 1280.0;
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> coord_x(-639.5, 639.5);
    std::uniform_real_distribution<double> coord_y(-511.5, 511.5);

    for (int i = 0; i < 10000; ++i) {
        const ScreenCoord s{coord_x(rng), coord_y(rng)};
        const double radius_in = std::hypot(s.x, s.y);
        if (radius_in < 1e-6) {
            continue;
        }
        const ScreenCoord out = equidistant_lookup(pixel_ray(s, f), r_pp);
        const double radius_out = std::hypot(out.x, out.y);

        // azimuth preservation: out is a positive multiple of s
        const double cross = (s.x * out.y - s.y * out.x) / (radius_in * radius_out);
        CHECK(std::abs(cross) <= 1e-6);
        CHECK(s.x * out.x + s.y * out.y > 0.0);

        // radius law: ||out|| * r_pp equals the ray's polar angle
        const double theta = std::atan(radius_in / f);
        CHECK(radius_out * r_pp == doctest::Approx(theta).epsilon(1e-6));

        // symmetry: negating s negates the lookup
        const ScreenCoord mirrored = equidistant_lookup(pixel_ray({-s.x, -s.y}, f), r_pp);
        CHECK(mirrored.x == doctest::Approx(-out.x).epsilon(1e-12));
        CHECK(mirrored.y == doctest::Approx(-out.y).epsilon(1e-12));
    }
}

TEST_CASE("source radius grows strictly with screen radius") {
    const double f = 219.42;
    const double r_pp = 0.0026589;
    double previous = -1.0;
    for (double r = 0.0; r < 800.0; r += 2.5) {
        const ScreenCoord out = equidistant_lookup(pixel_ray({r, 0.0}, f), r_pp);
        const double radius = std::hypot(out.x, out.y);
        CHECK(radius > previous);
        previous = radius;
    }
}

TEST_CASE("equidistant lens construction") {
    SUBCASE("default r_pp spreads the fov across the width") {
        const EquidistantLens lens(1280, 1024, deg2rad(195.0));
        CHECK(lens.r_pp == doctest::Approx(deg2rad(195.0) / 1280.0).epsilon(1e-15));
    }
    SUBCASE("explicit r_pp is honoured") {
        const EquidistantLens lens(1280, 1024, deg2rad(195.0), 0.003);
        CHECK(lens.r_pp == 0.003);
    }
    SUBCASE("a single-pixel lens is fine") {
        CHECK_NOTHROW(EquidistantLens(1, 1, deg2rad(195.0)));
    }
    SUBCASE("an r_pp too small to cover the fov is rejected") {
        CHECK_THROWS_AS(EquidistantLens(1280, 1024, deg2rad(195.0), 1e-6), ConfigError);
    }
    CHECK_THROWS_AS(EquidistantLens(0, 1024, 1.0), ConfigError);
    CHECK_THROWS_AS(EquidistantLens(1280, 1024, 0.0), ConfigError);
}

TEST_CASE("rectilinear camera derives its focal length") {
    const RectilinearCamera cam(1280, 1024, deg2rad(150.0));
    CHECK(cam.focal_px == doctest::Approx(219.42).epsilon(5e-5));
    CHECK_THROWS_AS(RectilinearCamera(1280, 1024, std::numbers::pi), ConfigError);

    // the degenerate single-pixel target still has a usable ray
    const RectilinearCamera tiny(1, 1, deg2rad(150.0));
    CHECK(tiny.focal_px > 0.0);
}

TEST_CASE("screen and image coordinates convert both ways") {
    // the center pixel of an odd-sized image is exactly the origin
    const ScreenCoord center = to_screen(2.0, 2.0, 5, 5);
    CHECK(center.x == 0.0);
    CHECK(center.y == 0.0);

    // +y up: a smaller row index is a positive y
    const ScreenCoord above = to_screen(2.0, 1.0, 5, 5);
    CHECK(above.y == 1.0);

    double px = 0;
    double py = 0;
    to_image({-1.5, 2.25}, 1280, 1024, px, py);
    const ScreenCoord back = to_screen(px, py, 1280, 1024);
    CHECK(back.x == doctest::Approx(-1.5).epsilon(1e-15));
    CHECK(back.y == doctest::Approx(2.25).epsilon(1e-15));
}
