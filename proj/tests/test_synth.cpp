#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "synth.hpp"

using namespace adicurb;

TEST_CASE("curb_lateral evaluates the lateral polynomial per side")
{
    SynthConfig spec;
    spec.road_width = 8.0;
    spec.left_a1 = 0.01;
    spec.left_a2 = -0.001;
    spec.right_a1 = 0.02;
    CHECK(curb_lateral(spec, true, 0.0) == doctest::Approx(4.0));
    CHECK(curb_lateral(spec, false, 0.0) == doctest::Approx(-4.0));
    CHECK(curb_lateral(spec, true, 10.0) == doctest::Approx(4.0 + 0.1 - 0.1));
    CHECK(curb_lateral(spec, false, 10.0) == doctest::Approx(-4.0 + 0.2));
}

namespace
{

SynthConfig quick_spec()
{
    SynthConfig spec;
    spec.rings = 32;
    spec.azimuth_resolution = 0.5 * M_PI / 180.0;
    spec.max_range = 40.0;
    spec.noise_sigma = 0.0;
    return spec;
}

} // namespace

TEST_CASE("generate_scene surfaces sit on the road and sidewalk planes")
{
    const SynthConfig spec = quick_spec();
    const Scene scene = generate_scene(spec);
    REQUIRE_FALSE(scene.cloud.empty());
    REQUIRE(scene.cloud.ring_ids.size() == scene.cloud.size());
    CHECK(scene.cloud.num_rings == spec.rings);

    std::size_t road = 0, sidewalk = 0, face = 0;
    for (const RawPoint& p : scene.cloud.points)
    {
        const double lateral_left = curb_lateral(spec, true, p.x);
        const double lateral_right = curb_lateral(spec, false, p.x);
        if (p.intensity == doctest::Approx(0.3f))
        {
            ++road;
            CHECK(p.z == doctest::Approx(-spec.sensor_height).epsilon(1e-6));
            CHECK(p.y < lateral_left + 1e-6);
            CHECK(p.y > lateral_right - 1e-6);
        }
        else if (p.intensity == doctest::Approx(0.5f))
        {
            ++sidewalk;
            CHECK(p.z ==
                  doctest::Approx(-spec.sensor_height + spec.curb_height).epsilon(1e-6));
        }
        else if (p.intensity == doctest::Approx(0.7f))
        {
            ++face;
            // Face points lie on one of the two curb lines, between the planes.
            const double d = std::min(std::abs(p.y - lateral_left),
                                      std::abs(p.y - lateral_right));
            CHECK(d < 1e-3);
            CHECK(p.z >= -spec.sensor_height - 1e-6);
            CHECK(p.z <= -spec.sensor_height + spec.curb_height + 1e-6);
        }
        const double range = std::sqrt(double(p.x) * p.x + double(p.y) * p.y +
                                       double(p.z) * p.z);
        CHECK(range <= spec.max_range + 1e-6);
    }
    CHECK(road > 1000);
    CHECK(sidewalk > 1000);
    CHECK(face > 50);
}

TEST_CASE("generate_scene is seed-deterministic and seed-sensitive")
{
    SynthConfig spec = quick_spec();
    spec.noise_sigma = 0.01;
    spec.seed = 5;
    const Scene a = generate_scene(spec);
    const Scene b = generate_scene(spec);
    REQUIRE(a.cloud.size() == b.cloud.size());
    bool identical = true;
    for (std::size_t i = 0; i < a.cloud.size(); ++i)
        if (a.cloud.points[i].z != b.cloud.points[i].z)
            identical = false;
    CHECK(identical);

    spec.seed = 6;
    const Scene c = generate_scene(spec);
    REQUIRE(c.cloud.size() == a.cloud.size()); // geometry unchanged
    bool differs = false;
    for (std::size_t i = 0; i < a.cloud.size(); ++i)
        if (a.cloud.points[i].z != c.cloud.points[i].z)
            differs = true;
    CHECK(differs);
}

TEST_CASE("noise perturbs only z")
{
    SynthConfig spec = quick_spec();
    const Scene clean = generate_scene(spec);
    spec.noise_sigma = 0.02;
    const Scene noisy = generate_scene(spec);
    REQUIRE(clean.cloud.size() == noisy.cloud.size());
    double max_dz = 0.0;
    for (std::size_t i = 0; i < clean.cloud.size(); ++i)
    {
        CHECK(clean.cloud.points[i].x == noisy.cloud.points[i].x);
        CHECK(clean.cloud.points[i].y == noisy.cloud.points[i].y);
        max_dz = std::max(max_dz, std::abs(double(clean.cloud.points[i].z) -
                                           noisy.cloud.points[i].z));
    }
    CHECK(max_dz > 0.001);
    CHECK(max_dz < 0.2);
}

TEST_CASE("obstacle box adds high-intensity returns and occludes the surface")
{
    SynthConfig spec = quick_spec();
    spec.obstacle = true;
    spec.box.cx = 10.0;
    spec.box.cy = 1.5;
    const Scene scene = generate_scene(spec);
    std::size_t box_points = 0;
    for (const RawPoint& p : scene.cloud.points)
        if (p.intensity == doctest::Approx(0.9f))
        {
            ++box_points;
            CHECK(p.x >= spec.box.cx - spec.box.dx / 2 - 1e-6);
            CHECK(p.x <= spec.box.cx + spec.box.dx / 2 + 1e-6);
            CHECK(p.y >= spec.box.cy - spec.box.dy / 2 - 1e-6);
            CHECK(p.y <= spec.box.cy + spec.box.dy / 2 + 1e-6);
        }
    CHECK(box_points > 100);
}

TEST_CASE("ground-truth polylines trace the curb lines at road level")
{
    SynthConfig spec = quick_spec();
    spec.left_a1 = 0.01;
    const Scene scene = generate_scene(spec);
    REQUIRE_FALSE(scene.left_curb.empty());
    REQUIRE_FALSE(scene.right_curb.empty());
    for (const Eigen::Vector3d& p : scene.left_curb)
    {
        CHECK(p.x() >= spec.gt_x_min - 1e-9);
        CHECK(p.x() <= spec.gt_x_max + 1e-9);
        CHECK(p.y() == doctest::Approx(curb_lateral(spec, true, p.x())).epsilon(1e-9));
        CHECK(p.z() == doctest::Approx(-spec.sensor_height));
    }
    for (const Eigen::Vector3d& p : scene.right_curb)
        CHECK(p.y() == doctest::Approx(curb_lateral(spec, false, p.x())).epsilon(1e-9));
}

TEST_CASE("synthetic calibration projects forward ground points inside the image")
{
    const Scene scene = generate_scene(quick_spec());
    CHECK(scene.calib.image_width == 1242);
    CHECK(scene.calib.image_height == 375);
    CHECK(scene.calib.projection(0, 0) > 0.0);
    // Rotation block of the extrinsics must be orthonormal.
    const Eigen::Matrix3d r = scene.calib.lidar_to_cam.topLeftCorner<3, 3>();
    CHECK((r * r.transpose() - Eigen::Matrix3d::Identity()).norm() < 1e-9);
}

TEST_CASE("ground_truth_bev rasterizes straight curbs as vertical columns")
{
    SynthConfig spec = quick_spec();
    const Scene scene = generate_scene(spec);
    BevConfig bev; // 400 x 800 at 0.05 m/px
    const Image8 img = ground_truth_bev(scene.left_curb, scene.right_curb, bev);
    REQUIRE(img.width == bev.width);
    REQUIRE(img.height == bev.height);

    // y = +4 -> column 200 - 80 = 120; y = -4 -> column 280.
    std::set<int> columns;
    std::size_t lit = 0;
    for (int v = 0; v < img.height; ++v)
        for (int u = 0; u < img.width; ++u)
            if (img.at(u, v))
            {
                columns.insert(u);
                ++lit;
            }
    REQUIRE(lit > 0);
    CHECK(columns.count(120) == 1);
    CHECK(columns.count(280) == 1);
    for (int u : columns)
        CHECK((std::abs(u - 120) <= 1 || std::abs(u - 280) <= 1));

    // Row extent matches the x sampling range [gt_x_min, gt_x_max].
    int v_min = img.height, v_max = -1;
    for (int v = 0; v < img.height; ++v)
        for (int u = 0; u < img.width; ++u)
            if (img.at(u, v))
            {
                v_min = std::min(v_min, v);
                v_max = std::max(v_max, v);
            }
    CHECK(std::abs(v_min - (bev.height - spec.gt_x_max / bev.resolution)) <= 2.0);
    CHECK(std::abs(v_max - (bev.height - spec.gt_x_min / bev.resolution)) <= 2.0);
}

TEST_CASE("ground_truth_bev of empty polylines is blank")
{
    const Image8 img = ground_truth_bev({}, {}, BevConfig{});
    for (std::uint8_t v : img.data)
        CHECK(v == 0);
}
