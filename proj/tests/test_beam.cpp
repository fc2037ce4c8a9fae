#include <doctest.h>

#include <cmath>

#include "beam_classify.hpp"
#include "helpers.hpp"

using namespace adicurb;

namespace
{

PointCloud corridor_cloud(double rotation = 0.0)
{
    // Walls at lateral +/- 6 m along the road axis.
    PointCloud cloud;
    cloud.num_rings = 1;
    for (int i = -80; i <= 80; ++i)
    {
        const double x = i * 0.5;
        for (double y : {-6.0, 6.0})
        {
            const double rx = x * std::cos(rotation) - y * std::sin(rotation);
            const double ry = x * std::sin(rotation) + y * std::cos(rotation);
            cloud.points.push_back({static_cast<float>(rx), static_cast<float>(ry), 1.f, 0.f});
            cloud.ring_ids.push_back(0);
        }
    }
    return cloud;
}

FeaturePoint fp(float x, float y)
{
    FeaturePoint f;
    f.point = {x, y, 0.f, 0.f};
    f.passed = kFeatureHeight | kFeatureSmoothness | kFeatureDistance;
    return f;
}

} // namespace

TEST_CASE("build_beam_model bins minimum distances")
{
    SUBCASE("empty cloud leaves every beam at max range")
    {
        const BeamModel model = build_beam_model(PointCloud{}, 360, 50.0);
        REQUIRE(model.lengths.size() == 360);
        for (double len : model.lengths)
            CHECK(len == doctest::Approx(50.0));
    }

    SUBCASE("a single obstacle shortens exactly its bin")
    {
        PointCloud cloud;
        cloud.num_rings = 1;
        cloud.points.push_back({10.f, 0.f, 1.f, 0.f});
        cloud.ring_ids.push_back(0);
        const BeamModel model = build_beam_model(cloud, 360, 50.0);
        const int bin = static_cast<int>((0.0 + M_PI) / (2.0 * M_PI / 360));
        CHECK(model.lengths[bin] == doctest::Approx(10.0));
        CHECK(model.lengths[(bin + 5) % 360] == doctest::Approx(50.0));
        CHECK(model.lengths[(bin + 355) % 360] == doctest::Approx(50.0));
    }

    SUBCASE("corridor walls leave road-axis beams longest")
    {
        const BeamModel model = build_beam_model(corridor_cloud(), 360, 50.0);
        const int fwd = static_cast<int>((0.0 + M_PI) / (2.0 * M_PI / 360));
        const int side = static_cast<int>((M_PI / 2.0 + M_PI) / (2.0 * M_PI / 360));
        CHECK(model.lengths[fwd] > model.lengths[side]);
        CHECK(model.lengths[side] == doctest::Approx(6.0).epsilon(0.05));
    }
}

TEST_CASE("beam lengths never grow when obstacles are added")
{
    const PointCloud base = corridor_cloud();
    PointCloud more = base;
    more.points.push_back({15.f, 0.f, 1.f, 0.f});
    more.ring_ids.push_back(0);
    const BeamModel a = build_beam_model(base, 360, 50.0);
    const BeamModel b = build_beam_model(more, 360, 50.0);
    for (int i = 0; i < 360; ++i)
        CHECK(b.lengths[i] <= a.lengths[i] + 1e-12);
}

TEST_CASE("find_dominant_extremes locates the corridor axis")
{
    const double beam_width = 2.0 * M_PI / 360;

    // The corridor walls span |x| <= 40 with lateral offset 6, so the beams
    // clear of wall returns form a plateau of half-angle atan(6/40) = 0.149
    // around each road direction; the peak picked from the smoothed profile
    // lies inside that plateau.
    const double plateau = std::atan(6.0 / 40.0) + 1e-9;

    SUBCASE("axis-aligned corridor")
    {
        const BeamModel model = build_beam_model(corridor_cloud(), 360, 50.0);
        const RoadSegmentationLine line = find_dominant_extremes(model, M_PI / 3.0, 5);
        CHECK_FALSE(line.front_fallback);
        CHECK_FALSE(line.rear_fallback);
        CHECK(std::abs(line.direction_front) <= plateau);
        CHECK(M_PI - std::abs(line.direction_rear) <= plateau);
    }

    SUBCASE("uniform model falls back to the heading")
    {
        BeamModel model;
        model.n_beams = 360;
        model.max_range = 50.0;
        model.lengths.assign(360, 50.0);
        const RoadSegmentationLine line = find_dominant_extremes(model, M_PI / 3.0, 5);
        CHECK(line.direction_front == doctest::Approx(0.0));
        CHECK(std::abs(line.direction_rear) == doctest::Approx(M_PI));
    }

    SUBCASE("rotated corridor shifts the extremes")
    {
        const double theta = 20.0 * M_PI / 180.0;
        const BeamModel model = build_beam_model(corridor_cloud(theta), 360, 50.0);
        const RoadSegmentationLine line = find_dominant_extremes(model, M_PI / 3.0, 5);
        CHECK(std::abs(line.direction_front - theta) <= plateau + beam_width);
    }

    SUBCASE("argmax is invariant to uniform scaling")
    {
        BeamModel model = build_beam_model(corridor_cloud(0.15), 360, 50.0);
        const RoadSegmentationLine base = find_dominant_extremes(model, M_PI / 3.0, 5);
        for (double& len : model.lengths)
            len *= 0.25;
        const RoadSegmentationLine scaled = find_dominant_extremes(model, M_PI / 3.0, 5);
        CHECK(scaled.direction_front == doctest::Approx(base.direction_front));
        CHECK(scaled.direction_rear == doctest::Approx(base.direction_rear));
    }
}

TEST_CASE("split_left_right sign convention and conservation")
{
    RoadSegmentationLine line;
    line.direction_front = 0.0;
    line.direction_rear = M_PI;

    SUBCASE("positive y goes left of a forward line")
    {
        const auto [left, right] = split_left_right({fp(5, 2), fp(5, -2)}, line);
        REQUIRE(left.size() == 1);
        REQUIRE(right.size() == 1);
        CHECK(left[0].point.y == 2.f);
        CHECK(right[0].point.y == -2.f);
    }

    SUBCASE("rear points keep the same left/right sense")
    {
        const auto [left, right] = split_left_right({fp(-5, 2), fp(-5, -2)}, line);
        REQUIRE(left.size() == 1);
        REQUIRE(right.size() == 1);
        CHECK(left[0].point.y == 2.f);
        CHECK(right[0].point.y == -2.f);
    }

    SUBCASE("points on the line go right")
    {
        const auto [left, right] = split_left_right({fp(5, 0)}, line);
        CHECK(left.empty());
        CHECK(right.size() == 1);
    }

    SUBCASE("empty input")
    {
        const auto [left, right] = split_left_right({}, line);
        CHECK(left.empty());
        CHECK(right.empty());
    }

    SUBCASE("conservation on random points")
    {
        std::vector<FeaturePoint> features;
        for (int i = 0; i < 100; ++i)
            features.push_back(fp(float(i % 10) - 5.f, float(i % 7) - 3.f));
        const auto [left, right] = split_left_right(features, line);
        CHECK(left.size() + right.size() == features.size());
    }
}

TEST_CASE("split_left_right is equivariant under rotation")
{
    RoadSegmentationLine line;
    line.direction_front = 0.0;
    line.direction_rear = M_PI;
    std::vector<FeaturePoint> features;
    for (int i = 0; i < 60; ++i)
        features.push_back(fp(2.f + (i % 12), (i % 2) ? 3.5f : -3.5f));
    const auto [left0, right0] = split_left_right(features, line);

    const double theta = 0.7;
    RoadSegmentationLine rotated_line;
    rotated_line.direction_front = theta;
    rotated_line.direction_rear = M_PI + theta - 2 * M_PI; // wrapped into (-pi, pi]
    std::vector<FeaturePoint> rotated;
    for (const FeaturePoint& f : features)
    {
        FeaturePoint g = f;
        g.point.x = static_cast<float>(f.point.x * std::cos(theta) - f.point.y * std::sin(theta));
        g.point.y = static_cast<float>(f.point.x * std::sin(theta) + f.point.y * std::cos(theta));
        rotated.push_back(g);
    }
    const auto [left1, right1] = split_left_right(rotated, rotated_line);
    CHECK(left1.size() == left0.size());
    CHECK(right1.size() == right0.size());
}
