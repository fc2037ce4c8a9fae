#include "curb_features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace adicurb
{

namespace
{

std::pair<std::size_t, std::size_t> clipped_window(std::size_t i, std::size_t n, int half)
{
    const std::size_t lo = i >= static_cast<std::size_t>(half) ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + static_cast<std::size_t>(half));
    return {lo, hi};
}

} // namespace

std::vector<ScanLayer> organize_layers(const PointCloud& ground)
{
    std::map<int, ScanLayer> by_ring;
    const bool rings = ground.ring_ids.size() == ground.size();
    for (std::size_t i = 0; i < ground.size(); ++i)
    {
        const int r = rings ? ground.ring_ids[i] : 0;
        ScanLayer& layer = by_ring[r];
        layer.ring = r;
        layer.points.push_back(ground.points[i]);
    }

    std::vector<ScanLayer> layers;
    layers.reserve(by_ring.size());
    for (auto& [r, layer] : by_ring)
    {
        std::stable_sort(layer.points.begin(), layer.points.end(),
                         [](const RawPoint& a, const RawPoint& b) {
                             return std::atan2(a.y, a.x) < std::atan2(b.y, b.x);
                         });
        double angle = 0.0;
        for (const RawPoint& p : layer.points)
            angle += std::atan2(p.z, std::sqrt(double(p.x) * p.x + double(p.y) * p.y));
        layer.vertical_angle = angle / static_cast<double>(layer.points.size());
        layers.push_back(std::move(layer));
    }
    return layers;
}

bool height_difference_pass(const ScanLayer& layer, std::size_t i, const FeatureConfig& th)
{
    const std::size_t n = layer.points.size();
    if (n == 0 || i >= n)
        return false;
    const auto [lo, hi] = clipped_window(i, n, th.neighbor_half_window);
    const std::size_t count = hi - lo + 1;
    if (count < 2)
        return false;

    double z_min = layer.points[lo].z, z_max = layer.points[lo].z, mu = 0.0;
    for (std::size_t j = lo; j <= hi; ++j)
    {
        const double z = layer.points[j].z;
        z_min = std::min(z_min, z);
        z_max = std::max(z_max, z);
        mu += z;
    }
    mu /= static_cast<double>(count);
    const double range = z_max - z_min;
    if (range < th.h1 || range > th.h2)
        return false;

    double ss = 0.0;
    for (std::size_t j = lo; j <= hi; ++j)
    {
        const double d = layer.points[j].z - mu;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(count)) >= th.h3;
}

std::pair<double, bool> smoothness_pass(const ScanLayer& layer, std::size_t i,
                                        const FeatureConfig& th)
{
    const std::size_t n = layer.points.size();
    if (n == 0 || i >= n)
        return {0.0, false};
    const auto [lo, hi] = clipped_window(i, n, th.neighbor_half_window);
    const std::size_t count = hi - lo + 1;
    if (count < 3)
        return {0.0, false};

    const RawPoint& pi = layer.points[i];
    const double norm_pi = std::sqrt(double(pi.x) * pi.x + double(pi.y) * pi.y + double(pi.z) * pi.z);
    if (norm_pi < 1e-9)
        return {0.0, false};

    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    for (std::size_t j = lo; j <= hi; ++j)
    {
        if (j == i)
            continue;
        const RawPoint& pj = layer.points[j];
        sum += Eigen::Vector3d(double(pi.x) - pj.x, double(pi.y) - pj.y, double(pi.z) - pj.z);
    }
    const double s = sum.norm() / (static_cast<double>(count) * norm_pi);
    return {s, s >= th.t_s};
}

double expected_point_spacing(const ScanLayer& layer, const FeatureConfig& th)
{
    if (std::abs(layer.vertical_angle) < 1e-6)
        throw std::domain_error("expected_point_spacing: horizontal ring");
    const double cot = std::cos(layer.vertical_angle) / std::sin(layer.vertical_angle);
    return th.sensor_height * std::abs(cot) * M_PI * th.angular_resolution;
}

bool horizontal_distance_pass(const ScanLayer& layer, std::size_t i, const FeatureConfig& th,
                              double k)
{
    const std::size_t n = layer.points.size();
    if (n == 0 || i + 1 >= n)
        return false;
    double delta;
    try
    {
        delta = expected_point_spacing(layer, th);
    }
    catch (const std::domain_error&)
    {
        return false; // near-horizontal ring never triggers the spacing test
    }
    const RawPoint& a = layer.points[i];
    const RawPoint& b = layer.points[i + 1];
    const double dx = double(a.x) - b.x, dy = double(a.y) - b.y;
    return std::sqrt(dx * dx + dy * dy) > k * delta;
}

std::vector<FeaturePoint> extract_feature_points(const std::vector<ScanLayer>& layers,
                                                 const FeatureConfig& th)
{
    std::vector<FeaturePoint> out;
    for (const ScanLayer& layer : layers)
    {
        for (std::size_t i = 0; i < layer.points.size(); ++i)
        {
            unsigned flags = 0;
            if (height_difference_pass(layer, i, th))
                flags |= kFeatureHeight;
            else
                continue;
            if (smoothness_pass(layer, i, th).second)
                flags |= kFeatureSmoothness;
            else
                continue;
            // A curb gap shows up on both of its flanking points.
            const bool gap = horizontal_distance_pass(layer, i, th, th.spacing_multiplier) ||
                             (i > 0 && horizontal_distance_pass(layer, i - 1, th,
                                                                th.spacing_multiplier));
            if (!gap)
                continue;
            flags |= kFeatureDistance;
            out.push_back(FeaturePoint{layer.points[i], layer.ring, flags});
        }
    }
    return out;
}

} // namespace adicurb
