#ifndef ADICURB_CURB_FEATURES_HPP
#define ADICURB_CURB_FEATURES_HPP

#include <vector>

#include "config.hpp"
#include "types.hpp"

namespace adicurb
{

// One sensor ring of ground points, azimuth-sorted.
struct ScanLayer
{
    int ring = 0;
    std::vector<RawPoint> points;
    double vertical_angle = 0.0; // theta_r, radians
};

enum FeatureFlag : unsigned
{
    kFeatureHeight = 1u << 0,
    kFeatureSmoothness = 1u << 1,
    kFeatureDistance = 1u << 2,
};

struct FeaturePoint
{
    RawPoint point;
    int ring = 0;
    unsigned passed = 0; // FeatureFlag bits; emitted points have all three
};

// Groups ground points by ring and sorts each layer by azimuth.
std::vector<ScanLayer> organize_layers(const PointCloud& ground);

// Height-difference band test over the clipped neighbor window:
// H1 <= Zmax - Zmin <= H2 and stddev(z) >= H3.
bool height_difference_pass(const ScanLayer& layer, std::size_t i, const FeatureConfig& th);

// Smoothness s = ||sum_{j != i}(p_i - p_j)|| / (|S| * ||p_i||); passes when s >= T_s.
std::pair<double, bool> smoothness_pass(const ScanLayer& layer, std::size_t i,
                                        const FeatureConfig& th);

// Flat-ground spacing expectation delta = H_s * |cot(theta_r)| * pi * theta_a.
double expected_point_spacing(const ScanLayer& layer, const FeatureConfig& th);

// Spacing-anomaly test: xy gap to the next point exceeds k * expected spacing.
bool horizontal_distance_pass(const ScanLayer& layer, std::size_t i, const FeatureConfig& th,
                              double k);

// Points passing all three tests, ordered by ring then azimuth.
std::vector<FeaturePoint> extract_feature_points(const std::vector<ScanLayer>& layers,
                                                 const FeatureConfig& th);

} // namespace adicurb

#endif
