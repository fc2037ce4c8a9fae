#include "annotator.hpp"

#include <chrono>
#include <cmath>

#include "beam_classify.hpp"
#include "curb_features.hpp"
#include "ground_seg.hpp"
#include "gpr_filter.hpp"
#include "kitti_io.hpp"
#include "projection.hpp"

namespace adicurb
{

namespace
{

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Filters one side in road-aligned coordinates (front direction = +x).
std::vector<Eigen::Vector3d> filter_side(const std::vector<FeaturePoint>& side,
                                         double road_direction, const GprConfig& gpr,
                                         unsigned* warnings)
{
    std::vector<Eigen::Vector3d> out;
    if (side.empty())
        return out;
    const double c = std::cos(-road_direction), s = std::sin(-road_direction);
    std::vector<double> xs(side.size()), ys(side.size());
    for (std::size_t i = 0; i < side.size(); ++i)
    {
        const RawPoint& p = side[i].point;
        xs[i] = c * p.x - s * p.y;
        ys[i] = s * p.x + c * p.y;
    }
    FilterResult res = iterative_filter(xs, ys, gpr);
    if (res.warning_small_input)
        *warnings |= kWarnSmallInlierSet;
    out.reserve(res.inlier_indices.size());
    for (std::size_t i : res.inlier_indices)
    {
        const RawPoint& p = side[i].point;
        out.emplace_back(p.x, p.y, p.z);
    }
    return out;
}

} // namespace

CurbDetection3D detect_curbs_3d(const PointCloud& cloud, const PipelineConfig& cfg,
                                StageTimings* timings)
{
    CurbDetection3D det;
    StageTimings local;
    StageTimings& t = timings ? *timings : local;
    auto t0 = std::chrono::steady_clock::now();

    GroundPartition part = segment_ground(cloud, cfg.ground);
    t.ground_seg = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    PointCloud static_non_ground =
        remove_dynamic_objects(part.non_ground, cfg.dynamic, -cfg.features.sensor_height);
    t.dynamic_removal = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    std::vector<ScanLayer> layers = organize_layers(part.ground);
    std::vector<FeaturePoint> features = extract_feature_points(layers, cfg.features);
    t.feature_extraction = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    BeamModel beams = build_beam_model(static_non_ground, cfg.beam.n_beams, cfg.beam.max_range);
    RoadSegmentationLine line =
        find_dominant_extremes(beams, cfg.beam.min_separation, cfg.beam.smoothing_window);
    if (line.front_fallback || line.rear_fallback)
        det.warnings |= kWarnFallbackDirection;
    det.road_direction = line.direction_front;
    auto [left, right] = split_left_right(features, line);
    t.beam_classification = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    det.left = filter_side(left, line.direction_front, cfg.gpr, &det.warnings);
    det.right = filter_side(right, line.direction_front, cfg.gpr, &det.warnings);
    t.gpr_filtering = seconds_since(t0);
    if (det.left.empty())
        det.warnings |= kWarnEmptyLeft;
    if (det.right.empty())
        det.warnings |= kWarnEmptyRight;
    return det;
}

Image8 render_label_mask(const CurbDetection3D& det, const Calibration& calib,
                         int dilation_width)
{
    Image8 mask(calib.image_width, calib.image_height);

    // Disk offsets for dilation.
    std::vector<std::pair<int, int>> disk;
    const int r = std::max(dilation_width, 0);
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
            if (dx * dx + dy * dy <= r * r)
                disk.emplace_back(dx, dy);

    auto stamp = [&](const Eigen::Vector3d& p) {
        auto s = project_point(calib, p.x(), p.y(), p.z());
        if (!s)
            return;
        const int x = static_cast<int>(std::lround(s->u));
        const int y = static_cast<int>(std::lround(s->v));
        if (x < 0 || x >= mask.width || y < 0 || y >= mask.height)
            return;
        for (auto [dx, dy] : disk)
        {
            const int nx = x + dx, ny = y + dy;
            if (nx >= 0 && nx < mask.width && ny >= 0 && ny < mask.height)
                mask.at(nx, ny) = 255;
        }
    };
    for (const auto& p : det.left)
        stamp(p);
    for (const auto& p : det.right)
        stamp(p);
    return mask;
}

AltitudeDifferenceImage compute_adi(const PointCloud& cloud, const Calibration& calib,
                                    const PipelineConfig& cfg)
{
    PointCloud cropped = crop_to_frustum(cloud, calib);
    std::vector<PixelSample> samples;
    samples.reserve(cropped.size());
    for (auto& [idx, s] : project_cloud(calib, cropped))
        samples.push_back(s);
    AltitudeGrid grid = build_altitude_grid(samples, calib.image_width, calib.image_height);
    if (cfg.adi.vertical_fill)
        vertical_fill(grid, cfg.adi.fill_max_gap);
    return altitude_difference_transform(grid, cfg.adi.neighborhood_radius);
}

TrainingPair generate_training_pair(const PointCloud& cloud, const Calibration& calib,
                                    const PipelineConfig& cfg)
{
    TrainingPair pair;
    auto t0 = std::chrono::steady_clock::now();
    pair.adi = compute_adi(cloud, calib, cfg);
    pair.timings.adi_build = seconds_since(t0);

    pair.detection = detect_curbs_3d(cloud, cfg, &pair.timings);

    t0 = std::chrono::steady_clock::now();
    pair.label = render_label_mask(pair.detection, calib, cfg.annotator.dilation_width);
    pair.timings.label_render = seconds_since(t0);
    return pair;
}

} // namespace adicurb
