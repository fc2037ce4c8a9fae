#ifndef ADICURB_PROJECTION_HPP
#define ADICURB_PROJECTION_HPP

#include <optional>
#include <utility>
#include <vector>

#include "types.hpp"

namespace adicurb
{

// Sub-pixel image sample of a projected LiDAR point. altitude carries the
// sensor-frame z of the source point forward to the ADI stage.
struct PixelSample
{
    double u = 0.0;
    double v = 0.0;
    double depth = 0.0;    // camera-frame z, > 0
    double altitude = 0.0; // sensor-frame z
};

// Pinhole projection after the rigid lidar -> rectified-camera transform.
// Returns nullopt when camera-frame depth <= 1e-6.
std::optional<PixelSample> project_point(const Calibration& calib, double x, double y, double z);

// project_point over the whole cloud, preserving input order; samples outside
// [0, width) x [0, height) and behind-camera points are excluded.
std::vector<std::pair<std::size_t, PixelSample>> project_cloud(const Calibration& calib,
                                                               const PointCloud& cloud);

} // namespace adicurb

#endif
