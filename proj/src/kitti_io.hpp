#ifndef ADICURB_KITTI_IO_HPP
#define ADICURB_KITTI_IO_HPP

#include <stdexcept>
#include <string>

#include "types.hpp"

namespace adicurb
{

struct ParseError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct LoadStats
{
    std::size_t dropped_non_finite = 0;
};

// KITTI velodyne binary: little-endian float32 quadruples (x, y, z, intensity), no header.
// Points with non-finite coordinates are dropped and counted in stats.
PointCloud load_point_cloud(const std::string& path, LoadStats* stats = nullptr);
void save_point_cloud(const std::string& path, const PointCloud& cloud);

// KITTI calibration text: "KEY: v1 v2 ..." lines. Requires P2 (or the camera key
// given in camera_key), R0_rect and Tr_velo_to_cam. Optional image_width /
// image_height keys override the KITTI defaults.
Calibration load_calibration(const std::string& path, const std::string& camera_key = "P2");
void save_calibration(const std::string& path, const Calibration& calib,
                      const std::string& camera_key = "P2");

// Reconstructs ring IDs by uniform vertical-angle binning over the angles
// observed in this frame; ring 0 is the lowest angle.
void assign_ring_ids(PointCloud& cloud, int num_rings);

// Keeps exactly the points whose pinhole projection lands inside the image
// with positive camera-frame depth.
PointCloud crop_to_frustum(const PointCloud& cloud, const Calibration& calib);

} // namespace adicurb

#endif
