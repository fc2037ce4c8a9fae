#ifndef ADICURB_TYPES_HPP
#define ADICURB_TYPES_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace adicurb
{

struct RawPoint
{
    float x = 0.f;
    float y = 0.f;
    float z = 0.f;
    float intensity = 0.f;
};

// A frame of points in the sensor frame, plus per-point ring IDs.
struct PointCloud
{
    std::vector<RawPoint> points;
    std::vector<int> ring_ids;
    int num_rings = 0;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

struct Calibration
{
    Eigen::Matrix<double, 3, 4> projection;   // rectified camera matrix (P2-style)
    Eigen::Matrix4d rect_rotation;            // R0_rect padded to 4x4
    Eigen::Matrix4d lidar_to_cam;             // Tr_velo_to_cam padded to 4x4
    int image_width = 1242;
    int image_height = 375;
};

// Single-channel 8-bit image, row-major.
struct Image8
{
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    Image8() = default;
    Image8(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0) {}

    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

} // namespace adicurb

#endif
