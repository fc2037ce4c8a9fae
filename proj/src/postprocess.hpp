#ifndef ADICURB_POSTPROCESS_HPP
#define ADICURB_POSTPROCESS_HPP

#include <array>
#include <vector>

#include "config.hpp"
#include "types.hpp"

namespace adicurb
{

struct Homography
{
    Eigen::Matrix3d matrix = Eigen::Matrix3d::Identity(); // normalized, (2,2) = 1

    Eigen::Vector2d apply(double x, double y) const
    {
        Eigen::Vector3d p = matrix * Eigen::Vector3d(x, y, 1.0);
        return {p.x() / p.z(), p.y() / p.z()};
    }
};

// BEV convention: row v = bev.height - x/resolution (forward distance x),
// column u = bev.width/2 - y/resolution (sensor y, positive left).
struct BevCandidate
{
    int instance = 0;
    int row = 0;
    double col = 0.0;
};

struct QuadraticCurve
{
    double a = 0.0; // 1/pixels
    double b = 0.0;
    double c = 0.0; // pixels; u(v) = a v^2 + b v + c
    int v_min = 0;
    int v_max = 0;
    bool linear_fallback = false;
};

// Exact 8-DOF direct linear solve from 4 point correspondences.
Homography ipm_from_correspondences(const std::array<Eigen::Vector2d, 4>& src,
                                    const std::array<Eigen::Vector2d, 4>& dst);

// Analytic PV -> BEV homography from the calibration and the flat-ground
// plane z = ground_height in the sensor frame.
Homography ipm_from_calibration(const Calibration& calib, const BevConfig& bev,
                                double ground_height);

// Inverse nearest-neighbor warp of a PV mask into the BEV grid.
Image8 warp_to_bev(const Image8& mask, const Homography& h, const BevConfig& bev);

// Connected components (8-connectivity, merged across small gaps), one
// median-column candidate per instance per occupied row.
std::vector<BevCandidate> select_candidates(const Image8& bev, const PostprocessConfig& cfg);

// Least squares u = a v^2 + b v + c on v-centered coordinates.
QuadraticCurve fit_quadratic(const std::vector<BevCandidate>& candidates);

Image8 rasterize_curves(const std::vector<QuadraticCurve>& curves, const BevConfig& bev);

} // namespace adicurb

#endif
