#ifndef ADICURB_SYNTH_HPP
#define ADICURB_SYNTH_HPP

#include <vector>

#include "config.hpp"
#include "types.hpp"

namespace adicurb
{

struct Scene
{
    PointCloud cloud;
    std::vector<Eigen::Vector3d> left_curb;  // polyline samples, sensor frame
    std::vector<Eigen::Vector3d> right_curb;
    Calibration calib;
};

// Lateral curb line per side: +/- road_width/2 + a1*x + a2*x^2.
double curb_lateral(const SynthConfig& spec, bool left, double x);

// Ray-casts every (ring, azimuth) ray against the piecewise scene surface
// (road plane, curb step, sidewalk plane, optional obstacle box), adds seeded
// Gaussian z-noise, and emits exact curb polylines plus a synthetic
// KITTI-style pinhole calibration.
Scene generate_scene(const SynthConfig& spec);

// Rasterizes the true curb polylines into the BEV grid (8-connected lines).
Image8 ground_truth_bev(const std::vector<Eigen::Vector3d>& left,
                        const std::vector<Eigen::Vector3d>& right, const BevConfig& bev);

} // namespace adicurb

#endif
