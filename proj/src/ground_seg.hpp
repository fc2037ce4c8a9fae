#ifndef ADICURB_GROUND_SEG_HPP
#define ADICURB_GROUND_SEG_HPP

#include <vector>

#include "config.hpp"
#include "types.hpp"

namespace adicurb
{

// Plane n.p + d = 0, ||n|| = 1, n oriented with positive z.
struct PlaneModel
{
    Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
    double offset = 0.0;
    double inlier_threshold = 0.2;

    double distance(const RawPoint& p) const
    {
        return std::abs(normal.x() * p.x + normal.y() * p.y + normal.z() * p.z + offset);
    }
};

struct GroundPartition
{
    PointCloud ground;
    PointCloud non_ground;
    std::vector<std::uint8_t> is_ground; // per input point
    std::vector<PlaneModel> segment_planes;
};

// Equal-width x-range bins over [x_min, x_max]; boundary x goes to the lower
// bin except at the top edge.
std::vector<PointCloud> split_segments(const PointCloud& cloud, int n_segments);

// Seeded iterative plane refinement: lowest-point-representative seeding, then
// total-least-squares plane (smallest covariance eigenvector) with inlier
// re-selection each round.
PlaneModel fit_ground_plane(const PointCloud& segment, int num_lpr, double seed_margin,
                            int n_iter, double inlier_threshold);

GroundPartition segment_ground(const PointCloud& cloud, const GroundSegConfig& cfg);

// Euclidean clustering on the non-ground points; clusters matching the
// vehicle/pedestrian envelope are removed.
PointCloud remove_dynamic_objects(const PointCloud& non_ground, const DynamicObjectConfig& cfg,
                                  double ground_z);

} // namespace adicurb

#endif
