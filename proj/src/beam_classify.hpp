#ifndef ADICURB_BEAM_CLASSIFY_HPP
#define ADICURB_BEAM_CLASSIFY_HPP

#include <utility>
#include <vector>

#include "config.hpp"
#include "curb_features.hpp"
#include "types.hpp"

namespace adicurb
{

// Radial distance-to-first-obstacle histogram over uniform azimuth bins.
struct BeamModel
{
    int n_beams = 0;
    double max_range = 0.0;
    std::vector<double> lengths; // bin b covers [-pi + b*step, -pi + (b+1)*step)

    double beam_azimuth(int b) const
    {
        return -M_PI + (b + 0.5) * (2.0 * M_PI / n_beams);
    }
};

struct RoadSegmentationLine
{
    double direction_front = 0.0; // radians, |az| < pi/2
    double direction_rear = M_PI;
    bool front_fallback = false;
    bool rear_fallback = false;
};

BeamModel build_beam_model(const PointCloud& non_ground, int n_beams, double max_range);

// Moving-average smoothing, then the best local maximum per half-plane; ties
// break toward the vehicle heading. A half-plane without a qualifying maximum
// falls back to azimuth 0 (front) / pi (rear) with its fallback flag set.
RoadSegmentationLine find_dominant_extremes(const BeamModel& model, double min_separation,
                                            int smoothing_window);

// Splits feature points about the segmentation polyline. The local direction
// used for the sign test is the direction of travel along the polyline
// (front ray ahead, origin-to-front continuation behind), so left/right is
// consistent on both sides of the vehicle. Points exactly on the line go right.
std::pair<std::vector<FeaturePoint>, std::vector<FeaturePoint>>
split_left_right(const std::vector<FeaturePoint>& features, const RoadSegmentationLine& line);

} // namespace adicurb

#endif
