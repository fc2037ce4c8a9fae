#ifndef ADICURB_ANNOTATOR_HPP
#define ADICURB_ANNOTATOR_HPP

#include <string>
#include <vector>

#include "adi.hpp"
#include "config.hpp"
#include "types.hpp"

namespace adicurb
{

enum DetectionWarning : unsigned
{
    kWarnFallbackDirection = 1u << 0,
    kWarnSmallInlierSet = 1u << 1,
    kWarnEmptyLeft = 1u << 2,
    kWarnEmptyRight = 1u << 3,
};

struct CurbDetection3D
{
    std::vector<Eigen::Vector3d> left;
    std::vector<Eigen::Vector3d> right;
    std::string frame_id;
    unsigned warnings = 0;
    double road_direction = 0.0; // front azimuth used for left/right
};

// Per-stage wall-clock times, seconds.
struct StageTimings
{
    double ground_seg = 0.0;
    double dynamic_removal = 0.0;
    double feature_extraction = 0.0;
    double beam_classification = 0.0;
    double gpr_filtering = 0.0;
    double adi_build = 0.0;
    double label_render = 0.0;
};

struct TrainingPair
{
    AltitudeDifferenceImage adi;
    Image8 label; // binary mask, 255 = curb
    CurbDetection3D detection;
    StageTimings timings;
};

// Full ACA detection: ground segmentation, dynamic-object removal, per-ring
// feature extraction, beam classification, per-side GPR filtering. Runs on
// the whole 360-degree cloud.
CurbDetection3D detect_curbs_3d(const PointCloud& cloud, const PipelineConfig& cfg,
                                StageTimings* timings = nullptr);

// Projects detected curb points into the image and dilates with a disk.
Image8 render_label_mask(const CurbDetection3D& det, const Calibration& calib,
                         int dilation_width);

// Paired ADI (frustum crop -> project -> grid -> altitude transform) and
// label mask for one frame, identical dimensions.
TrainingPair generate_training_pair(const PointCloud& cloud, const Calibration& calib,
                                    const PipelineConfig& cfg);

// ADI only (the pre-processing path).
AltitudeDifferenceImage compute_adi(const PointCloud& cloud, const Calibration& calib,
                                    const PipelineConfig& cfg);

} // namespace adicurb

#endif
