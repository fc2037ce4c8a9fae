#ifndef ADICURB_CONFIG_HPP
#define ADICURB_CONFIG_HPP

#include <cmath>
#include <string>

namespace adicurb
{

struct AdiConfig
{
    int neighborhood_radius = 2;
    double clip = 0.5; // meters-per-pixel for the 8-bit preview
    bool vertical_fill = false;
    int fill_max_gap = 4;
};

struct GroundSegConfig
{
    int n_segments = 3;
    int num_lpr = 20;
    double seed_margin = 0.4;
    int n_iter = 3;
    double inlier_threshold = 0.2;
};

struct DynamicObjectConfig
{
    double cluster_distance = 0.5;
    int min_cluster_size = 10;
    double max_footprint_long = 8.0;
    double max_footprint_short = 4.0;
    double min_height = 0.5;
    double max_height = 3.0;
    double ground_tolerance = 0.5;
};

struct FeatureConfig
{
    double h1 = 0.05;
    double h2 = 0.3;
    double h3 = 0.02;
    double t_s = 1e-4;
    int neighbor_half_window = 5;
    double sensor_height = 1.73;
    double angular_resolution = 0.2 * M_PI / 180.0;
    double spacing_multiplier = 0.5;
};

struct BeamConfig
{
    int n_beams = 360;
    double max_range = 50.0;
    int smoothing_window = 5;
    double min_separation = M_PI / 3.0;
};

struct GprConfig
{
    double length_scale = 4.0;
    double signal_variance = 1.0;
    double noise_variance = 0.01;
    double outlier_sigma = 3.0;
    int max_iterations = 5;
};

struct AnnotatorConfig
{
    int dilation_width = 2;
    int num_rings = 64;
    std::string camera = "P2";
};

struct BevConfig
{
    int width = 400;
    int height = 800;
    double resolution = 0.05; // meters per pixel
    double ground_height = -1.73;
};

struct PostprocessConfig
{
    int merge_row_gap = 20;
    int merge_col_distance = 30;
    int min_component_pixels = 5;
};

struct EvalConfig
{
    double tolerance = 2.0; // pixels
    bool macro_average = false;
};

struct SynthObstacle
{
    double cx = 10.0, cy = 1.5;
    double dx = 4.0, dy = 2.0, dz = 1.5;
    double bottom_offset = 0.2; // above local ground
};

struct SynthConfig
{
    double road_width = 8.0;
    double curb_height = 0.15;
    // lateral offset added to +/- road_width/2: off(x) = a1*x + a2*x^2
    double left_a1 = 0.0, left_a2 = 0.0;
    double right_a1 = 0.0, right_a2 = 0.0;
    double sensor_height = 1.73;
    int rings = 64;
    double azimuth_resolution = 0.2 * M_PI / 180.0;
    double vfov_min = -24.8 * M_PI / 180.0;
    double vfov_max = 2.0 * M_PI / 180.0;
    double max_range = 80.0;
    double noise_sigma = 0.008;
    unsigned long long seed = 1;
    bool obstacle = false;
    SynthObstacle box;
    double gt_x_min = 4.0;
    double gt_x_max = 40.0;
    double gt_step = 0.25;
};

struct PipelineConfig
{
    AdiConfig adi;
    GroundSegConfig ground;
    DynamicObjectConfig dynamic;
    FeatureConfig features;
    BeamConfig beam;
    GprConfig gpr;
    AnnotatorConfig annotator;
    BevConfig bev;
    PostprocessConfig postprocess;
    EvalConfig eval;
    SynthConfig synth;
};

// JSON round-trip; load rejects unknown keys, missing keys keep defaults.
PipelineConfig load_config(const std::string& path);
PipelineConfig parse_config(const std::string& json_text);
std::string dump_config(const PipelineConfig& cfg);

// FNV-1a over the canonical (key-sorted) JSON dump; stable across key order.
std::string config_hash(const PipelineConfig& cfg);

} // namespace adicurb

#endif
