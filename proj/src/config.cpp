#include "config.hpp"

#include <cstdint>
#include <exception>
#include <fstream>
#include <vector>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace adicurb
{

namespace
{

using nlohmann::json;

// Pulls known keys out of a section object and rejects everything else.
class Section
{
  public:
    Section(const json& j, std::string name) : j_(j), name_(std::move(name))
    {
        if (!j_.is_object())
            throw std::runtime_error("config: section '" + name_ + "' must be an object");
        remaining_ = j_.size();
        uncaught_at_entry_ = std::uncaught_exceptions();
    }

    template <typename T>
    void get(const char* key, T& out)
    {
        if (auto it = j_.find(key); it != j_.end())
        {
            it->get_to(out);
            --remaining_;
        }
        seen_.push_back(key);
    }

    // Marks a key handled out-of-band (nested sections).
    void mark(const char* key)
    {
        if (j_.contains(key))
            --remaining_;
        seen_.push_back(key);
    }

    ~Section() noexcept(false)
    {
        if (remaining_ == 0 || std::uncaught_exceptions() > uncaught_at_entry_)
            return;
        for (auto it = j_.begin(); it != j_.end(); ++it)
        {
            bool known = false;
            for (const char* k : seen_)
                if (it.key() == k)
                    known = true;
            if (!known)
                throw std::runtime_error("config: unknown key '" + name_ + "." + it.key() + "'");
        }
    }

  private:
    const json& j_;
    std::string name_;
    std::size_t remaining_;
    int uncaught_at_entry_ = 0;
    std::vector<const char*> seen_;
};

json obstacle_to_json(const SynthObstacle& b)
{
    return json{{"cx", b.cx}, {"cy", b.cy}, {"dx", b.dx},
                {"dy", b.dy}, {"dz", b.dz}, {"bottom_offset", b.bottom_offset}};
}

void obstacle_from_json(const json& j, SynthObstacle& b)
{
    Section s(j, "synth.box");
    s.get("cx", b.cx);
    s.get("cy", b.cy);
    s.get("dx", b.dx);
    s.get("dy", b.dy);
    s.get("dz", b.dz);
    s.get("bottom_offset", b.bottom_offset);
}

json to_json(const PipelineConfig& c)
{
    json j;
    j["adi"] = {{"neighborhood_radius", c.adi.neighborhood_radius},
                {"clip", c.adi.clip},
                {"vertical_fill", c.adi.vertical_fill},
                {"fill_max_gap", c.adi.fill_max_gap}};
    j["ground"] = {{"n_segments", c.ground.n_segments},
                   {"num_lpr", c.ground.num_lpr},
                   {"seed_margin", c.ground.seed_margin},
                   {"n_iter", c.ground.n_iter},
                   {"inlier_threshold", c.ground.inlier_threshold}};
    j["dynamic"] = {{"cluster_distance", c.dynamic.cluster_distance},
                    {"min_cluster_size", c.dynamic.min_cluster_size},
                    {"max_footprint_long", c.dynamic.max_footprint_long},
                    {"max_footprint_short", c.dynamic.max_footprint_short},
                    {"min_height", c.dynamic.min_height},
                    {"max_height", c.dynamic.max_height},
                    {"ground_tolerance", c.dynamic.ground_tolerance}};
    j["features"] = {{"h1", c.features.h1},
                     {"h2", c.features.h2},
                     {"h3", c.features.h3},
                     {"t_s", c.features.t_s},
                     {"neighbor_half_window", c.features.neighbor_half_window},
                     {"sensor_height", c.features.sensor_height},
                     {"angular_resolution", c.features.angular_resolution},
                     {"spacing_multiplier", c.features.spacing_multiplier}};
    j["beam"] = {{"n_beams", c.beam.n_beams},
                 {"max_range", c.beam.max_range},
                 {"smoothing_window", c.beam.smoothing_window},
                 {"min_separation", c.beam.min_separation}};
    j["gpr"] = {{"length_scale", c.gpr.length_scale},
                {"signal_variance", c.gpr.signal_variance},
                {"noise_variance", c.gpr.noise_variance},
                {"outlier_sigma", c.gpr.outlier_sigma},
                {"max_iterations", c.gpr.max_iterations}};
    j["annotator"] = {{"dilation_width", c.annotator.dilation_width},
                      {"num_rings", c.annotator.num_rings},
                      {"camera", c.annotator.camera}};
    j["bev"] = {{"width", c.bev.width},
                {"height", c.bev.height},
                {"resolution", c.bev.resolution},
                {"ground_height", c.bev.ground_height}};
    j["postprocess"] = {{"merge_row_gap", c.postprocess.merge_row_gap},
                        {"merge_col_distance", c.postprocess.merge_col_distance},
                        {"min_component_pixels", c.postprocess.min_component_pixels}};
    j["eval"] = {{"tolerance", c.eval.tolerance}, {"macro_average", c.eval.macro_average}};
    j["synth"] = {{"road_width", c.synth.road_width},
                  {"curb_height", c.synth.curb_height},
                  {"left_a1", c.synth.left_a1},
                  {"left_a2", c.synth.left_a2},
                  {"right_a1", c.synth.right_a1},
                  {"right_a2", c.synth.right_a2},
                  {"sensor_height", c.synth.sensor_height},
                  {"rings", c.synth.rings},
                  {"azimuth_resolution", c.synth.azimuth_resolution},
                  {"vfov_min", c.synth.vfov_min},
                  {"vfov_max", c.synth.vfov_max},
                  {"max_range", c.synth.max_range},
                  {"noise_sigma", c.synth.noise_sigma},
                  {"seed", c.synth.seed},
                  {"obstacle", c.synth.obstacle},
                  {"box", obstacle_to_json(c.synth.box)},
                  {"gt_x_min", c.synth.gt_x_min},
                  {"gt_x_max", c.synth.gt_x_max},
                  {"gt_step", c.synth.gt_step}};
    return j;
}

void from_json(const json& j, PipelineConfig& c)
{
    if (!j.is_object())
        throw std::runtime_error("config: top level must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
    {
        const std::string& k = it.key();
        if (k == "adi")
        {
            Section s(*it, k);
            s.get("neighborhood_radius", c.adi.neighborhood_radius);
            s.get("clip", c.adi.clip);
            s.get("vertical_fill", c.adi.vertical_fill);
            s.get("fill_max_gap", c.adi.fill_max_gap);
        }
        else if (k == "ground")
        {
            Section s(*it, k);
            s.get("n_segments", c.ground.n_segments);
            s.get("num_lpr", c.ground.num_lpr);
            s.get("seed_margin", c.ground.seed_margin);
            s.get("n_iter", c.ground.n_iter);
            s.get("inlier_threshold", c.ground.inlier_threshold);
        }
        else if (k == "dynamic")
        {
            Section s(*it, k);
            s.get("cluster_distance", c.dynamic.cluster_distance);
            s.get("min_cluster_size", c.dynamic.min_cluster_size);
            s.get("max_footprint_long", c.dynamic.max_footprint_long);
            s.get("max_footprint_short", c.dynamic.max_footprint_short);
            s.get("min_height", c.dynamic.min_height);
            s.get("max_height", c.dynamic.max_height);
            s.get("ground_tolerance", c.dynamic.ground_tolerance);
        }
        else if (k == "features")
        {
            Section s(*it, k);
            s.get("h1", c.features.h1);
            s.get("h2", c.features.h2);
            s.get("h3", c.features.h3);
            s.get("t_s", c.features.t_s);
            s.get("neighbor_half_window", c.features.neighbor_half_window);
            s.get("sensor_height", c.features.sensor_height);
            s.get("angular_resolution", c.features.angular_resolution);
            s.get("spacing_multiplier", c.features.spacing_multiplier);
        }
        else if (k == "beam")
        {
            Section s(*it, k);
            s.get("n_beams", c.beam.n_beams);
            s.get("max_range", c.beam.max_range);
            s.get("smoothing_window", c.beam.smoothing_window);
            s.get("min_separation", c.beam.min_separation);
        }
        else if (k == "gpr")
        {
            Section s(*it, k);
            s.get("length_scale", c.gpr.length_scale);
            s.get("signal_variance", c.gpr.signal_variance);
            s.get("noise_variance", c.gpr.noise_variance);
            s.get("outlier_sigma", c.gpr.outlier_sigma);
            s.get("max_iterations", c.gpr.max_iterations);
        }
        else if (k == "annotator")
        {
            Section s(*it, k);
            s.get("dilation_width", c.annotator.dilation_width);
            s.get("num_rings", c.annotator.num_rings);
            s.get("camera", c.annotator.camera);
        }
        else if (k == "bev")
        {
            Section s(*it, k);
            s.get("width", c.bev.width);
            s.get("height", c.bev.height);
            s.get("resolution", c.bev.resolution);
            s.get("ground_height", c.bev.ground_height);
        }
        else if (k == "postprocess")
        {
            Section s(*it, k);
            s.get("merge_row_gap", c.postprocess.merge_row_gap);
            s.get("merge_col_distance", c.postprocess.merge_col_distance);
            s.get("min_component_pixels", c.postprocess.min_component_pixels);
        }
        else if (k == "eval")
        {
            Section s(*it, k);
            s.get("tolerance", c.eval.tolerance);
            s.get("macro_average", c.eval.macro_average);
        }
        else if (k == "synth")
        {
            Section s(*it, k);
            s.get("road_width", c.synth.road_width);
            s.get("curb_height", c.synth.curb_height);
            s.get("left_a1", c.synth.left_a1);
            s.get("left_a2", c.synth.left_a2);
            s.get("right_a1", c.synth.right_a1);
            s.get("right_a2", c.synth.right_a2);
            s.get("sensor_height", c.synth.sensor_height);
            s.get("rings", c.synth.rings);
            s.get("azimuth_resolution", c.synth.azimuth_resolution);
            s.get("vfov_min", c.synth.vfov_min);
            s.get("vfov_max", c.synth.vfov_max);
            s.get("max_range", c.synth.max_range);
            s.get("noise_sigma", c.synth.noise_sigma);
            s.get("seed", c.synth.seed);
            s.get("obstacle", c.synth.obstacle);
            s.get("gt_x_min", c.synth.gt_x_min);
            s.get("gt_x_max", c.synth.gt_x_max);
            s.get("gt_step", c.synth.gt_step);
            if (auto b = it->find("box"); b != it->end())
                obstacle_from_json(*b, c.synth.box);
            s.mark("box");
        }
        else
        {
            throw std::runtime_error("config: unknown key '" + k + "'");
        }
    }
}

} // namespace

PipelineConfig parse_config(const std::string& json_text)
{
    json j = json::parse(json_text);
    PipelineConfig cfg;
    from_json(j, cfg);
    return cfg;
}

PipelineConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error(path + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string dump_config(const PipelineConfig& cfg)
{
    return to_json(cfg).dump(2);
}

std::string config_hash(const PipelineConfig& cfg)
{
    // nlohmann::json objects iterate in sorted key order, so the dump is
    // canonical regardless of insertion order.
    const std::string dump = to_json(cfg).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : dump)
    {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace adicurb
