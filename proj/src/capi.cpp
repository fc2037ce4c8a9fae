#include "adicurb.h"

#include <cstring>
#include <exception>
#include <map>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include <json.hpp>

#include "adi.hpp"
#include "annotator.hpp"
#include "config.hpp"
#include "evaluation.hpp"
#include "kitti_io.hpp"
#include "png_io.hpp"
#include "postprocess.hpp"
#include "synth.hpp"
#include "types.hpp"

using namespace adicurb;

namespace
{

thread_local std::string g_last_error;

adc_status fail(adc_status code, const std::string& message)
{
    g_last_error = message;
    return code;
}

adc_status classify_exception()
{
    try
    {
        throw;
    }
    catch (const ParseError& e)
    {
        // The core reports unopenable files with the same exception type it
        // uses for malformed content; split them onto the IO status here.
        const std::string what = e.what();
        if (what.find("cannot open") != std::string::npos)
            return fail(ADC_ERR_IO, what);
        return fail(ADC_ERR_PARSE, what);
    }
    catch (const std::ios_base::failure& e)
    {
        return fail(ADC_ERR_IO, e.what());
    }
    catch (const std::invalid_argument& e)
    {
        return fail(ADC_ERR_INVALID, e.what());
    }
    catch (const std::bad_alloc&)
    {
        return fail(ADC_ERR_RUNTIME, "out of memory");
    }
    catch (const std::exception& e)
    {
        const std::string what = e.what();
        // File-level failures in the core throw runtime_error with a path in
        // the message; map the common prefixes onto the IO status.
        if (what.find("cannot open") != std::string::npos ||
            what.find("failed to open") != std::string::npos ||
            what.find("write error") != std::string::npos ||
            what.find("read error") != std::string::npos)
            return fail(ADC_ERR_IO, what);
        // Malformed JSON surfaces as nlohmann exceptions.
        if (what.find("[json.exception") != std::string::npos)
            return fail(ADC_ERR_PARSE, what);
        return fail(ADC_ERR_RUNTIME, what);
    }
    catch (...)
    {
        return fail(ADC_ERR_RUNTIME, "unknown error");
    }
}

template <typename Fn>
adc_status guarded(Fn&& fn)
{
    try
    {
        return fn();
    }
    catch (...)
    {
        return classify_exception();
    }
}

adc_status require(bool ok, const char* message)
{
    return ok ? ADC_OK : fail(ADC_ERR_INVALID, message);
}

char* dup_string(const std::string& s)
{
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

} // namespace

struct adc_config
{
    PipelineConfig cfg;
};

struct adc_cloud
{
    PointCloud cloud;
};

struct adc_calib
{
    Calibration calib;
};

struct adc_image
{
    Image8 img;
};

struct adc_adi
{
    AltitudeDifferenceImage adi;
};

struct adc_detection
{
    CurbDetection3D det;
    StageTimings timings;
};

struct adc_pair
{
    TrainingPair pair;
};

struct adc_ppresult
{
    std::vector<BevCandidate> candidates;
    std::vector<QuadraticCurve> curves;
};

struct adc_scene
{
    Scene scene;
    adc_cloud cloud_view;
    adc_calib calib_view;
};

extern "C" {

const char* adc_last_error(void)
{
    return g_last_error.c_str();
}

const char* adc_version(void)
{
    return "0.1.0";
}

adc_status adc_config_default(adc_config** out)
{
    if (adc_status s = require(out != nullptr, "adc_config_default: out is null"))
        return s;
    *out = new adc_config{};
    return ADC_OK;
}

adc_status adc_config_load(const char* path, adc_config** out)
{
    if (adc_status s = require(path && out, "adc_config_load: null argument"))
        return s;
    return guarded([&] {
        auto cfg = std::make_unique<adc_config>();
        cfg->cfg = load_config(path);
        *out = cfg.release();
        return ADC_OK;
    });
}

adc_status adc_config_parse(const char* json_text, adc_config** out)
{
    if (adc_status s = require(json_text && out, "adc_config_parse: null argument"))
        return s;
    return guarded([&] {
        auto cfg = std::make_unique<adc_config>();
        cfg->cfg = parse_config(json_text);
        *out = cfg.release();
        return ADC_OK;
    });
}

adc_status adc_config_dump(const adc_config* cfg, char** out)
{
    if (adc_status s = require(cfg && out, "adc_config_dump: null argument"))
        return s;
    return guarded([&] {
        *out = dup_string(dump_config(cfg->cfg));
        return ADC_OK;
    });
}

adc_status adc_config_hash(const adc_config* cfg, uint64_t* out)
{
    if (adc_status s = require(cfg && out, "adc_config_hash: null argument"))
        return s;
    return guarded([&] {
        *out = std::stoull(config_hash(cfg->cfg), nullptr, 16);
        return ADC_OK;
    });
}

void adc_config_free(adc_config* cfg)
{
    delete cfg;
}

void adc_string_free(char* s)
{
    delete[] s;
}

adc_status adc_cloud_load(const char* path, const adc_config* cfg, adc_cloud** out)
{
    if (adc_status s = require(path && out, "adc_cloud_load: null argument"))
        return s;
    return guarded([&] {
        auto cloud = std::make_unique<adc_cloud>();
        cloud->cloud = load_point_cloud(path);
        const int rings = cfg ? cfg->cfg.annotator.num_rings : AnnotatorConfig{}.num_rings;
        assign_ring_ids(cloud->cloud, rings);
        *out = cloud.release();
        return ADC_OK;
    });
}

adc_status adc_cloud_save(const adc_cloud* cloud, const char* path)
{
    if (adc_status s = require(cloud && path, "adc_cloud_save: null argument"))
        return s;
    return guarded([&] {
        save_point_cloud(path, cloud->cloud);
        return ADC_OK;
    });
}

adc_status adc_cloud_size(const adc_cloud* cloud, size_t* out)
{
    if (adc_status s = require(cloud && out, "adc_cloud_size: null argument"))
        return s;
    *out = cloud->cloud.points.size();
    return ADC_OK;
}

void adc_cloud_free(adc_cloud* cloud)
{
    delete cloud;
}

adc_status adc_calib_load(const char* path, adc_calib** out)
{
    if (adc_status s = require(path && out, "adc_calib_load: null argument"))
        return s;
    return guarded([&] {
        auto calib = std::make_unique<adc_calib>();
        calib->calib = load_calibration(path);
        *out = calib.release();
        return ADC_OK;
    });
}

adc_status adc_calib_save(const adc_calib* calib, const char* path)
{
    if (adc_status s = require(calib && path, "adc_calib_save: null argument"))
        return s;
    return guarded([&] {
        save_calibration(path, calib->calib);
        return ADC_OK;
    });
}

void adc_calib_free(adc_calib* calib)
{
    delete calib;
}

adc_status adc_image_load_png(const char* path, adc_image** out)
{
    if (adc_status s = require(path && out, "adc_image_load_png: null argument"))
        return s;
    return guarded([&] {
        auto img = std::make_unique<adc_image>();
        img->img = read_png_gray8(path);
        *out = img.release();
        return ADC_OK;
    });
}

adc_status adc_image_save_png(const adc_image* img, const char* path)
{
    if (adc_status s = require(img && path, "adc_image_save_png: null argument"))
        return s;
    return guarded([&] {
        write_png_gray8(path, img->img);
        return ADC_OK;
    });
}

adc_status adc_image_size(const adc_image* img, int* width, int* height)
{
    if (adc_status s = require(img && width && height, "adc_image_size: null argument"))
        return s;
    *width = img->img.width;
    *height = img->img.height;
    return ADC_OK;
}

const uint8_t* adc_image_data(const adc_image* img)
{
    return img ? img->img.data.data() : nullptr;
}

void adc_image_free(adc_image* img)
{
    delete img;
}

adc_status adc_compute_adi(const adc_cloud* cloud, const adc_calib* calib,
                           const adc_config* cfg, adc_adi** out)
{
    if (adc_status s = require(cloud && calib && cfg && out, "adc_compute_adi: null argument"))
        return s;
    return guarded([&] {
        auto adi = std::make_unique<adc_adi>();
        adi->adi = compute_adi(cloud->cloud, calib->calib, cfg->cfg);
        *out = adi.release();
        return ADC_OK;
    });
}

adc_status adc_adi_save_f32(const adc_adi* adi, const char* path)
{
    if (adc_status s = require(adi && path, "adc_adi_save_f32: null argument"))
        return s;
    return guarded([&] {
        save_adi_f32(path, adi->adi);
        return ADC_OK;
    });
}

adc_status adc_adi_load_f32(const char* path, adc_adi** out)
{
    if (adc_status s = require(path && out, "adc_adi_load_f32: null argument"))
        return s;
    return guarded([&] {
        auto adi = std::make_unique<adc_adi>();
        adi->adi = load_adi_f32(path);
        *out = adi.release();
        return ADC_OK;
    });
}

adc_status adc_adi_to_image(const adc_adi* adi, const adc_config* cfg, adc_image** out)
{
    if (adc_status s = require(adi && cfg && out, "adc_adi_to_image: null argument"))
        return s;
    return guarded([&] {
        auto img = std::make_unique<adc_image>();
        img->img = normalize_to_8bit(adi->adi, cfg->cfg.adi.clip);
        *out = img.release();
        return ADC_OK;
    });
}

void adc_adi_free(adc_adi* adi)
{
    delete adi;
}

adc_status adc_detect(const adc_cloud* cloud, const adc_config* cfg, adc_detection** out)
{
    if (adc_status s = require(cloud && cfg && out, "adc_detect: null argument"))
        return s;
    return guarded([&] {
        auto det = std::make_unique<adc_detection>();
        det->det = detect_curbs_3d(cloud->cloud, cfg->cfg, &det->timings);
        *out = det.release();
        return ADC_OK;
    });
}

adc_status adc_detection_count(const adc_detection* det, int side, size_t* out)
{
    if (adc_status s = require(det && out, "adc_detection_count: null argument"))
        return s;
    if (adc_status s = require(side == 0 || side == 1, "adc_detection_count: side must be 0 or 1"))
        return s;
    *out = side == 0 ? det->det.left.size() : det->det.right.size();
    return ADC_OK;
}

adc_status adc_detection_point(const adc_detection* det, int side, size_t index, double xyz[3])
{
    if (adc_status s = require(det && xyz, "adc_detection_point: null argument"))
        return s;
    if (adc_status s = require(side == 0 || side == 1, "adc_detection_point: side must be 0 or 1"))
        return s;
    const auto& pts = side == 0 ? det->det.left : det->det.right;
    if (adc_status s = require(index < pts.size(), "adc_detection_point: index out of range"))
        return s;
    xyz[0] = pts[index].x();
    xyz[1] = pts[index].y();
    xyz[2] = pts[index].z();
    return ADC_OK;
}

adc_status adc_detection_road_direction(const adc_detection* det, double* out)
{
    if (adc_status s = require(det && out, "adc_detection_road_direction: null argument"))
        return s;
    *out = det->det.road_direction;
    return ADC_OK;
}

adc_status adc_detection_warnings(const adc_detection* det, uint32_t* out)
{
    if (adc_status s = require(det && out, "adc_detection_warnings: null argument"))
        return s;
    *out = det->det.warnings;
    return ADC_OK;
}

adc_status adc_detection_timings(const adc_detection* det, double out_ms[5])
{
    if (adc_status s = require(det && out_ms, "adc_detection_timings: null argument"))
        return s;
    const StageTimings& t = det->timings;
    out_ms[0] = (t.ground_seg + t.dynamic_removal) * 1e3;
    out_ms[1] = t.feature_extraction * 1e3;
    out_ms[2] = t.beam_classification * 1e3;
    out_ms[3] = t.gpr_filtering * 1e3;
    out_ms[4] = out_ms[0] + out_ms[1] + out_ms[2] + out_ms[3];
    return ADC_OK;
}

void adc_detection_free(adc_detection* det)
{
    delete det;
}

adc_status adc_generate_pair(const adc_cloud* cloud, const adc_calib* calib,
                             const adc_config* cfg, adc_pair** out)
{
    if (adc_status s = require(cloud && calib && cfg && out, "adc_generate_pair: null argument"))
        return s;
    return guarded([&] {
        auto pair = std::make_unique<adc_pair>();
        pair->pair = generate_training_pair(cloud->cloud, calib->calib, cfg->cfg);
        *out = pair.release();
        return ADC_OK;
    });
}

const adc_adi* adc_pair_adi(const adc_pair* pair)
{
    // adc_adi's single member lets the contained image alias the handle type.
    return pair ? reinterpret_cast<const adc_adi*>(&pair->pair.adi) : nullptr;
}

adc_status adc_pair_label(const adc_pair* pair, adc_image** out)
{
    if (adc_status s = require(pair && out, "adc_pair_label: null argument"))
        return s;
    *out = new adc_image{pair->pair.label};
    return ADC_OK;
}

adc_status adc_pair_warnings(const adc_pair* pair, uint32_t* out)
{
    if (adc_status s = require(pair && out, "adc_pair_warnings: null argument"))
        return s;
    *out = pair->pair.detection.warnings;
    return ADC_OK;
}

adc_status adc_pair_timings(const adc_pair* pair, double out_ms[7])
{
    if (adc_status s = require(pair && out_ms, "adc_pair_timings: null argument"))
        return s;
    const StageTimings& t = pair->pair.timings;
    out_ms[0] = t.ground_seg * 1e3;
    out_ms[1] = t.dynamic_removal * 1e3;
    out_ms[2] = t.feature_extraction * 1e3;
    out_ms[3] = t.beam_classification * 1e3;
    out_ms[4] = t.gpr_filtering * 1e3;
    out_ms[5] = t.adi_build * 1e3;
    out_ms[6] = t.label_render * 1e3;
    return ADC_OK;
}

void adc_pair_free(adc_pair* pair)
{
    delete pair;
}

adc_status adc_postprocess(const adc_image* bev_mask, const adc_config* cfg, adc_ppresult** out)
{
    if (adc_status s = require(bev_mask && cfg && out, "adc_postprocess: null argument"))
        return s;
    return guarded([&] {
        auto res = std::make_unique<adc_ppresult>();
        res->candidates = select_candidates(bev_mask->img, cfg->cfg.postprocess);
        std::map<int, std::vector<BevCandidate>> by_instance;
        for (const BevCandidate& c : res->candidates)
            by_instance[c.instance].push_back(c);
        for (const auto& [instance, members] : by_instance)
            res->curves.push_back(fit_quadratic(members));
        *out = res.release();
        return ADC_OK;
    });
}

adc_status adc_warp_to_bev(const adc_image* front_mask, const adc_calib* calib,
                           const adc_config* cfg, adc_image** out)
{
    if (adc_status s = require(front_mask && calib && cfg && out, "adc_warp_to_bev: null argument"))
        return s;
    return guarded([&] {
        const Homography h =
            ipm_from_calibration(calib->calib, cfg->cfg.bev, cfg->cfg.bev.ground_height);
        auto img = std::make_unique<adc_image>();
        img->img = warp_to_bev(front_mask->img, h, cfg->cfg.bev);
        *out = img.release();
        return ADC_OK;
    });
}

adc_status adc_ppresult_curve_count(const adc_ppresult* res, size_t* out)
{
    if (adc_status s = require(res && out, "adc_ppresult_curve_count: null argument"))
        return s;
    *out = res->curves.size();
    return ADC_OK;
}

adc_status adc_ppresult_curve(const adc_ppresult* res, size_t index, double coeffs[3],
                              double rows[2], int* linear_fallback)
{
    if (adc_status s =
            require(res && coeffs && rows && linear_fallback, "adc_ppresult_curve: null argument"))
        return s;
    if (adc_status s = require(index < res->curves.size(), "adc_ppresult_curve: index out of range"))
        return s;
    const QuadraticCurve& c = res->curves[index];
    coeffs[0] = c.a;
    coeffs[1] = c.b;
    coeffs[2] = c.c;
    rows[0] = c.v_min;
    rows[1] = c.v_max;
    *linear_fallback = c.linear_fallback ? 1 : 0;
    return ADC_OK;
}

adc_status adc_ppresult_render(const adc_ppresult* res, const adc_config* cfg, adc_image** out)
{
    if (adc_status s = require(res && cfg && out, "adc_ppresult_render: null argument"))
        return s;
    return guarded([&] {
        auto img = std::make_unique<adc_image>();
        img->img = rasterize_curves(res->curves, cfg->cfg.bev);
        *out = img.release();
        return ADC_OK;
    });
}

adc_status adc_ppresult_to_json(const adc_ppresult* res, char** out)
{
    if (adc_status s = require(res && out, "adc_ppresult_to_json: null argument"))
        return s;
    return guarded([&] {
        nlohmann::json j;
        j["candidates"] = nlohmann::json::array();
        for (const BevCandidate& c : res->candidates)
            j["candidates"].push_back({{"instance", c.instance}, {"row", c.row}, {"col", c.col}});
        j["curves"] = nlohmann::json::array();
        for (const QuadraticCurve& c : res->curves)
            j["curves"].push_back({{"a", c.a},
                                   {"b", c.b},
                                   {"c", c.c},
                                   {"v_min", c.v_min},
                                   {"v_max", c.v_max},
                                   {"linear_fallback", c.linear_fallback}});
        *out = dup_string(j.dump(2));
        return ADC_OK;
    });
}

void adc_ppresult_free(adc_ppresult* res)
{
    delete res;
}

adc_status adc_evaluate(const adc_image* pred, const adc_image* gt, double tolerance,
                        double out_counts[3], double out_metrics[3])
{
    if (adc_status s = require(pred && gt && out_counts && out_metrics,
                               "adc_evaluate: null argument"))
        return s;
    if (adc_status s = require(tolerance >= 0.0, "adc_evaluate: tolerance must be >= 0"))
        return s;
    return guarded([&] {
        const ConfusionCounts counts = match_with_tolerance(pred->img, gt->img, tolerance);
        const Metrics m = compute_metrics(counts);
        out_counts[0] = static_cast<double>(counts.tp);
        out_counts[1] = static_cast<double>(counts.fp);
        out_counts[2] = static_cast<double>(counts.fn);
        out_metrics[0] = m.precision;
        out_metrics[1] = m.recall;
        out_metrics[2] = m.f1;
        return ADC_OK;
    });
}

adc_status adc_synth(const adc_config* cfg, adc_scene** out)
{
    if (adc_status s = require(cfg && out, "adc_synth: null argument"))
        return s;
    return guarded([&] {
        auto scene = std::make_unique<adc_scene>();
        scene->scene = generate_scene(cfg->cfg.synth);
        scene->cloud_view.cloud = scene->scene.cloud;
        scene->calib_view.calib = scene->scene.calib;
        *out = scene.release();
        return ADC_OK;
    });
}

const adc_cloud* adc_scene_cloud(const adc_scene* scene)
{
    return scene ? &scene->cloud_view : nullptr;
}

const adc_calib* adc_scene_calib(const adc_scene* scene)
{
    return scene ? &scene->calib_view : nullptr;
}

adc_status adc_scene_gt_bev(const adc_scene* scene, const adc_config* cfg, adc_image** out)
{
    if (adc_status s = require(scene && cfg && out, "adc_scene_gt_bev: null argument"))
        return s;
    return guarded([&] {
        auto img = std::make_unique<adc_image>();
        img->img = ground_truth_bev(scene->scene.left_curb, scene->scene.right_curb, cfg->cfg.bev);
        *out = img.release();
        return ADC_OK;
    });
}

adc_status adc_scene_gt_json(const adc_scene* scene, char** out)
{
    if (adc_status s = require(scene && out, "adc_scene_gt_json: null argument"))
        return s;
    return guarded([&] {
        nlohmann::json j;
        auto dump_line = [](const std::vector<Eigen::Vector3d>& line) {
            nlohmann::json arr = nlohmann::json::array();
            for (const Eigen::Vector3d& p : line)
                arr.push_back({p.x(), p.y(), p.z()});
            return arr;
        };
        j["left"] = dump_line(scene->scene.left_curb);
        j["right"] = dump_line(scene->scene.right_curb);
        *out = dup_string(j.dump(2));
        return ADC_OK;
    });
}

void adc_scene_free(adc_scene* scene)
{
    delete scene;
}

} // extern "C"
