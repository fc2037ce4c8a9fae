#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include <adicurb.h>

#include "helpers.hpp"

namespace
{

// RAII holders for the opaque handles used below.
template <typename T, void (*Free)(T*)> struct Owned
{
    T* ptr = nullptr;
    ~Owned()
    {
        if (ptr)
            Free(ptr);
    }
    T** out() { return &ptr; }
    operator T*() const { return ptr; }
};

using Config = Owned<adc_config, adc_config_free>;
using Cloud = Owned<adc_cloud, adc_cloud_free>;
using Calib = Owned<adc_calib, adc_calib_free>;
using ImageH = Owned<adc_image, adc_image_free>;
using Adi = Owned<adc_adi, adc_adi_free>;
using Detection = Owned<adc_detection, adc_detection_free>;
using Pair = Owned<adc_pair, adc_pair_free>;
using PpResult = Owned<adc_ppresult, adc_ppresult_free>;
using SceneH = Owned<adc_scene, adc_scene_free>;

std::string take(char* s)
{
    std::string out = s ? s : "";
    adc_string_free(s);
    return out;
}

// A small synthetic scene shared by the heavier cases.
adc_status make_scene(Config& cfg, SceneH& scene)
{
    const adc_status rc = adc_config_parse(
        R"({"synth": {"rings": 32, "azimuth_resolution": 0.0087266, "max_range": 40.0,
                      "noise_sigma": 0.01, "seed": 9},
            "annotator": {"num_rings": 32}})",
        cfg.out());
    if (rc != ADC_OK)
        return rc;
    return adc_synth(cfg, scene.out());
}

} // namespace

TEST_CASE("version and error reporting basics")
{
    REQUIRE(adc_version() != nullptr);
    CHECK(std::strlen(adc_version()) > 0);

    Config cfg;
    CHECK(adc_config_load("/nonexistent/path.json", cfg.out()) == ADC_ERR_IO);
    CHECK(std::strlen(adc_last_error()) > 0);
    CHECK(cfg.ptr == nullptr);

    CHECK(adc_config_parse("{ definitely not json", cfg.out()) == ADC_ERR_PARSE);
    CHECK(adc_config_parse(R"({"nope": 1})", cfg.out()) != ADC_OK);
    CHECK(adc_config_dump(nullptr, nullptr) == ADC_ERR_INVALID);
}

TEST_CASE("config dump/parse/hash round-trip through the C API")
{
    Config cfg;
    REQUIRE(adc_config_parse(R"({"eval": {"tolerance": 3.5}})", cfg.out()) == ADC_OK);
    char* raw = nullptr;
    REQUIRE(adc_config_dump(cfg, &raw) == ADC_OK);
    const std::string dump = take(raw);
    CHECK(dump.find("3.5") != std::string::npos);

    Config back;
    REQUIRE(adc_config_parse(dump.c_str(), back.out()) == ADC_OK);
    uint64_t h1 = 0, h2 = 0;
    REQUIRE(adc_config_hash(cfg, &h1) == ADC_OK);
    REQUIRE(adc_config_hash(back, &h2) == ADC_OK);
    CHECK(h1 == h2);

    Config defaults;
    REQUIRE(adc_config_default(defaults.out()) == ADC_OK);
    uint64_t h3 = 0;
    REQUIRE(adc_config_hash(defaults, &h3) == ADC_OK);
    CHECK(h3 != h1);
}

TEST_CASE("cloud save/load round-trips through the C API")
{
    testutil::TempDir dir;
    Config cfg;
    SceneH scene;
    REQUIRE(make_scene(cfg, scene) == ADC_OK);
    const adc_cloud* cloud = adc_scene_cloud(scene);
    REQUIRE(cloud != nullptr);
    size_t n = 0;
    REQUIRE(adc_cloud_size(cloud, &n) == ADC_OK);
    CHECK(n > 1000);

    const std::string path = dir.file("cloud.bin");
    REQUIRE(adc_cloud_save(cloud, path.c_str()) == ADC_OK);
    Cloud loaded;
    REQUIRE(adc_cloud_load(path.c_str(), cfg, loaded.out()) == ADC_OK);
    size_t m = 0;
    REQUIRE(adc_cloud_size(loaded, &m) == ADC_OK);
    CHECK(m == n);

    CHECK(adc_cloud_load(dir.file("absent.bin").c_str(), cfg, loaded.out()) == ADC_ERR_IO);
}

TEST_CASE("calib save/load round-trips through the C API")
{
    testutil::TempDir dir;
    Config cfg;
    SceneH scene;
    REQUIRE(make_scene(cfg, scene) == ADC_OK);
    const std::string path = dir.file("calib.txt");
    REQUIRE(adc_calib_save(adc_scene_calib(scene), path.c_str()) == ADC_OK);
    Calib loaded;
    REQUIRE(adc_calib_load(path.c_str(), loaded.out()) == ADC_OK);
    CHECK(adc_calib_load("/nope/calib.txt", loaded.out()) == ADC_ERR_IO);
}

TEST_CASE("ADI computation, serialization and preview through the C API")
{
    testutil::TempDir dir;
    Config cfg;
    SceneH scene;
    REQUIRE(make_scene(cfg, scene) == ADC_OK);

    Adi adi;
    REQUIRE(adc_compute_adi(adc_scene_cloud(scene), adc_scene_calib(scene), cfg,
                            adi.out()) == ADC_OK);
    const std::string path = dir.file("frame.f32");
    REQUIRE(adc_adi_save_f32(adi, path.c_str()) == ADC_OK);
    Adi back;
    REQUIRE(adc_adi_load_f32(path.c_str(), back.out()) == ADC_OK);

    ImageH img_a, img_b;
    REQUIRE(adc_adi_to_image(adi, cfg, img_a.out()) == ADC_OK);
    REQUIRE(adc_adi_to_image(back, cfg, img_b.out()) == ADC_OK);
    int w = 0, h = 0;
    REQUIRE(adc_image_size(img_a, &w, &h) == ADC_OK);
    CHECK(w == 1242);
    CHECK(h == 375);
    CHECK(std::memcmp(adc_image_data(img_a), adc_image_data(img_b),
                      size_t(w) * size_t(h)) == 0);

    const std::string png = dir.file("frame.png");
    REQUIRE(adc_image_save_png(img_a, png.c_str()) == ADC_OK);
    ImageH loaded;
    REQUIRE(adc_image_load_png(png.c_str(), loaded.out()) == ADC_OK);
    CHECK(std::memcmp(adc_image_data(loaded), adc_image_data(img_a),
                      size_t(w) * size_t(h)) == 0);
}

TEST_CASE("detection through the C API finds both curb sides")
{
    Config cfg;
    SceneH scene;
    REQUIRE(make_scene(cfg, scene) == ADC_OK);
    Detection det;
    REQUIRE(adc_detect(adc_scene_cloud(scene), cfg, det.out()) == ADC_OK);

    size_t left = 0, right = 0;
    REQUIRE(adc_detection_count(det, 0, &left) == ADC_OK);
    REQUIRE(adc_detection_count(det, 1, &right) == ADC_OK);
    CHECK(left > 0);
    CHECK(right > 0);
    CHECK(adc_detection_count(det, 2, &left) == ADC_ERR_INVALID);

    double xyz[3] = {0, 0, 0};
    REQUIRE(adc_detection_point(det, 0, 0, xyz) == ADC_OK);
    CHECK(xyz[1] > 0.0); // left side has positive y
    CHECK(adc_detection_point(det, 0, left, xyz) == ADC_ERR_INVALID);

    double direction = 1.0;
    REQUIRE(adc_detection_road_direction(det, &direction) == ADC_OK);
    CHECK(std::abs(direction) < 0.2);

    double ms[5] = {-1, -1, -1, -1, -1};
    REQUIRE(adc_detection_timings(det, ms) == ADC_OK);
    for (double v : ms)
        CHECK(v >= 0.0);
}

TEST_CASE("training pair and evaluation through the C API")
{
    Config cfg;
    SceneH scene;
    REQUIRE(make_scene(cfg, scene) == ADC_OK);
    Pair pair;
    REQUIRE(adc_generate_pair(adc_scene_cloud(scene), adc_scene_calib(scene), cfg,
                              pair.out()) == ADC_OK);
    CHECK(adc_pair_adi(pair) != nullptr);
    ImageH label;
    REQUIRE(adc_pair_label(pair, label.out()) == ADC_OK);
    int w = 0, h = 0;
    REQUIRE(adc_image_size(label, &w, &h) == ADC_OK);
    CHECK(w == 1242);
    CHECK(h == 375);

    double ms[7];
    REQUIRE(adc_pair_timings(pair, ms) == ADC_OK);

    // Perfect self-match via the evaluation entry point.
    double counts[3], metrics[3];
    REQUIRE(adc_evaluate(label, label, 2.0, counts, metrics) == ADC_OK);
    CHECK(counts[1] == 0.0);
    CHECK(counts[2] == 0.0);
    CHECK(counts[0] > 0.0);
    CHECK(metrics[2] == doctest::Approx(1.0));
}

TEST_CASE("postprocess and ground-truth BEV through the C API")
{
    Config cfg;
    SceneH scene;
    REQUIRE(make_scene(cfg, scene) == ADC_OK);
    ImageH gt;
    REQUIRE(adc_scene_gt_bev(scene, cfg, gt.out()) == ADC_OK);

    PpResult res;
    REQUIRE(adc_postprocess(gt, cfg, res.out()) == ADC_OK);
    size_t curves = 0;
    REQUIRE(adc_ppresult_curve_count(res, &curves) == ADC_OK);
    REQUIRE(curves == 2);
    for (size_t i = 0; i < curves; ++i)
    {
        double coeffs[3], rows[2];
        int fallback = -1;
        REQUIRE(adc_ppresult_curve(res, i, coeffs, rows, &fallback) == ADC_OK);
        CHECK(fallback == 0);
        // Straight curbs at y = +/-4 m -> columns near 120 / 280.
        const double mid = 0.5 * (rows[0] + rows[1]);
        const double col = coeffs[0] * mid * mid + coeffs[1] * mid + coeffs[2];
        CHECK((std::abs(col - 120.0) < 2.0 || std::abs(col - 280.0) < 2.0));
    }

    ImageH rendered;
    REQUIRE(adc_ppresult_render(res, cfg, rendered.out()) == ADC_OK);
    double counts[3], metrics[3];
    REQUIRE(adc_evaluate(rendered, gt, 2.0, counts, metrics) == ADC_OK);
    CHECK(metrics[2] > 0.95);

    char* raw = nullptr;
    REQUIRE(adc_ppresult_to_json(res, &raw) == ADC_OK);
    const std::string json = take(raw);
    CHECK(json.find("curves") != std::string::npos);

    raw = nullptr;
    REQUIRE(adc_scene_gt_json(scene, &raw) == ADC_OK);
    CHECK(take(raw).find("left") != std::string::npos);
}

TEST_CASE("null-handle calls fail with ADC_ERR_INVALID")
{
    size_t n = 0;
    double d = 0.0;
    CHECK(adc_cloud_size(nullptr, &n) == ADC_ERR_INVALID);
    CHECK(adc_detection_road_direction(nullptr, &d) == ADC_ERR_INVALID);
    CHECK(adc_synth(nullptr, nullptr) == ADC_ERR_INVALID);
    CHECK(adc_evaluate(nullptr, nullptr, 2.0, nullptr, nullptr) == ADC_ERR_INVALID);
    CHECK(std::strlen(adc_last_error()) > 0);
}
