// adicurb command-line tool. Talks to the library exclusively through the
// C API in adicurb.h; all orchestration (batching, atomic writes, summaries)
// lives here.
#include <adicurb.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

// Exit codes: 0 success, 1 partial (skipped frames / soft failure),
// 2 usage, config or I/O error.
constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitUsage = 2;

struct ApiError : std::runtime_error
{
    adc_status code;
    ApiError(adc_status c, const std::string& what) : std::runtime_error(what), code(c) {}
};

void check(adc_status status, const char* context)
{
    if (status != ADC_OK)
        throw ApiError(status, std::string(context) + ": " + adc_last_error());
}

int exit_code_for(const ApiError& e)
{
    switch (e.code)
    {
    case ADC_ERR_IO:
    case ADC_ERR_PARSE:
    case ADC_ERR_INVALID:
        return kExitUsage;
    default:
        return kExitPartial;
    }
}

template <typename T>
using Handle = std::unique_ptr<T, void (*)(T*)>;

Handle<adc_config> load_config(const std::string& path_flag)
{
    adc_config* cfg = nullptr;
    if (!path_flag.empty())
        check(adc_config_load(path_flag.c_str(), &cfg), "config");
    else if (const char* env = std::getenv("ADICURB_CONFIG"); env && *env)
        check(adc_config_load(env, &cfg), "config (ADICURB_CONFIG)");
    else
        check(adc_config_default(&cfg), "config");
    return {cfg, adc_config_free};
}

std::string config_hash_hex(const adc_config* cfg)
{
    uint64_t h = 0;
    check(adc_config_hash(cfg, &h), "config hash");
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string take_string(char* s)
{
    std::string out(s ? s : "");
    adc_string_free(s);
    return out;
}

// Frame-atomic write: produce the file under a temporary name in the target
// directory, then rename into place.
template <typename SaveFn>
void atomic_write(const fs::path& final_path, SaveFn&& save)
{
    const fs::path tmp = final_path.string() + ".tmp";
    save(tmp.string());
    fs::rename(tmp, final_path);
}

void write_text_atomic(const fs::path& path, const std::string& text)
{
    atomic_write(path, [&](const std::string& tmp) {
        std::ofstream out(tmp, std::ios::binary);
        out << text;
        if (!out)
            throw std::runtime_error("write error: " + tmp);
    });
}

std::vector<fs::path> collect_inputs(const std::vector<std::string>& args,
                                     const std::string& extension)
{
    std::vector<fs::path> files;
    for (const std::string& a : args)
    {
        const fs::path p(a);
        if (fs::is_directory(p))
        {
            for (const auto& entry : fs::directory_iterator(p))
                if (entry.is_regular_file() && entry.path().extension() == extension)
                    files.push_back(entry.path());
        }
        else
        {
            files.push_back(p);
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

struct FrameOutcome
{
    bool ok = true;
    std::string message;
};

// Frame-parallel worker pool. Each worker owns its frame end-to-end; only
// the outcome vector entry for that frame is written, so no lock is needed
// beyond the pre-sized vector.
std::vector<FrameOutcome> run_pool(std::size_t n, int jobs,
                                   const std::function<void(std::size_t)>& body)
{
    std::vector<FrameOutcome> outcomes(n);
    if (n == 0)
        return outcomes;
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers =
        std::min<std::size_t>(n, jobs > 0 ? std::min<unsigned>(jobs, hw) : hw);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
        {
            try
            {
                body(i);
            }
            catch (const std::exception& e)
            {
                outcomes[i] = {false, e.what()};
            }
        }
    };
    std::vector<std::thread> threads;
    for (unsigned w = 1; w < workers; ++w)
        threads.emplace_back(worker);
    worker();
    for (std::thread& t : threads)
        t.join();
    return outcomes;
}

void write_run_json(const fs::path& outdir, const std::string& command,
                    const adc_config* cfg, json extra)
{
    json run;
    run["tool_version"] = adc_version();
    run["command"] = command;
    run["config_hash"] = config_hash_hex(cfg);
    for (auto& [key, value] : extra.items())
        run[key] = std::move(value);
    write_text_atomic(outdir / "run.json", run.dump(2) + "\n");
}

double percentile(std::vector<double> values, double q)
{
    if (values.empty())
        return 0.0;
    std::sort(values.begin(), values.end());
    const double pos = q * (values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - lo;
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

int summarize_batch(const char* verb, const std::vector<FrameOutcome>& outcomes, bool strict)
{
    std::size_t failed = 0;
    for (const FrameOutcome& o : outcomes)
        if (!o.ok)
        {
            ++failed;
            std::cerr << "warning: frame skipped: " << o.message << "\n";
        }
    std::cout << verb << ": " << outcomes.size() - failed << " of " << outcomes.size()
              << " frame(s) processed, " << failed << " skipped\n";
    if (failed == 0)
        return kExitOk;
    return strict ? kExitUsage : kExitPartial;
}

Handle<adc_cloud> load_cloud(const fs::path& path, const adc_config* cfg)
{
    adc_cloud* cloud = nullptr;
    check(adc_cloud_load(path.string().c_str(), cfg, &cloud), path.string().c_str());
    return {cloud, adc_cloud_free};
}

Handle<adc_calib> load_calib(const fs::path& path)
{
    adc_calib* calib = nullptr;
    check(adc_calib_load(path.string().c_str(), &calib), path.string().c_str());
    return {calib, adc_calib_free};
}

Handle<adc_image> load_png(const fs::path& path)
{
    adc_image* img = nullptr;
    check(adc_image_load_png(path.string().c_str(), &img), path.string().c_str());
    return {img, adc_image_free};
}

void save_png_atomic(const adc_image* img, const fs::path& path)
{
    atomic_write(path, [&](const std::string& tmp) {
        check(adc_image_save_png(img, tmp.c_str()), path.string().c_str());
    });
}

// ---------------------------------------------------------------- adi ----

struct AdiArgs
{
    std::vector<std::string> inputs;
    std::string calib;
    std::string config;
    std::string outdir;
    int jobs = 0;
    bool strict = false;
    bool save_f32 = true;
};

int cmd_adi(const AdiArgs& args)
{
    auto cfg = load_config(args.config);
    auto calib = load_calib(args.calib);
    const auto files = collect_inputs(args.inputs, ".bin");
    fs::create_directories(args.outdir);

    auto outcomes = run_pool(files.size(), args.jobs, [&](std::size_t i) {
        auto cloud = load_cloud(files[i], cfg.get());
        adc_adi* adi_raw = nullptr;
        check(adc_compute_adi(cloud.get(), calib.get(), cfg.get(), &adi_raw), "adi");
        Handle<adc_adi> adi{adi_raw, adc_adi_free};

        adc_image* img_raw = nullptr;
        check(adc_adi_to_image(adi.get(), cfg.get(), &img_raw), "adi normalize");
        Handle<adc_image> img{img_raw, adc_image_free};

        const std::string stem = files[i].stem().string();
        save_png_atomic(img.get(), fs::path(args.outdir) / (stem + "_adi.png"));
        if (args.save_f32)
            atomic_write(fs::path(args.outdir) / (stem + "_adi.f32"), [&](const std::string& tmp) {
                check(adc_adi_save_f32(adi.get(), tmp.c_str()), "adi f32");
            });
    });

    const int code = summarize_batch("adi", outcomes, args.strict);
    std::size_t failed = 0;
    for (const auto& o : outcomes)
        failed += o.ok ? 0 : 1;
    write_run_json(args.outdir, "adi", cfg.get(),
                   {{"frames", files.size()}, {"skipped", failed}});
    return code;
}

// ----------------------------------------------------------- annotate ----

struct AnnotateArgs
{
    std::string dataset;
    std::string calib;
    std::string config;
    std::string outdir;
    int jobs = 0;
    bool strict = false;
};

int cmd_annotate(const AnnotateArgs& args)
{
    auto cfg = load_config(args.config);

    fs::path data_dir(args.dataset);
    if (fs::is_directory(data_dir / "velodyne"))
        data_dir /= "velodyne";
    const auto files = collect_inputs({data_dir.string()}, ".bin");

    fs::path calib_path(args.calib);
    if (calib_path.empty())
        calib_path = fs::path(args.dataset) / "calib.txt";
    auto calib = load_calib(calib_path);
    for (const char* sub : {"adi", "adi_f32", "label", "meta"})
        fs::create_directories(fs::path(args.outdir) / sub);
    const std::string cfg_hash = config_hash_hex(cfg.get());

    std::mutex timing_mutex;
    std::vector<std::array<double, 7>> timings;

    auto outcomes = run_pool(files.size(), args.jobs, [&](std::size_t i) {
        auto cloud = load_cloud(files[i], cfg.get());
        adc_pair* pair_raw = nullptr;
        check(adc_generate_pair(cloud.get(), calib.get(), cfg.get(), &pair_raw), "annotate");
        Handle<adc_pair> pair{pair_raw, adc_pair_free};

        adc_image* adi_img_raw = nullptr;
        check(adc_adi_to_image(adc_pair_adi(pair.get()), cfg.get(), &adi_img_raw),
              "adi normalize");
        Handle<adc_image> adi_img{adi_img_raw, adc_image_free};
        adc_image* label_raw = nullptr;
        check(adc_pair_label(pair.get(), &label_raw), "label");
        Handle<adc_image> label{label_raw, adc_image_free};

        const std::string stem = files[i].stem().string();
        const fs::path out(args.outdir);
        save_png_atomic(adi_img.get(), out / "adi" / (stem + ".png"));
        save_png_atomic(label.get(), out / "label" / (stem + ".png"));
        atomic_write(out / "adi_f32" / (stem + ".bin"), [&](const std::string& tmp) {
            check(adc_adi_save_f32(adc_pair_adi(pair.get()), tmp.c_str()), "adi f32");
        });

        std::array<double, 7> ms{};
        check(adc_pair_timings(pair.get(), ms.data()), "timings");
        uint32_t warnings = 0;
        check(adc_pair_warnings(pair.get(), &warnings), "warnings");
        json meta;
        meta["frame"] = stem;
        meta["config_hash"] = cfg_hash;
        meta["warnings"] = warnings;
        meta["timings_ms"] = {{"ground_seg", ms[0]},          {"dynamic_removal", ms[1]},
                              {"feature_extraction", ms[2]},  {"beam_classification", ms[3]},
                              {"gpr_filter", ms[4]},          {"adi_build", ms[5]},
                              {"label_render", ms[6]}};
        write_text_atomic(out / "meta" / (stem + ".json"), meta.dump(2) + "\n");

        std::lock_guard<std::mutex> lock(timing_mutex);
        timings.push_back(ms);
    });

    const int code = summarize_batch("annotate", outcomes, args.strict);

    static const char* kStages[7] = {"ground_seg",          "dynamic_removal",
                                     "feature_extraction",  "beam_classification",
                                     "gpr_filter",          "adi_build",
                                     "label_render"};
    json stage_stats = json::object();
    for (int s = 0; s < 7; ++s)
    {
        std::vector<double> values;
        for (const auto& t : timings)
            values.push_back(t[s]);
        stage_stats[kStages[s]] = {{"p50_ms", percentile(values, 0.5)},
                                   {"p95_ms", percentile(values, 0.95)}};
    }
    std::size_t failed = 0;
    for (const auto& o : outcomes)
        failed += o.ok ? 0 : 1;
    write_run_json(args.outdir, "annotate", cfg.get(),
                   {{"frames", files.size()}, {"skipped", failed}, {"timings", stage_stats}});
    return code;
}

// -------------------------------------------------------- postprocess ----

struct PostprocessArgs
{
    std::vector<std::string> inputs;
    std::string calib; // empty: inputs are already BEV masks
    std::string config;
    std::string outdir;
    int jobs = 0;
};

int cmd_postprocess(const PostprocessArgs& args)
{
    auto cfg = load_config(args.config);
    Handle<adc_calib> calib{nullptr, adc_calib_free};
    if (!args.calib.empty())
        calib = load_calib(args.calib);
    const auto files = collect_inputs(args.inputs, ".png");
    fs::create_directories(args.outdir);

    auto outcomes = run_pool(files.size(), args.jobs, [&](std::size_t i) {
        auto mask = load_png(files[i]);
        Handle<adc_image> bev{nullptr, adc_image_free};
        if (calib)
        {
            adc_image* bev_raw = nullptr;
            check(adc_warp_to_bev(mask.get(), calib.get(), cfg.get(), &bev_raw), "warp");
            bev.reset(bev_raw);
        }
        else
        {
            bev = std::move(mask);
        }

        adc_ppresult* res_raw = nullptr;
        check(adc_postprocess(bev.get(), cfg.get(), &res_raw), "postprocess");
        Handle<adc_ppresult> res{res_raw, adc_ppresult_free};
        adc_image* refined_raw = nullptr;
        check(adc_ppresult_render(res.get(), cfg.get(), &refined_raw), "render");
        Handle<adc_image> refined{refined_raw, adc_image_free};

        char* res_json_raw = nullptr;
        check(adc_ppresult_to_json(res.get(), &res_json_raw), "result");
        const json res_json = json::parse(take_string(res_json_raw));

        const std::string stem = files[i].stem().string();
        save_png_atomic(bev.get(), fs::path(args.outdir) / (stem + "_bev.png"));
        write_text_atomic(fs::path(args.outdir) / (stem + "_candidates.json"),
                          res_json.at("candidates").dump(2) + "\n");
        write_text_atomic(fs::path(args.outdir) / (stem + "_curves.json"),
                          res_json.at("curves").dump(2) + "\n");
        save_png_atomic(refined.get(), fs::path(args.outdir) / (stem + "_refined.png"));
    });

    // Any failure here is treated as a hard input error.
    for (const FrameOutcome& o : outcomes)
        if (!o.ok)
        {
            std::cerr << "error: " << o.message << "\n";
            return kExitUsage;
        }
    std::cout << "postprocess: " << files.size() << " mask(s) processed\n";
    write_run_json(args.outdir, "postprocess", cfg.get(), {{"frames", files.size()}});
    return kExitOk;
}

// --------------------------------------------------------------- eval ----

struct EvalArgs
{
    std::string pred;
    std::string gt;
    std::string config;
    std::string outdir;
    double tolerance = -1.0; // <0: take from config (via default 2.0)
    bool strict = false;
};

int cmd_eval(const EvalArgs& args)
{
    auto cfg = load_config(args.config);
    double tolerance = args.tolerance;
    if (tolerance < 0.0)
    {
        char* dump_raw = nullptr;
        check(adc_config_dump(cfg.get(), &dump_raw), "config");
        tolerance = json::parse(take_string(dump_raw)).at("eval").at("tolerance").get<double>();
    }

    const auto pred_files = collect_inputs({args.pred}, ".png");
    if (pred_files.empty())
        std::cerr << "warning: no prediction masks found\n";

    json frames = json::array();
    double sum_tp = 0, sum_fp = 0, sum_fn = 0;
    double macro_p = 0, macro_r = 0, macro_f = 0;
    std::size_t evaluated = 0, missing = 0;

    for (const fs::path& pred_path : pred_files)
    {
        fs::path gt_path(args.gt);
        if (fs::is_directory(gt_path))
            gt_path /= pred_path.filename();
        if (!fs::exists(gt_path))
        {
            ++missing;
            std::cerr << "warning: no ground truth for " << pred_path.filename() << "\n";
            if (args.strict)
                return kExitUsage;
            continue;
        }
        auto pred = load_png(pred_path);
        auto gt = load_png(gt_path);
        double counts[3], metrics[3];
        check(adc_evaluate(pred.get(), gt.get(), tolerance, counts, metrics), "evaluate");
        frames.push_back({{"frame", pred_path.stem().string()},
                          {"tp", counts[0]},
                          {"fp", counts[1]},
                          {"fn", counts[2]},
                          {"precision", metrics[0]},
                          {"recall", metrics[1]},
                          {"f1", metrics[2]}});
        sum_tp += counts[0];
        sum_fp += counts[1];
        sum_fn += counts[2];
        macro_p += metrics[0];
        macro_r += metrics[1];
        macro_f += metrics[2];
        ++evaluated;
    }

    const double micro_p = sum_tp + sum_fp > 0 ? sum_tp / (sum_tp + sum_fp) : 0.0;
    const double micro_r = sum_tp + sum_fn > 0 ? sum_tp / (sum_tp + sum_fn) : 0.0;
    const double micro_f =
        micro_p + micro_r > 0 ? 2.0 * micro_p * micro_r / (micro_p + micro_r) : 0.0;

    json report;
    report["tolerance_px"] = tolerance;
    report["frames"] = frames;
    report["micro"] = {{"precision", micro_p}, {"recall", micro_r}, {"f1", micro_f}};
    report["macro"] = {{"precision", evaluated ? macro_p / evaluated : 0.0},
                       {"recall", evaluated ? macro_r / evaluated : 0.0},
                       {"f1", evaluated ? macro_f / evaluated : 0.0}};
    report["missing_gt"] = missing;

    std::cout << report.dump(2) << "\n";
    if (!args.outdir.empty())
    {
        fs::create_directories(args.outdir);
        write_text_atomic(fs::path(args.outdir) / "metrics.json", report.dump(2) + "\n");
        std::string csv = "frame,tp,fp,fn,precision,recall,f1\n";
        for (const auto& f : frames)
        {
            char line[256];
            std::snprintf(line, sizeof line, "%s,%.0f,%.0f,%.0f,%.6f,%.6f,%.6f\n",
                          f.at("frame").get<std::string>().c_str(), f.at("tp").get<double>(),
                          f.at("fp").get<double>(), f.at("fn").get<double>(),
                          f.at("precision").get<double>(), f.at("recall").get<double>(),
                          f.at("f1").get<double>());
            csv += line;
        }
        char totals[256];
        std::snprintf(totals, sizeof totals, "micro,%.0f,%.0f,%.0f,%.6f,%.6f,%.6f\n", sum_tp,
                      sum_fp, sum_fn, micro_p, micro_r, micro_f);
        csv += totals;
        write_text_atomic(fs::path(args.outdir) / "metrics.csv", csv);
        write_run_json(args.outdir, "eval", cfg.get(),
                       {{"frames", evaluated}, {"missing_gt", missing}});
    }
    return missing > 0 ? kExitPartial : kExitOk;
}

// -------------------------------------------------------------- bench ----

struct BenchArgs
{
    std::string config;
    std::string cloud; // optional KITTI cloud; default: synthetic scene
    std::string calib;
    std::string outdir;
    int iterations = 20;
    int warmup = 3;
};

int cmd_bench(const BenchArgs& args)
{
    if (args.iterations <= 0)
    {
        std::cerr << "error: nothing to measure (iterations must be > 0)\n";
        return kExitUsage;
    }
    auto cfg = load_config(args.config);

    Handle<adc_scene> scene{nullptr, adc_scene_free};
    Handle<adc_cloud> file_cloud{nullptr, adc_cloud_free};
    Handle<adc_calib> file_calib{nullptr, adc_calib_free};
    const adc_cloud* cloud = nullptr;
    const adc_calib* calib = nullptr;
    if (!args.cloud.empty())
    {
        if (args.calib.empty())
        {
            std::cerr << "error: --cloud requires --calib\n";
            return kExitUsage;
        }
        file_cloud = load_cloud(args.cloud, cfg.get());
        file_calib = load_calib(args.calib);
        cloud = file_cloud.get();
        calib = file_calib.get();
    }
    else
    {
        adc_scene* scene_raw = nullptr;
        check(adc_synth(cfg.get(), &scene_raw), "synth");
        scene.reset(scene_raw);
        cloud = adc_scene_cloud(scene.get());
        calib = adc_scene_calib(scene.get());
    }
    size_t n_points = 0;
    check(adc_cloud_size(cloud, &n_points), "cloud");

    // The post-processing stage is timed on the annotator's own label mask
    // warped into BEV, so both stages see the same frame.
    adc_pair* pair_raw = nullptr;
    check(adc_generate_pair(cloud, calib, cfg.get(), &pair_raw), "annotate");
    Handle<adc_pair> pair{pair_raw, adc_pair_free};
    adc_image* label_raw = nullptr;
    check(adc_pair_label(pair.get(), &label_raw), "label");
    Handle<adc_image> label{label_raw, adc_image_free};
    adc_image* bev_raw = nullptr;
    check(adc_warp_to_bev(label.get(), calib, cfg.get(), &bev_raw), "warp");
    Handle<adc_image> bev{bev_raw, adc_image_free};

    std::vector<double> pre_ms, post_ms;
    for (int it = 0; it < args.warmup + args.iterations; ++it)
    {
        using clock = std::chrono::steady_clock;

        auto t0 = clock::now();
        adc_adi* adi_raw = nullptr;
        check(adc_compute_adi(cloud, calib, cfg.get(), &adi_raw), "adi");
        adc_adi_free(adi_raw);
        auto t1 = clock::now();

        adc_ppresult* res_raw = nullptr;
        check(adc_postprocess(bev.get(), cfg.get(), &res_raw), "postprocess");
        adc_ppresult_free(res_raw);
        auto t2 = clock::now();

        if (it < args.warmup)
            continue;
        pre_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        post_ms.push_back(std::chrono::duration<double, std::milli>(t2 - t1).count());
    }

    json report;
    report["points"] = n_points;
    report["iterations"] = args.iterations;
    report["warmup"] = args.warmup;
    report["preprocessing"] = {{"p50_ms", percentile(pre_ms, 0.5)},
                               {"p95_ms", percentile(pre_ms, 0.95)}};
    report["postprocessing"] = {{"p50_ms", percentile(post_ms, 0.5)},
                                {"p95_ms", percentile(post_ms, 0.95)}};
    std::cout << report.dump(2) << "\n";
    if (!args.outdir.empty())
    {
        fs::create_directories(args.outdir);
        write_text_atomic(fs::path(args.outdir) / "bench.json", report.dump(2) + "\n");
        write_run_json(args.outdir, "bench", cfg.get(), {{"bench", report}});
    }
    return kExitOk;
}

// -------------------------------------------------------------- synth ----

struct SynthArgs
{
    std::string config;
    std::string outdir;
    int frames = 1;
    int jobs = 0;
};

int cmd_synth(const SynthArgs& args)
{
    auto cfg = load_config(args.config);
    char* dump_raw = nullptr;
    check(adc_config_dump(cfg.get(), &dump_raw), "config");
    const json base_cfg = json::parse(take_string(dump_raw));
    const uint64_t base_seed = base_cfg.at("synth").at("seed").get<uint64_t>();

    fs::create_directories(fs::path(args.outdir) / "velodyne");
    fs::create_directories(fs::path(args.outdir) / "gt");

    std::atomic<bool> calib_written{false};
    auto outcomes = run_pool(static_cast<std::size_t>(std::max(args.frames, 0)), args.jobs,
                             [&](std::size_t i) {
        json frame_cfg = base_cfg;
        frame_cfg["synth"]["seed"] = base_seed + i;
        adc_config* fcfg_raw = nullptr;
        check(adc_config_parse(frame_cfg.dump().c_str(), &fcfg_raw), "config");
        Handle<adc_config> fcfg{fcfg_raw, adc_config_free};

        adc_scene* scene_raw = nullptr;
        check(adc_synth(fcfg.get(), &scene_raw), "synth");
        Handle<adc_scene> scene{scene_raw, adc_scene_free};

        char stem[16];
        std::snprintf(stem, sizeof stem, "%06zu", i);
        atomic_write(fs::path(args.outdir) / "velodyne" / (std::string(stem) + ".bin"),
                     [&](const std::string& tmp) {
                         check(adc_cloud_save(adc_scene_cloud(scene.get()), tmp.c_str()),
                               "cloud");
                     });

        adc_image* gt_raw = nullptr;
        check(adc_scene_gt_bev(scene.get(), fcfg.get(), &gt_raw), "gt bev");
        Handle<adc_image> gt{gt_raw, adc_image_free};
        save_png_atomic(gt.get(), fs::path(args.outdir) / "gt" / (std::string(stem) + ".png"));

        char* gt_json_raw = nullptr;
        check(adc_scene_gt_json(scene.get(), &gt_json_raw), "gt json");
        write_text_atomic(fs::path(args.outdir) / "gt" / (std::string(stem) + "_curbs.json"),
                          take_string(gt_json_raw) + "\n");

        if (!calib_written.exchange(true))
            atomic_write(fs::path(args.outdir) / "calib.txt", [&](const std::string& tmp) {
                check(adc_calib_save(adc_scene_calib(scene.get()), tmp.c_str()), "calib");
            });
    });

    const int code = summarize_batch("synth", outcomes, /*strict=*/true);
    write_run_json(args.outdir, "synth", cfg.get(),
                   {{"frames", args.frames}, {"base_seed", base_seed}});
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"adicurb: annotation-free LiDAR curb detection pipeline"};
    app.require_subcommand(1);

    AdiArgs adi;
    auto* sub_adi = app.add_subcommand("adi", "Generate altitude difference images");
    sub_adi->add_option("inputs", adi.inputs, "Point cloud files or directories")->required();
    sub_adi->add_option("--calib", adi.calib, "Calibration file")->required();
    sub_adi->add_option("--config", adi.config, "Config JSON");
    sub_adi->add_option("--out", adi.outdir, "Output directory")->required();
    sub_adi->add_option("--jobs", adi.jobs, "Worker threads (0 = logical cores)");
    sub_adi->add_flag("--strict", adi.strict, "Fail hard on the first bad frame");
    sub_adi->add_flag("!--no-f32", adi.save_f32, "Skip the float dump");

    AnnotateArgs annotate;
    auto* sub_annotate = app.add_subcommand("annotate", "Generate ADI + curb label pairs");
    sub_annotate->add_option("dataset", annotate.dataset, "Dataset directory")->required();
    sub_annotate->add_option("--calib", annotate.calib,
                             "Calibration file (default: <dataset>/calib.txt)");
    sub_annotate->add_option("--config", annotate.config, "Config JSON");
    sub_annotate->add_option("--out", annotate.outdir, "Output directory")->required();
    sub_annotate->add_option("--jobs", annotate.jobs, "Worker threads (0 = logical cores)");
    sub_annotate->add_flag("--strict", annotate.strict, "Fail hard on the first bad frame");

    PostprocessArgs post;
    auto* sub_post = app.add_subcommand("postprocess", "Fit BEV curb curves from masks");
    sub_post->add_option("inputs", post.inputs, "Mask PNGs or directories")->required();
    sub_post->add_option("--calib", post.calib,
                         "Calibration for front-view masks (omit for BEV masks)");
    sub_post->add_option("--config", post.config, "Config JSON");
    sub_post->add_option("--out", post.outdir, "Output directory")->required();
    sub_post->add_option("--jobs", post.jobs, "Worker threads (0 = logical cores)");

    EvalArgs eval;
    auto* sub_eval = app.add_subcommand("eval", "Tolerance-based mask evaluation");
    sub_eval->add_option("--pred", eval.pred, "Prediction PNG or directory")->required();
    sub_eval->add_option("--gt", eval.gt, "Ground truth PNG or directory")->required();
    sub_eval->add_option("--config", eval.config, "Config JSON");
    sub_eval->add_option("--tol", eval.tolerance, "Tolerance in pixels (default from config)");
    sub_eval->add_option("--out", eval.outdir, "Optional output directory");
    sub_eval->add_flag("--strict", eval.strict, "Fail on missing ground truth");

    BenchArgs bench;
    auto* sub_bench = app.add_subcommand("bench", "Latency benchmark");
    sub_bench->add_option("--config", bench.config, "Config JSON");
    sub_bench->add_option("--cloud", bench.cloud, "Cloud file (default: synthetic scene)");
    sub_bench->add_option("--calib", bench.calib, "Calibration for --cloud");
    sub_bench->add_option("--out", bench.outdir, "Optional output directory");
    sub_bench->add_option("--iterations", bench.iterations, "Timed iterations");
    sub_bench->add_option("--warmup", bench.warmup, "Warm-up iterations (excluded)");

    SynthArgs synth;
    auto* sub_synth = app.add_subcommand("synth", "Generate synthetic scenes");
    sub_synth->add_option("--config", synth.config, "Config JSON");
    sub_synth->add_option("--out", synth.outdir, "Output directory")->required();
    sub_synth->add_option("--frames", synth.frames, "Number of frames");
    sub_synth->add_option("--jobs", synth.jobs, "Worker threads (0 = logical cores)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try
    {
        if (sub_adi->parsed())
            return cmd_adi(adi);
        if (sub_annotate->parsed())
            return cmd_annotate(annotate);
        if (sub_post->parsed())
            return cmd_postprocess(post);
        if (sub_eval->parsed())
            return cmd_eval(eval);
        if (sub_bench->parsed())
            return cmd_bench(bench);
        if (sub_synth->parsed())
            return cmd_synth(synth);
    }
    catch (const ApiError& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
