/* adicurb — C API for the annotation-free curb detection library.
 *
 * All functions return an adc_status unless documented otherwise. On any
 * failure the thread-local message from adc_last_error() describes the cause.
 * Objects returned through out-parameters are owned by the caller and must be
 * released with the matching *_free function; pointers documented as borrowed
 * stay valid only while their parent object is alive.
 */
#ifndef ADICURB_H
#define ADICURB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum adc_status
{
    ADC_OK = 0,
    ADC_ERR_IO = 1,      /* file could not be opened / read / written */
    ADC_ERR_PARSE = 2,   /* malformed input file */
    ADC_ERR_INVALID = 3, /* invalid argument (null handle, bad value) */
    ADC_ERR_RUNTIME = 4  /* processing failure */
} adc_status;

typedef struct adc_config adc_config;   /* full pipeline configuration */
typedef struct adc_cloud adc_cloud;     /* point cloud with ring ids */
typedef struct adc_calib adc_calib;     /* camera calibration */
typedef struct adc_image adc_image;     /* 8-bit grayscale image */
typedef struct adc_adi adc_adi;         /* float altitude-difference image */
typedef struct adc_detection adc_detection; /* 3-D curb detection result */
typedef struct adc_pair adc_pair;       /* training pair (ADI + label mask) */
typedef struct adc_ppresult adc_ppresult; /* BEV post-processing result */
typedef struct adc_scene adc_scene;     /* synthetic scene */

/* Message for the most recent failure on this thread ("" if none). The
 * pointer stays valid until the next failing adicurb call on the thread. */
const char* adc_last_error(void);

const char* adc_version(void);

/* ---- configuration ---- */
adc_status adc_config_default(adc_config** out);
adc_status adc_config_load(const char* path, adc_config** out);
adc_status adc_config_parse(const char* json_text, adc_config** out);
/* Canonical JSON dump; free with adc_string_free. */
adc_status adc_config_dump(const adc_config* cfg, char** out);
adc_status adc_config_hash(const adc_config* cfg, uint64_t* out);
void adc_config_free(adc_config* cfg);
void adc_string_free(char* s);

/* ---- point clouds and calibration ---- */
adc_status adc_cloud_load(const char* path, const adc_config* cfg, adc_cloud** out);
adc_status adc_cloud_save(const adc_cloud* cloud, const char* path);
adc_status adc_cloud_size(const adc_cloud* cloud, size_t* out);
void adc_cloud_free(adc_cloud* cloud);

adc_status adc_calib_load(const char* path, adc_calib** out);
adc_status adc_calib_save(const adc_calib* calib, const char* path);
void adc_calib_free(adc_calib* calib);

/* ---- images ---- */
adc_status adc_image_load_png(const char* path, adc_image** out);
adc_status adc_image_save_png(const adc_image* img, const char* path);
adc_status adc_image_size(const adc_image* img, int* width, int* height);
/* Borrowed row-major pixel buffer (width*height bytes). */
const uint8_t* adc_image_data(const adc_image* img);
void adc_image_free(adc_image* img);

/* ---- altitude difference image ---- */
adc_status adc_compute_adi(const adc_cloud* cloud, const adc_calib* calib,
                           const adc_config* cfg, adc_adi** out);
adc_status adc_adi_save_f32(const adc_adi* adi, const char* path);
adc_status adc_adi_load_f32(const char* path, adc_adi** out);
/* 8-bit normalization using the clip value from cfg. */
adc_status adc_adi_to_image(const adc_adi* adi, const adc_config* cfg, adc_image** out);
void adc_adi_free(adc_adi* adi);

/* ---- 3-D curb detection ---- */
adc_status adc_detect(const adc_cloud* cloud, const adc_config* cfg, adc_detection** out);
/* side: 0 = left, 1 = right. */
adc_status adc_detection_count(const adc_detection* det, int side, size_t* out);
adc_status adc_detection_point(const adc_detection* det, int side, size_t index,
                               double xyz[3]);
adc_status adc_detection_road_direction(const adc_detection* det, double* out);
/* Bitmask of detection warnings (see library documentation). */
adc_status adc_detection_warnings(const adc_detection* det, uint32_t* out);
/* Per-stage wall-clock milliseconds:
 * [ground_seg, feature_extraction, beam_classification, gpr_filter, total]. */
adc_status adc_detection_timings(const adc_detection* det, double out_ms[5]);
void adc_detection_free(adc_detection* det);

/* ---- automatic annotation ---- */
adc_status adc_generate_pair(const adc_cloud* cloud, const adc_calib* calib,
                             const adc_config* cfg, adc_pair** out);
/* Borrowed views of the pair contents. */
const adc_adi* adc_pair_adi(const adc_pair* pair);
adc_status adc_pair_label(const adc_pair* pair, adc_image** out);
adc_status adc_pair_warnings(const adc_pair* pair, uint32_t* out);
/* Per-stage wall-clock milliseconds:
 * [ground_seg, dynamic_removal, feature_extraction, beam_classification,
 *  gpr_filter, adi_build, label_render]. */
adc_status adc_pair_timings(const adc_pair* pair, double out_ms[7]);
void adc_pair_free(adc_pair* pair);

/* ---- BEV post-processing ---- */
/* Interprets the nonzero pixels of a BEV mask as curb evidence, selects
 * per-row median candidates per instance and fits quadratic curves. */
adc_status adc_postprocess(const adc_image* bev_mask, const adc_config* cfg,
                           adc_ppresult** out);
/* Warps a front-view mask into BEV using the calibration-derived homography. */
adc_status adc_warp_to_bev(const adc_image* front_mask, const adc_calib* calib,
                           const adc_config* cfg, adc_image** out);
adc_status adc_ppresult_curve_count(const adc_ppresult* res, size_t* out);
/* coeffs = {a, b, c} of col = a*row^2 + b*row + c; rows = {v_min, v_max};
 * linear_fallback set to 1 when a degenerate fit fell back to a line. */
adc_status adc_ppresult_curve(const adc_ppresult* res, size_t index,
                              double coeffs[3], double rows[2], int* linear_fallback);
adc_status adc_ppresult_render(const adc_ppresult* res, const adc_config* cfg,
                               adc_image** out);
adc_status adc_ppresult_to_json(const adc_ppresult* res, char** out);
void adc_ppresult_free(adc_ppresult* res);

/* ---- evaluation ---- */
/* out_counts = {tp, fp, fn}; out_metrics = {precision, recall, f1}. */
adc_status adc_evaluate(const adc_image* pred, const adc_image* gt, double tolerance,
                        double out_counts[3], double out_metrics[3]);

/* ---- synthetic scenes ---- */
adc_status adc_synth(const adc_config* cfg, adc_scene** out);
/* Borrowed handles owned by the scene. */
const adc_cloud* adc_scene_cloud(const adc_scene* scene);
const adc_calib* adc_scene_calib(const adc_scene* scene);
adc_status adc_scene_gt_bev(const adc_scene* scene, const adc_config* cfg,
                            adc_image** out);
/* Ground-truth polylines as JSON; free with adc_string_free. */
adc_status adc_scene_gt_json(const adc_scene* scene, char** out);
void adc_scene_free(adc_scene* scene);

#ifdef __cplusplus
}
#endif

#endif /* ADICURB_H */
