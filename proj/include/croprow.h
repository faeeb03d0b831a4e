/* C interface to the crop-row detection and evaluation library.
 *
 * Every object is an opaque handle created and destroyed by the library.
 * Calls return CRP_OK on success; on failure they return a status code and
 * leave a message retrievable with crp_last_error() (thread-local, valid
 * until the next failing call on the same thread). Strings returned through
 * char** out-parameters are NUL-terminated, owned by the caller, and must
 * be released with crp_string_free().
 */
#ifndef CROPROW_H
#define CROPROW_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum crp_status {
    CRP_OK = 0,
    CRP_ERR_INVALID_ARGUMENT = 1,
    CRP_ERR_IO = 2,
    CRP_ERR_DECODE = 3,
    CRP_ERR_PARSE = 4,
    CRP_ERR_DIMENSION_MISMATCH = 5,
    CRP_ERR_PARTIAL = 6, /* dataset evaluated, but some samples failed */
    CRP_ERR_UNKNOWN = 7
} crp_status;

const char* crp_last_error(void);
const char* crp_version(void);

typedef struct crp_image crp_image;   /* 8-bit RGB image */
typedef struct crp_mask crp_mask;     /* binary mask, white = crop row */
typedef struct crp_config crp_config; /* pipeline + baseline settings */
typedef struct crp_rows crp_rows;     /* detected rows */
typedef struct crp_report crp_report; /* dataset evaluation report */
typedef struct crp_scene crp_scene;   /* synthetic scene description */

void crp_image_free(crp_image* image);
void crp_mask_free(crp_mask* mask);
void crp_config_free(crp_config* config);
void crp_rows_free(crp_rows* rows);
void crp_report_free(crp_report* report);
void crp_scene_free(crp_scene* scene);
void crp_string_free(char* text);

/* --- configuration ----------------------------------------------------- */

/* Documented defaults; never fails. */
crp_config* crp_config_new(void);
/* Merge a flat JSON object into the config; unknown keys are rejected and
 * the config is left unchanged on error. */
crp_status crp_config_update_json(crp_config* config, const char* json_text);
crp_status crp_config_to_json(const crp_config* config, char** out_json);

/* --- images and masks --------------------------------------------------- */

/* Decodes PGM/PPM/PNG. Grayscale files are promoted to RGB for crp_image. */
crp_status crp_image_read(const char* path, crp_image** out);
/* Decodes a grayscale file and binarizes at `threshold` (bit = sample >=
 * threshold). */
crp_status crp_mask_read(const char* path, int threshold, crp_mask** out);
/* Writers pick the format from the extension: .pgm/.ppm binary PNM. */
crp_status crp_image_write(const crp_image* image, const char* path);
crp_status crp_mask_write(const crp_mask* mask, const char* path);

int crp_image_width(const crp_image* image);
int crp_image_height(const crp_image* image);
int crp_mask_width(const crp_mask* mask);
int crp_mask_height(const crp_mask* mask);
uint64_t crp_mask_white_count(const crp_mask* mask);

crp_status crp_mask_to_image(const crp_mask* mask, crp_image** out);
crp_status crp_mask_resize(const crp_mask* mask, int width, int height, crp_mask** out);
crp_status crp_image_resize(const crp_image* image, int width, int height, crp_image** out);

/* --- detection ---------------------------------------------------------- */

/* Skeleton -> Hough -> peak clustering on a binary mask. */
crp_status crp_detect_rows(const crp_mask* mask, const crp_config* config, crp_rows** out);
/* Classical detector on an RGB image: vegetation mask -> row pipeline. */
crp_status crp_baseline_detect(const crp_image* image, const crp_config* config,
                               crp_rows** out);
/* The baseline's intermediate mask. threshold_used reports the applied
 * binarize cut; otsu_degenerate is 1 when the index histogram had a single
 * level. Either out-parameter may be NULL. */
crp_status crp_vegetation_mask(const crp_image* image, const crp_config* config,
                               crp_mask** out, int* threshold_used, int* otsu_degenerate);

size_t crp_rows_count(const crp_rows* rows);
double crp_rows_angle_deg(const crp_rows* rows, size_t index);
double crp_rows_rho(const crp_rows* rows, size_t index);
int crp_rows_member_count(const crp_rows* rows, size_t index);
crp_status crp_rows_to_json(const crp_rows* rows, char** out_json);

crp_status crp_overlay(const crp_image* image, const crp_rows* rows, uint8_t r, uint8_t g,
                       uint8_t b, crp_image** out);

/* --- evaluation --------------------------------------------------------- */

/* Scores one prediction mask against its ground truth; the result JSON
 * carries segmentation scores, row counts, and the clustered angle error. */
crp_status crp_evaluate_pair_json(const crp_mask* gt, const crp_mask* pred,
                                  const crp_config* config, char** out_json);

/* Evaluates a CSV manifest (header image,gt_mask,pred_mask,category).
 * use_baseline != 0 derives predictions from the image column via the
 * classical detector instead of reading prediction masks. Returns
 * CRP_ERR_PARTIAL when some samples failed; the report is still produced
 * and lists the failures. workers <= 1 runs sequentially. */
crp_status crp_evaluate_manifest(const char* manifest_path, const crp_config* config,
                                 int workers, int use_baseline, crp_report** out);

/* format is "csv", "json" or "markdown". */
crp_status crp_report_render(const crp_report* report, const char* format, char** out);
crp_status crp_report_parse(const char* json_text, crp_report** out);
int crp_report_failure_count(const crp_report* report);

/* --- synthetic scenes --------------------------------------------------- */

crp_status crp_scene_parse(const char* json_text, crp_scene** out);
crp_status crp_scene_to_json(const crp_scene* scene, char** out_json);
/* Rows plus seeded speckle. */
crp_status crp_scene_render_mask(const crp_scene* scene, crp_mask** out);
/* Rows only (the ground-truth companion). */
crp_status crp_scene_render_gt_mask(const crp_scene* scene, crp_mask** out);
crp_status crp_scene_render_rgb(const crp_scene* scene, uint8_t crop_r, uint8_t crop_g,
                                uint8_t crop_b, uint8_t soil_r, uint8_t soil_g,
                                uint8_t soil_b, crp_image** out);

#ifdef __cplusplus
}
#endif

#endif /* CROPROW_H */
