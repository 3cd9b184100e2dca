/**
 * Copyright 2026 The excolor Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef EXCOLOR_EXCOLOR_H
#define EXCOLOR_EXCOLOR_H

#include <stddef.h>
#include <stdint.h>

#if defined(EXCOLOR_BUILDING_LIBRARY)
#define EXCOLOR_API __attribute__((visibility("default")))
#else
#define EXCOLOR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every fallible call returns a status. On failure a description of the
 * most recent error on the calling thread is available from
 * excolor_last_error(). */
typedef enum excolor_status {
  EXCOLOR_OK = 0,
  EXCOLOR_ERR_ARGUMENT = 1,
  EXCOLOR_ERR_IO = 2,
  EXCOLOR_ERR_FORMAT = 3,
  EXCOLOR_ERR_NUMERICAL = 4,
  EXCOLOR_ERR_CONFIG = 5,
  EXCOLOR_ERR_CORRUPT_FILE = 6,
  EXCOLOR_ERR_VERSION = 7,
  EXCOLOR_ERR_OUT_OF_MEMORY = 8,
  EXCOLOR_ERR_INTERNAL = 9
} excolor_status;

EXCOLOR_API const char* excolor_last_error(void);
EXCOLOR_API const char* excolor_status_name(excolor_status status);
EXCOLOR_API const char* excolor_version(void);

/* Run configuration: sectioned key = value settings checked against a
 * fixed schema. */
typedef struct excolor_config excolor_config;

EXCOLOR_API excolor_status excolor_config_create(excolor_config** out);
EXCOLOR_API excolor_status excolor_config_load(const char* path, excolor_config** out);
EXCOLOR_API excolor_status excolor_config_parse(const char* text, excolor_config** out);
/* key is "section.name". */
EXCOLOR_API excolor_status excolor_config_set(excolor_config* cfg, const char* key,
                                              const char* value);
/* String outputs: writes at most capacity bytes including the terminator and
 * stores the full required size (terminator included) in *needed when
 * needed is non-null. A short buffer yields EXCOLOR_ERR_ARGUMENT. */
EXCOLOR_API excolor_status excolor_config_get(const excolor_config* cfg, const char* key,
                                              char* buffer, size_t capacity, size_t* needed);
EXCOLOR_API excolor_status excolor_config_to_text(const excolor_config* cfg, char* buffer,
                                                  size_t capacity, size_t* needed);
EXCOLOR_API excolor_status excolor_config_validate(const excolor_config* cfg);
EXCOLOR_API void excolor_config_destroy(excolor_config* cfg);

/* RGB image, interleaved floats in [0,1]. */
typedef struct excolor_image excolor_image;

EXCOLOR_API excolor_status excolor_image_create(int height, int width, excolor_image** out);
EXCOLOR_API excolor_status excolor_image_load(const char* path, excolor_image** out);
EXCOLOR_API excolor_status excolor_image_save(const excolor_image* img, const char* path);
EXCOLOR_API excolor_status excolor_image_size(const excolor_image* img, int* height, int* width);
/* height * width * 3 floats owned by the image. */
EXCOLOR_API excolor_status excolor_image_data(excolor_image* img, float** data);
EXCOLOR_API excolor_status excolor_image_resize(const excolor_image* img, int height, int width,
                                                excolor_image** out);
EXCOLOR_API void excolor_image_destroy(excolor_image* img);

/* Self-reference augmentation of one image with the [augment] settings of
 * cfg and the given seed. */
EXCOLOR_API excolor_status excolor_augment(const excolor_image* in, const excolor_config* cfg,
                                           uint64_t seed, excolor_image** out);

typedef struct excolor_step_metrics {
  uint64_t step;
  double loss_total;
  double loss_rec;
  double loss_perc;
  double wall_ms;
} excolor_step_metrics;

typedef void (*excolor_progress_fn)(const excolor_step_metrics* metrics, void* user);

/* Trains on every .ppm/.pgm file in data_dir. checkpoint_path receives the
 * final state and any intermediate checkpoints; metrics_path (may be null)
 * receives the per-step CSV. */
EXCOLOR_API excolor_status excolor_train(const excolor_config* cfg, const char* data_dir,
                                         const char* checkpoint_path, const char* metrics_path,
                                         excolor_progress_fn progress, void* user);

typedef struct excolor_model excolor_model;

/* Freshly initialised model from the [model] settings. */
EXCOLOR_API excolor_status excolor_model_init(const excolor_config* cfg, excolor_model** out);
EXCOLOR_API excolor_status excolor_model_load(const char* checkpoint_path, excolor_model** out);
EXCOLOR_API excolor_status excolor_model_save(const excolor_model* model,
                                              const char* checkpoint_path);
EXCOLOR_API excolor_status excolor_model_input_size(const excolor_model* model, int* size);
EXCOLOR_API excolor_status excolor_model_embedding_dim(const excolor_model* model, int* dim);
EXCOLOR_API void excolor_model_destroy(excolor_model* model);

/* Colour embedding of a reference image (resized to the model input);
 * writes embedding_dim floats. */
EXCOLOR_API excolor_status excolor_embed(const excolor_model* model, const excolor_image* reference,
                                         float* out, size_t capacity);

/* The luminance of target is combined with chrominance predicted from
 * reference. Both inputs are resized to the model input size, which is also
 * the size of the result. */
EXCOLOR_API excolor_status excolor_colorize(const excolor_model* model, const excolor_image* target,
                                            const excolor_image* reference, excolor_image** out);

typedef void (*excolor_line_fn)(const char* line, int passed, void* user);

/* Runs the invariant suite, reporting one line per check. *failures
 * receives the number of failed checks. */
EXCOLOR_API excolor_status excolor_verify(int inject_fault, excolor_line_fn on_check, void* user,
                                          int* failures);

/* Median of `repeats` colorize calls at each size. medians_ms (count
 * entries, may be null) is filled with the medians, or -1 for sizes that
 * could not run. report, if non-null, receives the formatted table line by
 * line. */
EXCOLOR_API excolor_status excolor_bench(const excolor_model* model, const int* sizes, size_t count,
                                         int repeats, double* medians_ms, excolor_line_fn report,
                                         void* user);

/* Writes count synthetic size x size colour images into dir. */
EXCOLOR_API excolor_status excolor_synth(const char* dir, int count, int size, uint64_t seed);

#ifdef __cplusplus
}
#endif

#endif /* EXCOLOR_EXCOLOR_H */
