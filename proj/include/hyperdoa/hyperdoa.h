/*
 * hyperdoa: direction-of-arrival estimation with hyperdimensional computing.
 *
 * C interface. All objects are opaque handles created by a *_create, *_load,
 * *_generate or *_train call and released with the matching *_free. Every
 * fallible call returns an hdoa_status; on failure a human-readable message
 * is available from hdoa_last_error() on the same thread.
 *
 * Snapshot matrices cross the boundary as row-major N x T arrays of
 * interleaved (re, im) doubles, i.e. 2*N*T values.
 */
#ifndef HYPERDOA_H
#define HYPERDOA_H

#include <stddef.h>
#include <stdint.h>

#if defined(HYPERDOA_BUILDING_LIBRARY)
#define HDOA_API __attribute__((visibility("default")))
#else
#define HDOA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hdoa_status {
  HDOA_OK = 0,
  HDOA_ERR_CONFIG = 1,    /* invalid parameters or configuration keys */
  HDOA_ERR_DATA = 2,      /* bad labels, malformed/truncated/version-mismatched files, I/O */
  HDOA_ERR_NUMERICAL = 3, /* degenerate input, infeasible peak decoding */
  HDOA_ERR_STATE = 4,     /* object not in a state that allows the call */
  HDOA_ERR_SHAPE = 5,     /* dimension mismatch */
  HDOA_ERR_ARGUMENT = 6,  /* null handle/pointer or buffer too small */
  HDOA_ERR_INTERNAL = 7
} hdoa_status;

typedef enum hdoa_split { HDOA_SPLIT_TRAIN = 0, HDOA_SPLIT_TEST = 1 } hdoa_split;

typedef struct hdoa_config hdoa_config;
typedef struct hdoa_dataset hdoa_dataset;
typedef struct hdoa_model hdoa_model;
typedef struct hdoa_report hdoa_report;

/* Per-inference wall-clock breakdown (microseconds) and the number of
 * eigendecompositions executed during the call. */
typedef struct hdoa_inference_trace {
  double features_us;
  double encode_us;
  double query_us;
  double decode_us;
  uint64_t eig_calls;
} hdoa_inference_trace;

/* One report row; method points into the report and lives as long as it. */
typedef struct hdoa_report_row {
  const char* method;
  double snr_db;
  double mspe_db; /* NaN when no sample was scored */
  size_t n_scored;
  size_t n_failed;
  double mean_inference_us; /* 0 for reports loaded from disk */
} hdoa_report_row;

HDOA_API const char* hdoa_version(void);
HDOA_API const char* hdoa_last_error(void);
HDOA_API const char* hdoa_status_string(hdoa_status status);

/* ---- configuration ---------------------------------------------------- */

HDOA_API hdoa_status hdoa_config_create_default(hdoa_config** out);
HDOA_API hdoa_status hdoa_config_load(const char* path, hdoa_config** out);
HDOA_API hdoa_status hdoa_config_parse(const char* json_text, hdoa_config** out);
/* "key=value"; value parsed as JSON when possible, else taken as a string. */
HDOA_API hdoa_status hdoa_config_set(hdoa_config* cfg, const char* assignment);
/* Resolved configuration as JSON. Writes at most cap bytes including the
 * terminator; *needed receives the full size including the terminator. */
HDOA_API hdoa_status hdoa_config_to_json(const hdoa_config* cfg, char* buf, size_t cap, size_t* needed);
/* Number of experiments described (entries of "sweep", or 1). */
HDOA_API hdoa_status hdoa_config_sweep_size(const hdoa_config* cfg, size_t* n);
HDOA_API void hdoa_config_free(hdoa_config* cfg);

/* ---- datasets --------------------------------------------------------- */

HDOA_API hdoa_status hdoa_dataset_generate(const hdoa_config* cfg, hdoa_split split, hdoa_dataset** out);
HDOA_API hdoa_status hdoa_dataset_load(const char* path, hdoa_dataset** out);
HDOA_API hdoa_status hdoa_dataset_save(const hdoa_dataset* ds, const char* path);
HDOA_API hdoa_status hdoa_dataset_info(const hdoa_dataset* ds, size_t* n_samples, size_t* n_antennas,
                                       size_t* n_snapshots, size_t* m_sources);
/* doas_out needs m_sources entries; x_out needs 2*N*T doubles (may be NULL). */
HDOA_API hdoa_status hdoa_dataset_sample(const hdoa_dataset* ds, size_t index, double* doas_out, double* snr_db,
                                         double* x_out);
HDOA_API void hdoa_dataset_free(hdoa_dataset* ds);

/* ---- HDC model -------------------------------------------------------- */

HDOA_API hdoa_status hdoa_model_train(const hdoa_config* cfg, const hdoa_dataset* train, hdoa_model** out);
HDOA_API hdoa_status hdoa_model_load(const char* path, hdoa_model** out);
HDOA_API hdoa_status hdoa_model_save(const hdoa_model* model, const char* path);
HDOA_API hdoa_status hdoa_model_grid(const hdoa_model* model, double* min_deg, double* resolution_deg,
                                     size_t* size);
/* scores_out needs the grid size. */
HDOA_API hdoa_status hdoa_model_spectrum(const hdoa_model* model, const double* x, size_t n_antennas,
                                         size_t n_snapshots, double* scores_out);
/* angles_out needs n_sources entries; trace may be NULL. */
HDOA_API hdoa_status hdoa_model_estimate(const hdoa_model* model, const double* x, size_t n_antennas,
                                         size_t n_snapshots, size_t n_sources, double min_separation_deg,
                                         double* angles_out, hdoa_inference_trace* trace);
/* Configuration the model was trained with, as JSON; same buffer contract as
 * hdoa_config_to_json. */
HDOA_API hdoa_status hdoa_model_config_json(const hdoa_model* model, char* buf, size_t cap, size_t* needed);
HDOA_API void hdoa_model_free(hdoa_model* model);

/* Classical MUSIC on the sample covariance, over the config's grid and decoder. */
HDOA_API hdoa_status hdoa_music_estimate(const hdoa_config* cfg, const double* x, size_t n_antennas,
                                         size_t n_snapshots, double* angles_out, hdoa_inference_trace* trace);

/* ---- evaluation ------------------------------------------------------- */

/* method: "hdc_lag", "hdc_ss", "music" or "music_ss". model may be NULL for
 * the MUSIC methods. NULL method means the model's own feature method. */
HDOA_API hdoa_status hdoa_evaluate(const hdoa_config* cfg, const hdoa_model* model, const hdoa_dataset* test,
                                   const char* method, hdoa_report** out);
/* Full generate/train/score run for every experiment in the config. */
HDOA_API hdoa_status hdoa_run_sweep(const hdoa_config* cfg, hdoa_report** out);
HDOA_API hdoa_status hdoa_report_save(const hdoa_report* report, const char* path);
HDOA_API hdoa_status hdoa_report_load(const char* path, hdoa_report** out);
HDOA_API hdoa_status hdoa_report_size(const hdoa_report* report, size_t* n_rows);
HDOA_API hdoa_status hdoa_report_row_at(const hdoa_report* report, size_t index, hdoa_report_row* row);
HDOA_API void hdoa_report_free(hdoa_report* report);

/* Periodic squared error (rad^2, period 180 deg, best assignment). */
HDOA_API hdoa_status hdoa_periodic_sq_error(const double* est_deg, const double* true_deg, size_t m, double* out);

#ifdef __cplusplus
}
#endif

#endif /* HYPERDOA_H */
