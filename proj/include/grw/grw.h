#ifndef GRW_GRW_H
#define GRW_GRW_H

/*
 * C interface to the GRW identity checker.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_destroy function. Functions return a grw_status; on failure a
 * message is available from grw_last_error() on the calling thread until the
 * next call into the library. Strings returned through out-parameters are
 * heap-allocated and must be released with grw_string_free().
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define GRW_API __attribute__((visibility("default")))
#else
#define GRW_API
#endif

typedef enum grw_status {
  GRW_OK = 0,
  GRW_IDENTITY_FAILURE = 1, /* a check disagreed with its expectation */
  GRW_USAGE = 2,            /* bad name, parameter or argument */
  GRW_IO = 3,
  GRW_NUMERIC = 4           /* numerically degenerate input, e.g. singular metric */
} grw_status;

typedef enum grw_format { GRW_FORMAT_TEXT = 0, GRW_FORMAT_JSON = 1 } grw_format;

typedef struct grw_family grw_family;
typedef struct grw_report grw_report;

typedef struct grw_run_config {
  const char* family;
  const char* params; /* "key=value,..." or NULL */
  int points;
  uint64_t seed;
  double tol;
  double tol_fd;
} grw_run_config;

/* Library defaults; honours GRW_SEED. */
GRW_API grw_run_config grw_run_config_default(void);

GRW_API const char* grw_last_error(void);
GRW_API const char* grw_status_name(grw_status status);
GRW_API void grw_string_free(char* s);

/* Table of catalog families, one row per line, tab-separated columns. */
GRW_API grw_status grw_list_families(char** out_table);

GRW_API grw_status grw_family_create(const char* name, const char* params, grw_family** out);
GRW_API void grw_family_destroy(grw_family* family);
GRW_API int grw_family_dim(const grw_family* family);
/* Writes count * dim coordinates into out (row-major). */
GRW_API grw_status grw_family_sample_points(const grw_family* family, int count, uint64_t seed, double* out,
                                            size_t out_len);

GRW_API grw_status grw_run(const grw_run_config* config, grw_report** out);
GRW_API void grw_report_destroy(grw_report* report);

/* Classification name, owned by the report. */
GRW_API const char* grw_report_classification(const grw_report* report);
/* 1 when every check matched its expectation, else 0. */
GRW_API int grw_report_all_expected(const grw_report* report);
GRW_API size_t grw_report_check_count(const grw_report* report);
GRW_API grw_status grw_report_check(const grw_report* report, size_t index, const char** name,
                                    double* worst_residual, double* tolerance, int* pass, int* expected_pass);
GRW_API grw_status grw_report_render(const grw_report* report, grw_format format, char** out);
GRW_API grw_status grw_report_write(const grw_report* report, grw_format format, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* GRW_GRW_H */
