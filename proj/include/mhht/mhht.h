/*
 * mhht: multivariate Hilbert-Huang toolkit, C interface.
 *
 * Every function returns an mhht_status. On failure the message of the most
 * recent error on the calling thread is available from mhht_last_error().
 * Objects are opaque handles released with their matching *_free function.
 * Strings returned through char** are owned by the caller and released with
 * mhht_string_free(). Output pointers are set to NULL on entry, so they stay
 * NULL when a call fails.
 */
#ifndef MHHT_MHHT_H
#define MHHT_MHHT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MHHT_BUILDING_LIBRARY)
#    define MHHT_API __declspec(dllexport)
#  else
#    define MHHT_API __declspec(dllimport)
#  endif
#else
#  define MHHT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mhht_status {
  MHHT_OK = 0,
  MHHT_ERR_VALIDATION = 1, /* bad input, config, or precondition */
  MHHT_ERR_IO = 2,         /* file system or serialization */
  MHHT_ERR_VERIFY = 3,     /* a verification check failed */
  MHHT_ERR_INTERNAL = 4
} mhht_status;

typedef struct mhht_config mhht_config;
typedef struct mhht_signal mhht_signal;
typedef struct mhht_imfset mhht_imfset;

MHHT_API const char* mhht_version(void);
MHHT_API const char* mhht_last_error(void);
MHHT_API void mhht_string_free(char* s);

/* Configuration. Keys are dotted paths into the JSON config document
 * ("memd.max_imfs"); values are JSON literals ("11", "true", "\"trial\""). */
MHHT_API mhht_status mhht_config_create(mhht_config** out);
MHHT_API mhht_status mhht_config_load(const char* path, mhht_config** out);
MHHT_API mhht_status mhht_config_set(mhht_config* cfg, const char* key, const char* json_value);
MHHT_API mhht_status mhht_config_to_json(const mhht_config* cfg, char** out_json);
MHHT_API void mhht_config_free(mhht_config* cfg);

/* Signals. data is channel-major: data[c * samples + t]. labels may be NULL
 * for default names. */
MHHT_API mhht_status mhht_signal_create(size_t channels, size_t samples, double rate_hz,
                                        const double* data, const char* const* labels,
                                        mhht_signal** out);
MHHT_API mhht_status mhht_signal_load(const char* path, double csv_rate_hz, mhht_signal** out);
MHHT_API mhht_status mhht_signal_save(const mhht_signal* signal, const char* path);
MHHT_API size_t mhht_signal_channels(const mhht_signal* signal);
MHHT_API size_t mhht_signal_samples(const mhht_signal* signal);
MHHT_API double mhht_signal_rate(const mhht_signal* signal);
MHHT_API mhht_status mhht_signal_copy_data(const mhht_signal* signal, double* out, size_t count);
MHHT_API void mhht_signal_free(mhht_signal* signal);

/* Decomposition with the config's memd section and seed. */
MHHT_API mhht_status mhht_decompose(const mhht_signal* signal, const mhht_config* cfg,
                                    mhht_imfset** out);
MHHT_API size_t mhht_imfset_count(const mhht_imfset* set);
MHHT_API size_t mhht_imfset_channels(const mhht_imfset* set);
MHHT_API size_t mhht_imfset_samples(const mhht_imfset* set);
/* index < count copies an IMF; index == count copies the residue. */
MHHT_API mhht_status mhht_imfset_copy(const mhht_imfset* set, size_t index, double* out,
                                      size_t count);
MHHT_API void mhht_imfset_free(mhht_imfset* set);

/* Command-level entry points. Reports are JSON documents when json != 0,
 * human-readable tables otherwise. */
MHHT_API mhht_status mhht_run_decompose(const char* input, const mhht_config* cfg,
                                        const char* output_dir, char** report);
MHHT_API mhht_status mhht_run_spectrum(const char* input, const mhht_config* cfg,
                                       const char* output_dir, char** report);
MHHT_API mhht_status mhht_run_features(const char* input, const mhht_config* cfg,
                                       const char* output_dir, unsigned jobs, char** report);
MHHT_API mhht_status mhht_run_synth(const mhht_config* cfg, const char* output_path, int json,
                                    char** report);
/* Returns MHHT_ERR_VERIFY (with the report still filled in) when any check
 * fails. */
MHHT_API mhht_status mhht_run_verify(const mhht_config* cfg, int json, char** report);

#ifdef __cplusplus
}
#endif

#endif /* MHHT_MHHT_H */
