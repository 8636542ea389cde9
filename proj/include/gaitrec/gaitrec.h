#ifndef GAITREC_H
#define GAITREC_H

/* C interface to the gait recognition library. Objects are opaque handles
 * released with their *_free function. Every call returning gr_status
 * leaves a message for gr_last_error() on failure; strings handed out by
 * the library are owned by the handle they came from unless noted. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GAITREC_BUILDING_LIBRARY)
#    define GR_API __declspec(dllexport)
#  else
#    define GR_API __declspec(dllimport)
#  endif
#else
#  define GR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gr_status {
  GR_OK = 0,
  GR_INVALID_ARGUMENT,
  GR_IO,
  GR_MALFORMED_ASF,
  GR_MALFORMED_AMC,
  GR_MALFORMED_FILE,
  GR_HETEROGENEOUS_TOPOLOGY,
  GR_UNBOUND_MOTION,
  GR_DIMENSION_MISMATCH,
  GR_EMPTY_SEQUENCE,
  GR_REPRESENTATION_MISMATCH,
  GR_DEGENERATE_SAMPLE,
  GR_LAYOUT_MISMATCH,
  GR_TOO_FEW_CLASSES,
  GR_DEGENERATE_SCATTER,
  GR_SINGULAR_WITHIN_SCATTER,
  GR_INSUFFICIENT_CLASSES,
  GR_EMPTY_GALLERY,
  GR_UNKNOWN_METHOD,
  GR_INTERNAL
} gr_status;

typedef struct gr_skeleton gr_skeleton;
typedef struct gr_database gr_database;
typedef struct gr_classifier gr_classifier;
typedef struct gr_ranking gr_ranking;

GR_API const char* gr_version(void);
GR_API const char* gr_status_string(gr_status status);
/* Message of the last failed call on this thread; "" if none. */
GR_API const char* gr_last_error(void);

/* Method registry, in report order. */
GR_API size_t gr_method_count(void);
GR_API const char* gr_method_id(size_t index);
GR_API const char* gr_method_name(size_t index);

/* An ASF file, or a directory of ASF files averaged into one skeleton. */
GR_API gr_status gr_skeleton_load(const char* path, gr_skeleton** out);
GR_API size_t gr_skeleton_joint_count(const gr_skeleton* skeleton);
GR_API void gr_skeleton_free(gr_skeleton* skeleton);

typedef struct gr_extract_summary {
  size_t inputs;
  size_t subjects;
  size_t samples;
} gr_extract_summary;

/* Normalizes the AMC files of input_dir, extracts gait cycles within
 * `threshold` DTW distance of the exemplar and writes the database
 * (samples, manifest.csv, skeleton.asf, extraction.json, normalized/). */
GR_API gr_status gr_extract_database(const gr_skeleton* skeleton, const char* exemplar_amc, const char* input_dir,
                                     const char* output_dir, double threshold, gr_extract_summary* summary);

/* Loads an extracted database; with skeleton NULL, <dir>/skeleton.asf is used. */
GR_API gr_status gr_database_load(const char* dir, const gr_skeleton* skeleton, gr_database** out);
GR_API size_t gr_database_subjects(const gr_database* db);
GR_API size_t gr_database_samples(const gr_database* db);
GR_API double gr_database_threshold(const gr_database* db);
GR_API void gr_database_free(gr_database* db);

/* Fits a method on every sample of the database; the samples become the gallery. */
GR_API gr_status gr_learn_classifier(const gr_database* db, const char* method_id, gr_classifier** out);
GR_API gr_status gr_classifier_save(const gr_classifier* classifier, const char* path);
GR_API gr_status gr_classifier_load(const char* path, gr_classifier** out);
GR_API const char* gr_classifier_method(const gr_classifier* classifier);
GR_API size_t gr_classifier_gallery_size(const gr_classifier* classifier);
/* Output dimension of the learned transform; 0 for methods without one. */
GR_API size_t gr_classifier_feature_dimension(const gr_classifier* classifier);
GR_API void gr_classifier_free(gr_classifier* classifier);

/* Ranks gallery identities for a probe AMC. gallery_dir NULL uses the stored
 * gallery; otherwise its AMC files, labelled by file-name prefix, replace it.
 * `seed` only matters for the random baseline. */
GR_API gr_status gr_classify(const gr_classifier* classifier, const char* probe_amc, const char* gallery_dir,
                             uint64_t seed, gr_ranking** out);
GR_API size_t gr_ranking_size(const gr_ranking* ranking);
GR_API const char* gr_ranking_label(const gr_ranking* ranking, size_t index);
/* NaN for the random baseline. */
GR_API double gr_ranking_distance(const gr_ranking* ranking, size_t index);
GR_API void gr_ranking_free(gr_ranking* ranking);

typedef struct gr_eval_config {
  const char* setup;           /* "homogeneous:<C>" or "heterogeneous:<CL>,<CE>" */
  size_t repetitions;          /* 0 means 3 */
  uint64_t seed;
  const char* const* methods;  /* NULL means every method */
  size_t method_count;
  double threshold;            /* printed in block headers; NaN uses the database's */
} gr_eval_config;

/* Runs the evaluation. *report receives the CSV text and, if metadata is not
 * NULL, *metadata the JSON sidecar; release both with gr_string_free.
 * progress, if not NULL, is called with each method id before it starts. */
GR_API gr_status gr_evaluate(const gr_database* db, const gr_eval_config* config, char** report, char** metadata,
                             void (*progress)(const char* method_id, void* user), void* user);
GR_API void gr_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* GAITREC_H */
