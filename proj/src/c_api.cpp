#include "gaitrec/gaitrec.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "gaitrec/classifier.hpp"
#include "gaitrec/error.hpp"
#include "gaitrec/evaluation.hpp"
#include "gaitrec/parallel.hpp"
#include "gaitrec/pipeline.hpp"
#include "gaitrec/report.hpp"

struct gr_skeleton {
  std::shared_ptr<const gaitrec::Skeleton> skeleton;
};

struct gr_database {
  std::shared_ptr<const gaitrec::Skeleton> skeleton;
  gaitrec::GaitDatabase db;
  std::vector<gaitrec::GaitSample> samples;
};

struct gr_classifier {
  gaitrec::Classifier classifier;
};

struct gr_ranking {
  std::vector<gaitrec::RankedIdentity> ranked;
};

namespace {

thread_local std::string last_error;

gr_status to_status(gaitrec::ErrorCode code) {
  using gaitrec::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return GR_INVALID_ARGUMENT;
    case ErrorCode::Io: return GR_IO;
    case ErrorCode::MalformedAsf: return GR_MALFORMED_ASF;
    case ErrorCode::MalformedAmc: return GR_MALFORMED_AMC;
    case ErrorCode::MalformedFile: return GR_MALFORMED_FILE;
    case ErrorCode::HeterogeneousTopology: return GR_HETEROGENEOUS_TOPOLOGY;
    case ErrorCode::UnboundMotion: return GR_UNBOUND_MOTION;
    case ErrorCode::DimensionMismatch: return GR_DIMENSION_MISMATCH;
    case ErrorCode::EmptySequence: return GR_EMPTY_SEQUENCE;
    case ErrorCode::RepresentationMismatch: return GR_REPRESENTATION_MISMATCH;
    case ErrorCode::DegenerateSample: return GR_DEGENERATE_SAMPLE;
    case ErrorCode::LayoutMismatch: return GR_LAYOUT_MISMATCH;
    case ErrorCode::TooFewClasses: return GR_TOO_FEW_CLASSES;
    case ErrorCode::DegenerateScatter: return GR_DEGENERATE_SCATTER;
    case ErrorCode::SingularWithinScatter: return GR_SINGULAR_WITHIN_SCATTER;
    case ErrorCode::InsufficientClasses: return GR_INSUFFICIENT_CLASSES;
    case ErrorCode::EmptyGallery: return GR_EMPTY_GALLERY;
    case ErrorCode::UnknownMethod: return GR_UNKNOWN_METHOD;
  }
  return GR_INTERNAL;
}

gr_status failure(gr_status s, std::string msg) {
  last_error = std::move(msg);
  return s;
}

// Runs `body`, translating exceptions into status codes.
template <class Body>
gr_status guarded(Body&& body) {
  try {
    last_error.clear();
    body();
    return GR_OK;
  } catch (const gaitrec::Error& e) {
    return failure(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return failure(GR_INTERNAL, "out of memory");
  } catch (const std::filesystem::filesystem_error& e) {
    return failure(GR_IO, e.what());
  } catch (const std::exception& e) {
    return failure(GR_INTERNAL, e.what());
  } catch (...) {
    return failure(GR_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) gaitrec::fail(gaitrec::ErrorCode::InvalidArgument, what);
}

}  // namespace

extern "C" {

const char* gr_version(void) { return "1.0.0"; }

const char* gr_status_string(gr_status status) {
  switch (status) {
    case GR_OK: return "ok";
    case GR_INTERNAL: return "internal error";
    default: break;
  }
  if (status > GR_OK && status < GR_INTERNAL)
    return gaitrec::to_string(static_cast<gaitrec::ErrorCode>(static_cast<int>(status) - 1));
  return "unknown status";
}

const char* gr_last_error(void) { return last_error.c_str(); }

size_t gr_method_count(void) { return gaitrec::method_registry().size(); }

const char* gr_method_id(size_t index) {
  auto reg = gaitrec::method_registry();
  return index < reg.size() ? reg[index].id.c_str() : nullptr;
}

const char* gr_method_name(size_t index) {
  auto reg = gaitrec::method_registry();
  return index < reg.size() ? reg[index].display_name.c_str() : nullptr;
}

gr_status gr_skeleton_load(const char* path, gr_skeleton** out) {
  return guarded([&] {
    require(path && out, "gr_skeleton_load: null argument");
    *out = nullptr;
    auto s = gaitrec::load_skeletons(path);
    *out = new gr_skeleton{std::move(s)};
  });
}

size_t gr_skeleton_joint_count(const gr_skeleton* skeleton) {
  return skeleton ? skeleton->skeleton->joint_count() : 0;
}

void gr_skeleton_free(gr_skeleton* skeleton) { delete skeleton; }

gr_status gr_extract_database(const gr_skeleton* skeleton, const char* exemplar_amc, const char* input_dir,
                              const char* output_dir, double threshold, gr_extract_summary* summary) {
  return guarded([&] {
    require(skeleton && exemplar_amc && input_dir && output_dir, "gr_extract_database: null argument");
    const auto s = gaitrec::extract_database(*skeleton->skeleton, exemplar_amc, input_dir, output_dir, threshold);
    if (summary) *summary = {s.inputs, s.subjects, s.samples};
  });
}

gr_status gr_database_load(const char* dir, const gr_skeleton* skeleton, gr_database** out) {
  return guarded([&] {
    require(dir && out, "gr_database_load: null argument");
    *out = nullptr;
    auto h = std::make_unique<gr_database>();
    h->skeleton = skeleton ? skeleton->skeleton : gaitrec::load_skeletons(std::filesystem::path(dir) / "skeleton.asf");
    h->db = gaitrec::load_database(dir, *h->skeleton);
    h->samples = gaitrec::database_samples(h->db, h->skeleton);
    *out = h.release();
  });
}

size_t gr_database_subjects(const gr_database* db) { return db ? db->db.subjects.size() : 0; }
size_t gr_database_samples(const gr_database* db) { return db ? db->db.samples.size() : 0; }
double gr_database_threshold(const gr_database* db) { return db ? db->db.threshold : 0.0; }
void gr_database_free(gr_database* db) { delete db; }

gr_status gr_learn_classifier(const gr_database* db, const char* method_id, gr_classifier** out) {
  return guarded([&] {
    require(db && method_id && out, "gr_learn_classifier: null argument");
    *out = nullptr;
    auto c = gaitrec::learn_classifier(method_id, db->samples, db->skeleton);
    *out = new gr_classifier{std::move(c)};
  });
}

gr_status gr_classifier_save(const gr_classifier* classifier, const char* path) {
  return guarded([&] {
    require(classifier && path, "gr_classifier_save: null argument");
    gaitrec::save_classifier(classifier->classifier, path);
  });
}

gr_status gr_classifier_load(const char* path, gr_classifier** out) {
  return guarded([&] {
    require(path && out, "gr_classifier_load: null argument");
    *out = nullptr;
    auto c = gaitrec::load_classifier(path);
    *out = new gr_classifier{std::move(c)};
  });
}

const char* gr_classifier_method(const gr_classifier* classifier) {
  return classifier ? classifier->classifier.model.id().c_str() : nullptr;
}

size_t gr_classifier_gallery_size(const gr_classifier* classifier) {
  return classifier ? classifier->classifier.gallery.size() : 0;
}

size_t gr_classifier_feature_dimension(const gr_classifier* classifier) {
  if (!classifier || !classifier->classifier.model.learned()) return 0;
  return classifier->classifier.model.learned()->transform.output_dimension();
}

void gr_classifier_free(gr_classifier* classifier) { delete classifier; }

gr_status gr_classify(const gr_classifier* classifier, const char* probe_amc, const char* gallery_dir, uint64_t seed,
                      gr_ranking** out) {
  return guarded([&] {
    require(classifier && probe_amc && out, "gr_classify: null argument");
    *out = nullptr;
    const auto& c = classifier->classifier;
    if (!c.skeleton) gaitrec::fail(gaitrec::ErrorCode::MalformedFile, "classifier has no embedded skeleton");
    const auto probe = gaitrec::load_sample(probe_amc, c.skeleton);
    const gaitrec::Template probe_t = c.model.extract(probe);
    auto h = std::make_unique<gr_ranking>();
    if (gallery_dir) {
      const auto files = gaitrec::list_amc_files(gallery_dir);
      gaitrec::Classifier custom{c.model, c.skeleton, std::vector<gaitrec::Template>(files.size())};
      gaitrec::parallel_for(files.size(), [&](std::size_t i) {
        custom.gallery[i] = c.model.extract(gaitrec::load_sample(files[i], c.skeleton));
      });
      h->ranked = gaitrec::rank_identities(custom, probe_t, seed);
    } else {
      h->ranked = gaitrec::rank_identities(c, probe_t, seed);
    }
    *out = h.release();
  });
}

size_t gr_ranking_size(const gr_ranking* ranking) { return ranking ? ranking->ranked.size() : 0; }

const char* gr_ranking_label(const gr_ranking* ranking, size_t index) {
  return ranking && index < ranking->ranked.size() ? ranking->ranked[index].label.c_str() : nullptr;
}

double gr_ranking_distance(const gr_ranking* ranking, size_t index) {
  return ranking && index < ranking->ranked.size() ? ranking->ranked[index].distance
                                                   : std::numeric_limits<double>::quiet_NaN();
}

void gr_ranking_free(gr_ranking* ranking) { delete ranking; }

gr_status gr_evaluate(const gr_database* db, const gr_eval_config* config, char** report, char** metadata,
                      void (*progress)(const char* method_id, void* user), void* user) {
  return guarded([&] {
    require(db && config && config->setup && report, "gr_evaluate: null argument");
    *report = nullptr;
    if (metadata) *metadata = nullptr;
    gaitrec::SetupConfig cfg = gaitrec::SetupConfig::parse(config->setup);
    cfg.repetitions = config->repetitions ? config->repetitions : 3;
    cfg.seed = config->seed;
    std::vector<std::string> ids;
    if (config->methods) {
      for (size_t i = 0; i < config->method_count; ++i) {
        require(config->methods[i] != nullptr, "gr_evaluate: null method id");
        ids.emplace_back(config->methods[i]);
      }
    } else {
      for (const auto& m : gaitrec::method_registry()) ids.push_back(m.id);
    }
    gaitrec::EvaluationOptions opts;
    opts.threshold = std::isnan(config->threshold) ? db->db.threshold : config->threshold;
    if (progress) opts.progress = [&](std::string_view id) { progress(std::string(id).c_str(), user); };
    const auto reports = gaitrec::evaluate_methods(ids, db->samples, cfg, opts);
    char* csv = copy_string(gaitrec::write_report(reports));
    if (metadata) {
      try {
        *metadata = copy_string(gaitrec::report_metadata_json(reports, cfg, opts.threshold, opts.method));
      } catch (...) {
        std::free(csv);
        throw;
      }
    }
    *report = csv;
  });
}

void gr_string_free(char* s) { std::free(s); }

}  // extern "C"
