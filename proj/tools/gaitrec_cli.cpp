// gaitrec: extract gait-cycle databases, learn classifiers, classify probes
// and evaluate recognition methods. Talks to the library only through the C API.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "gaitrec/gaitrec.h"

namespace fs = std::filesystem;

namespace {

struct Config {
  double threshold = std::numeric_limits<double>::quiet_NaN();
  std::string skeleton, exemplar, input_dir, db_dir, classifier, probe, gallery, output;
  std::string methods = "all";
  std::string setup;
  std::size_t repetitions = 3;
  std::uint64_t seed = 0;
};

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Skeleton = std::unique_ptr<gr_skeleton, Deleter<gr_skeleton, gr_skeleton_free>>;
using Database = std::unique_ptr<gr_database, Deleter<gr_database, gr_database_free>>;
using Classifier = std::unique_ptr<gr_classifier, Deleter<gr_classifier, gr_classifier_free>>;
using Ranking = std::unique_ptr<gr_ranking, Deleter<gr_ranking, gr_ranking_free>>;
using CString = std::unique_ptr<char, Deleter<char, gr_string_free>>;

// Thrown to leave a subcommand with a diagnostic already composed.
struct Failure {
  std::string message;
};

void check(gr_status s, const std::string& context) {
  if (s != GR_OK) throw Failure{context + ": " + gr_status_string(s) + ": " + gr_last_error()};
}

std::vector<std::string> method_list(const std::string& spec) {
  std::vector<std::string> ids;
  if (spec.empty() || spec == "all") {
    for (std::size_t i = 0; i < gr_method_count(); ++i) ids.emplace_back(gr_method_id(i));
    return ids;
  }
  std::size_t start = 0;
  while (start <= spec.size()) {
    const auto comma = spec.find(',', start);
    std::string id = spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!id.empty()) ids.push_back(id);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  for (const auto& id : ids) {
    bool known = false;
    for (std::size_t i = 0; i < gr_method_count(); ++i) known = known || id == gr_method_id(i);
    if (!known) throw Failure{"unknown method '" + id + "'"};
  }
  return ids;
}

Skeleton load_skeleton(const std::string& path) {
  gr_skeleton* s = nullptr;
  check(gr_skeleton_load(path.c_str(), &s), "skeleton " + path);
  return Skeleton(s);
}

Database load_database(const Config& cfg) {
  Skeleton skel;
  if (!cfg.skeleton.empty()) skel = load_skeleton(cfg.skeleton);
  gr_database* db = nullptr;
  check(gr_database_load(cfg.db_dir.c_str(), skel.get(), &db), "database " + cfg.db_dir);
  return Database(db);
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
  if (!out) throw Failure{"cannot write " + path};
}

int cmd_extract(const Config& cfg) {
  if (!(cfg.threshold >= 0)) throw Failure{"--distance-threshold must be a non-negative number"};
  const Skeleton skel = load_skeleton(cfg.skeleton);
  gr_extract_summary summary{};
  check(gr_extract_database(skel.get(), cfg.exemplar.c_str(), cfg.input_dir.c_str(), cfg.output.c_str(),
                            cfg.threshold, &summary),
        "extract");
  if (summary.inputs == 0) std::cerr << "warning: no AMC files in " << cfg.input_dir << "\n";
  std::cout << "inputs " << summary.inputs << "\nsubjects " << summary.subjects << "\nsamples " << summary.samples
            << "\n";
  return 0;
}

int cmd_learn(const Config& cfg) {
  const auto ids = method_list(cfg.methods);
  const Database db = load_database(cfg);
  const fs::path dir = cfg.output.empty() ? fs::path("classifiers") : fs::path(cfg.output);
  fs::create_directories(dir);
  for (const auto& id : ids) {
    gr_classifier* c = nullptr;
    check(gr_learn_classifier(db.get(), id.c_str(), &c), "learn " + id);
    const Classifier owned(c);
    const std::string path = (dir / (id + ".classifier")).string();
    check(gr_classifier_save(owned.get(), path.c_str()), "save " + path);
    std::cout << id << " " << path << "\n";
  }
  return 0;
}

int cmd_classify(const Config& cfg) {
  gr_classifier* c = nullptr;
  check(gr_classifier_load(cfg.classifier.c_str(), &c), "classifier " + cfg.classifier);
  const Classifier owned(c);
  gr_ranking* r = nullptr;
  check(gr_classify(owned.get(), cfg.probe.c_str(), cfg.gallery.empty() ? nullptr : cfg.gallery.c_str(), cfg.seed, &r),
        "classify " + cfg.probe);
  const Ranking ranking(r);
  std::cout << "rank,identity,distance\n";
  for (std::size_t i = 0; i < gr_ranking_size(ranking.get()); ++i) {
    const double d = gr_ranking_distance(ranking.get(), i);
    char buf[64] = "";
    if (!std::isnan(d)) std::snprintf(buf, sizeof buf, "%.6g", d);
    std::cout << (i + 1) << ',' << gr_ranking_label(ranking.get(), i) << ',' << buf << "\n";
  }
  return 0;
}

int cmd_evaluate(const Config& cfg) {
  const auto ids = method_list(cfg.methods);
  const Database db = load_database(cfg);
  std::vector<const char*> id_ptrs;
  for (const auto& id : ids) id_ptrs.push_back(id.c_str());
  gr_eval_config ec{};
  ec.setup = cfg.setup.c_str();
  ec.repetitions = cfg.repetitions;
  ec.seed = cfg.seed;
  ec.methods = id_ptrs.data();
  ec.method_count = id_ptrs.size();
  ec.threshold = cfg.threshold;
  char* report = nullptr;
  char* meta = nullptr;
  auto progress = [](const char* id, void*) { std::cerr << "evaluating " << id << "\n"; };
  check(gr_evaluate(db.get(), &ec, &report, &meta, progress, nullptr), "evaluate");
  const CString report_owned(report), meta_owned(meta);
  if (cfg.output.empty()) {
    std::cout << report;
  } else {
    write_text(cfg.output, report);
    write_text(cfg.output + ".meta.json", meta);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gait recognition from motion capture data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gr_version()));
  Config cfg;

  auto* extract = app.add_subcommand("extract", "extract a gait-cycle database from AMC recordings");
  extract->add_option("--distance-threshold", cfg.threshold, "DTW distance threshold")->required();
  extract->add_option("--skeleton", cfg.skeleton, "ASF file or directory of ASF files")->required();
  extract->add_option("--exemplar", cfg.exemplar, "exemplary gait cycle (AMC)")->required()->check(CLI::ExistingFile);
  extract->add_option("--input-dir", cfg.input_dir, "directory of AMC recordings")->required()->check(CLI::ExistingDirectory);
  extract->add_option("--output", cfg.output, "database directory to create")->required();

  auto* learn = app.add_subcommand("learn", "learn one classifier per method on a database");
  learn->add_option("--db-dir", cfg.db_dir, "extracted database directory")->required()->check(CLI::ExistingDirectory);
  learn->add_option("--skeleton", cfg.skeleton, "skeleton (defaults to <db-dir>/skeleton.asf)");
  learn->add_option("--methods", cfg.methods, "comma-separated method ids or 'all'");
  learn->add_option("--output", cfg.output, "output directory (default: classifiers)");
  learn->add_option("--distance-threshold", cfg.threshold, "distance threshold of the database");
  learn->add_option("--seed", cfg.seed, "random seed");

  auto* classify = app.add_subcommand("classify", "rank gallery identities for a probe gait cycle");
  classify->add_option("--classifier", cfg.classifier, "classifier file")->required()->check(CLI::ExistingFile);
  classify->add_option("--probe", cfg.probe, "probe gait cycle (AMC)")->required()->check(CLI::ExistingFile);
  classify->add_option("--gallery", cfg.gallery, "gallery directory of AMC files (default: stored gallery)")
      ->check(CLI::ExistingDirectory);
  classify->add_option("--seed", cfg.seed, "random seed (random baseline only)");

  auto* evaluate = app.add_subcommand("evaluate", "evaluate methods with nested cross-validation");
  evaluate->add_option("--db-dir", cfg.db_dir, "extracted database directory")->required()->check(CLI::ExistingDirectory);
  evaluate->add_option("--skeleton", cfg.skeleton, "skeleton (defaults to <db-dir>/skeleton.asf)");
  evaluate->add_option("--methods", cfg.methods, "comma-separated method ids or 'all'");
  evaluate->add_option("--setup", cfg.setup, "homogeneous:<C> or heterogeneous:<CL>,<CE>")->required();
  evaluate->add_option("--repetitions", cfg.repetitions, "repetitions with fresh random classes")
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--seed", cfg.seed, "random seed");
  evaluate->add_option("--output", cfg.output, "report file (default: standard output)");
  evaluate->add_option("--distance-threshold", cfg.threshold, "threshold printed in the report headers");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*extract) return cmd_extract(cfg);
    if (*learn) return cmd_learn(cfg);
    if (*classify) return cmd_classify(cfg);
    if (*evaluate) return cmd_evaluate(cfg);
  } catch (const Failure& f) {
    std::cerr << "gaitrec: " << f.message << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "gaitrec: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
