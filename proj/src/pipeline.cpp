#include "gaitrec/pipeline.hpp"

#include <algorithm>

#include "gaitrec/error.hpp"
#include "gaitrec/parallel.hpp"
#include "gaitrec/text.hpp"

namespace gaitrec {

std::shared_ptr<const Skeleton> load_skeletons(const std::filesystem::path& path) {
  if (std::filesystem::is_regular_file(path)) return std::make_shared<const Skeleton>(load_asf(path.string()));
  if (!std::filesystem::is_directory(path)) fail(ErrorCode::Io, "skeleton path not found: " + path.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(path))
    if (e.is_regular_file() && text::lower(e.path().extension().string()) == ".asf") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) fail(ErrorCode::Io, "no ASF files in " + path.string());
  std::vector<Skeleton> skeletons;
  for (const auto& f : files) skeletons.push_back(load_asf(f.string()));
  return std::make_shared<const Skeleton>(mean_skeleton(skeletons));
}

ExtractionSummary extract_database(const Skeleton& skeleton, const std::filesystem::path& exemplar,
                                   const std::filesystem::path& input_dir, const std::filesystem::path& output_dir,
                                   double threshold, const WindowSearch& search) {
  if (!(threshold >= 0)) fail(ErrorCode::InvalidArgument, "distance threshold must be non-negative");
  const auto files = list_amc_files(input_dir);
  const MotionSequence ex = normalize_root(load_amc(exemplar.string(), skeleton));

  std::vector<MotionSequence> motions(files.size());
  parallel_for(files.size(), [&](std::size_t i) { motions[i] = normalize_root(load_amc(files[i].string(), skeleton)); });

  const auto normalized = output_dir / "normalized";
  std::filesystem::create_directories(normalized);
  for (std::size_t i = 0; i < files.size(); ++i)
    text::write_file(normalized / files[i].filename(), write_amc(motions[i]));

  const GaitDatabase db = extract_gait_cycles(motions, ex, threshold, search);
  write_database(db, skeleton, output_dir);
  return {files.size(), db.subjects.size(), db.samples.size()};
}

std::vector<GaitSample> database_samples(const GaitDatabase& db, std::shared_ptr<const Skeleton> skeleton) {
  std::vector<GaitSample> out(db.samples.size());
  parallel_for(out.size(), [&](std::size_t i) {
    const auto& s = db.samples[i];
    out[i] = make_sample(normalize_root(s.motion), skeleton, s.subject_id);
  });
  return out;
}

GaitSample load_sample(const std::filesystem::path& amc, std::shared_ptr<const Skeleton> skeleton) {
  if (!skeleton) fail(ErrorCode::InvalidArgument, "no skeleton to bind the motion to");
  const MotionSequence m = load_amc(amc.string(), *skeleton);
  return make_sample(normalize_root(m), std::move(skeleton), m.subject_id);
}

}  // namespace gaitrec
