#include "gaitrec/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "gaitrec/dtw.hpp"
#include "gaitrec/error.hpp"
#include "gaitrec/parallel.hpp"
#include "gaitrec/text.hpp"

namespace gaitrec {

namespace {

struct WindowGrid {
  std::vector<std::size_t> lengths;
  std::size_t stride = 1;
};

WindowGrid make_grid(std::size_t exemplar_length, const WindowSearch& s) {
  WindowGrid g;
  const double L = static_cast<double>(exemplar_length);
  g.stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(L * s.stride_ratio)));
  const auto lo = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(L * s.min_length_ratio)));
  const auto hi = std::max<std::size_t>(lo, static_cast<std::size_t>(std::floor(L * s.max_length_ratio)));
  // Centred on the exemplar length so that length is always searched.
  std::size_t len = exemplar_length;
  while (len >= lo + g.stride) len -= g.stride;
  for (; len <= hi; len += g.stride)
    if (len >= lo) g.lengths.push_back(len);
  return g;
}

}  // namespace

std::vector<Candidate> find_candidates(const std::vector<MotionSequence>& motions,
                                       const MotionSequence& exemplar, double threshold,
                                       const WindowSearch& search) {
  if (exemplar.frame_count() == 0) fail(ErrorCode::EmptySequence, "exemplar has no frames");
  if (threshold < 0) fail(ErrorCode::InvalidArgument, "distance threshold must be non-negative");
  for (const auto& m : motions)
    if (m.values.cols() != exemplar.values.cols())
      fail(ErrorCode::DimensionMismatch, "motion '" + m.source_file + "' has a different channel layout");

  const WindowGrid grid = make_grid(exemplar.frame_count(), search);
  const DtwConfig cfg{threshold};
  std::vector<std::vector<Candidate>> per_motion(motions.size());

  parallel_for(motions.size(), [&](std::size_t mi) {
    const auto& m = motions[mi];
    const std::size_t T = m.frame_count();
    auto& out = per_motion[mi];
    for (std::size_t first = 0; first < T; first += grid.stride) {
      for (std::size_t len : grid.lengths) {
        if (first + len > T) break;
        Eigen::MatrixXd window = m.values.middleRows(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(len));
        double d = dtw_distance(window, exemplar.values, cfg);
        if (d <= threshold) out.push_back({mi, first, len, d});
      }
    }
  });

  std::vector<Candidate> all;
  for (auto& v : per_motion) all.insert(all.end(), v.begin(), v.end());
  return all;
}

std::vector<Candidate> suppress_overlaps(std::vector<Candidate> candidates, double max_overlap) {
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.motion != b.motion) return a.motion < b.motion;
    if (a.first != b.first) return a.first < b.first;
    return a.count < b.count;
  });
  std::vector<Candidate> kept;
  for (const auto& c : candidates) {
    bool suppressed = false;
    for (const auto& k : kept) {
      if (k.motion != c.motion) continue;
      const std::size_t lo = std::max(k.first, c.first);
      const std::size_t hi = std::min(k.first + k.count, c.first + c.count);
      if (hi <= lo) continue;
      const double overlap = static_cast<double>(hi - lo) / static_cast<double>(std::min(k.count, c.count));
      if (overlap > max_overlap) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) {
    if (a.motion != b.motion) return a.motion < b.motion;
    return a.first < b.first;
  });
  return kept;
}

GaitDatabase extract_gait_cycles(const std::vector<MotionSequence>& motions,
                                 const MotionSequence& exemplar, double threshold,
                                 const WindowSearch& search) {
  auto kept = suppress_overlaps(find_candidates(motions, exemplar, threshold, search), search.max_overlap);

  std::map<std::string, std::size_t> counts;
  for (const auto& c : kept) ++counts[motions[c.motion].subject_id];

  GaitDatabase db;
  db.threshold = threshold;
  db.search = search;
  std::map<std::string, std::size_t> next_index;
  for (const auto& c : kept) {
    const auto& src = motions[c.motion];
    if (counts[src.subject_id] < search.min_samples_per_subject) continue;
    DatabaseSample s;
    s.subject_id = src.subject_id;
    s.source_file = src.source_file;
    s.first_frame = c.first;
    s.frame_count = c.count;
    s.distance = c.distance;
    s.sample_file = src.subject_id + "_" + std::to_string(++next_index[src.subject_id]) + ".amc";
    s.motion = slice_frames(src, c.first, c.count);
    s.motion.source_file = s.sample_file;
    db.samples.push_back(std::move(s));
    ++db.subjects[src.subject_id];
  }
  return db;
}

void write_database(const GaitDatabase& db, const Skeleton& skeleton, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ostringstream manifest;
  manifest << "subject_id,sample_file,source_file,first_frame,last_frame,dtw_distance\n";
  for (const auto& s : db.samples) {
    text::write_file(dir / s.sample_file, write_amc(s.motion));
    manifest << s.subject_id << ',' << s.sample_file << ',' << s.source_file << ',' << (s.first_frame + 1) << ','
             << (s.first_frame + s.frame_count) << ',' << text::fixed_trimmed(s.distance, 6) << "\n";
  }
  text::write_file(dir / "manifest.csv", manifest.str());
  text::write_file(dir / "skeleton.asf", write_asf(skeleton));
  nlohmann::json meta = {
      {"threshold", db.threshold},
      {"subjects", db.subjects.size()},
      {"samples", db.samples.size()},
      {"window_search",
       {{"min_length_ratio", db.search.min_length_ratio},
        {"max_length_ratio", db.search.max_length_ratio},
        {"stride_ratio", db.search.stride_ratio},
        {"max_overlap", db.search.max_overlap},
        {"min_samples_per_subject", db.search.min_samples_per_subject}}},
  };
  text::write_file(dir / "extraction.json", meta.dump(2) + "\n");
}

std::vector<std::filesystem::path> list_amc_files(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) fail(ErrorCode::Io, "not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    if (text::lower(e.path().extension().string()) == ".amc") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

GaitDatabase load_database(const std::filesystem::path& dir, const Skeleton& skeleton) {
  GaitDatabase db;
  const auto files = list_amc_files(dir);
  db.samples.resize(files.size());
  parallel_for(files.size(), [&](std::size_t i) {
    auto& s = db.samples[i];
    s.motion = load_amc(files[i].string(), skeleton);
    s.subject_id = s.motion.subject_id;
    s.sample_file = files[i].filename().string();
    s.source_file = s.sample_file;
    s.frame_count = s.motion.frame_count();
  });
  for (const auto& s : db.samples) ++db.subjects[s.subject_id];
  const auto meta_path = dir / "extraction.json";
  if (std::filesystem::exists(meta_path)) {
    try {
      auto meta = nlohmann::json::parse(text::read_file(meta_path));
      db.threshold = meta.value("threshold", 0.0);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::MalformedFile, meta_path.string() + ": " + e.what());
    }
  }
  return db;
}

}  // namespace gaitrec
