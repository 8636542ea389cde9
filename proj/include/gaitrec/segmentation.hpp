#pragma once

// Gait-cycle extraction: sliding windows over normalized motions are compared
// to an exemplar cycle by DTW on bone rotations; windows within the distance
// threshold become samples, and subjects with too few samples are dropped.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gaitrec/motion.hpp"
#include "gaitrec/skeleton.hpp"

namespace gaitrec {

struct WindowSearch {
  double min_length_ratio = 0.5;   // shortest window, relative to the exemplar
  double max_length_ratio = 2.0;   // longest window
  double stride_ratio = 0.25;      // start-position and length step
  double max_overlap = 0.5;        // suppression threshold, relative to the shorter window
  std::size_t min_samples_per_subject = 10;
};

struct Candidate {
  std::size_t motion = 0;  // index into the input motions
  std::size_t first = 0;   // 0-based first frame
  std::size_t count = 0;
  double distance = 0.0;

  bool operator==(const Candidate&) const = default;
};

struct DatabaseSample {
  std::string subject_id;
  std::string source_file;
  std::size_t first_frame = 0;  // 0-based, within the source motion
  std::size_t frame_count = 0;
  double distance = 0.0;
  std::string sample_file;      // "<subject>_<index>.amc"
  MotionSequence motion;
};

struct GaitDatabase {
  std::vector<DatabaseSample> samples;
  std::map<std::string, std::size_t> subjects;  // subject -> sample count
  double threshold = 0.0;
  WindowSearch search;  // parameters the samples were extracted with
};

// Every window whose DTW distance to the exemplar is <= threshold, before
// overlap suppression. Ordered by (motion, first, count).
std::vector<Candidate> find_candidates(const std::vector<MotionSequence>& motions,
                                       const MotionSequence& exemplar, double threshold,
                                       const WindowSearch& search = {});

// Greedy non-maximum suppression: lowest distance first, drop any window
// overlapping a kept one (same motion) by more than max_overlap.
std::vector<Candidate> suppress_overlaps(std::vector<Candidate> candidates, double max_overlap);

GaitDatabase extract_gait_cycles(const std::vector<MotionSequence>& motions,
                                 const MotionSequence& exemplar, double threshold,
                                 const WindowSearch& search = {});

// Writes <dir>/<subject>_<index>.amc, <dir>/manifest.csv, <dir>/skeleton.asf and
// <dir>/extraction.json.
void write_database(const GaitDatabase& db, const Skeleton& skeleton, const std::filesystem::path& dir);
// Reads every top-level *.amc in dir, labelled by file-name prefix. The
// threshold comes from extraction.json when present.
GaitDatabase load_database(const std::filesystem::path& dir, const Skeleton& skeleton);

std::vector<std::filesystem::path> list_amc_files(const std::filesystem::path& dir);

}  // namespace gaitrec
