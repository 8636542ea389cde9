#pragma once

// File-level steps shared by the C API: skeleton loading, database
// extraction, and turning stored motions into gait samples.

#include <filesystem>
#include <memory>
#include <vector>

#include "gaitrec/sample.hpp"
#include "gaitrec/segmentation.hpp"

namespace gaitrec {

// A single ASF file, or a directory whose ASF files are averaged into the
// prototypical skeleton. Throws Error{Io}, Error{MalformedAsf},
// Error{HeterogeneousTopology}.
std::shared_ptr<const Skeleton> load_skeletons(const std::filesystem::path& path);

struct ExtractionSummary {
  std::size_t inputs = 0;
  std::size_t subjects = 0;
  std::size_t samples = 0;
};

// Normalizes every AMC in input_dir into <output_dir>/normalized, extracts gait
// cycles against the normalized exemplar and writes the database to output_dir.
ExtractionSummary extract_database(const Skeleton& skeleton, const std::filesystem::path& exemplar,
                                   const std::filesystem::path& input_dir, const std::filesystem::path& output_dir,
                                   double threshold, const WindowSearch& search = {});

// Root-normalized samples with both representations, labelled by subject.
std::vector<GaitSample> database_samples(const GaitDatabase& db, std::shared_ptr<const Skeleton> skeleton);

// One AMC file as a sample labelled by its file-name prefix.
GaitSample load_sample(const std::filesystem::path& amc, std::shared_ptr<const Skeleton> skeleton);

}  // namespace gaitrec
