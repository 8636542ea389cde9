#pragma once

// A persisted classifier: a fitted method, the prototypical skeleton it was
// learned with and a labelled gallery of templates.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gaitrec/method.hpp"
#include "gaitrec/skeleton.hpp"

namespace gaitrec {

inline constexpr std::string_view kClassifierTag = "GAITREC-CLASSIFIER";
inline constexpr int kClassifierVersion = 1;

struct Classifier {
  MethodModel model;
  std::shared_ptr<const Skeleton> skeleton;
  std::vector<Template> gallery;
};

struct RankedIdentity {
  std::string label;
  double distance = 0.0;  // NaN for the random baseline
};

// Fits the method on `samples` and stores their templates as the gallery.
Classifier learn_classifier(std::string_view method_id, std::span<const GaitSample> samples,
                            std::shared_ptr<const Skeleton> skeleton, const MethodOptions& options = {});

// Identities ordered by the distance of their closest gallery template;
// ties keep the order of first gallery appearance. The random baseline
// returns a seeded random permutation. Throws Error{EmptyGallery}.
std::vector<RankedIdentity> rank_identities(const Classifier& c, const Template& probe, std::uint64_t seed = 0);

std::string write_classifier(const Classifier& c);
// Throws Error{MalformedFile}.
Classifier parse_classifier(std::string_view text);
void save_classifier(const Classifier& c, const std::string& path);
Classifier load_classifier(const std::string& path);

}  // namespace gaitrec
