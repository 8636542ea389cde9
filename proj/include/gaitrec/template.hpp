#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gaitrec {

// A gait template: a feature vector, or a bundle of `signals` equal-length
// time signals stored one after another in `values`.
struct Template {
  std::string method_id;
  std::string label;
  Eigen::VectorXd values;
  std::size_t signals = 0;

  std::size_t dimensionality() const noexcept { return static_cast<std::size_t>(values.size()); }
  bool is_bundle() const noexcept { return signals > 0; }
  std::size_t signal_length() const noexcept { return signals ? dimensionality() / signals : 0; }
  std::span<const double> signal(std::size_t i) const {
    return {values.data() + i * signal_length(), signal_length()};
  }
};

Template make_vector_template(std::string method_id, const std::vector<double>& values);
Template make_bundle_template(std::string method_id, const std::vector<std::vector<double>>& signals);

// One row per template: method_id,label,signals,values...
std::string write_templates_csv(std::span<const Template> templates);
// Throws Error{MalformedFile}.
std::vector<Template> parse_templates_csv(std::string_view csv);

}  // namespace gaitrec
