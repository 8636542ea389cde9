#include "gaitrec/template.hpp"

#include <sstream>

#include "gaitrec/error.hpp"
#include "gaitrec/text.hpp"

namespace gaitrec {

Template make_vector_template(std::string method_id, const std::vector<double>& values) {
  Template t;
  t.method_id = std::move(method_id);
  t.values = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  return t;
}

Template make_bundle_template(std::string method_id, const std::vector<std::vector<double>>& signals) {
  Template t;
  t.method_id = std::move(method_id);
  t.signals = signals.size();
  const std::size_t len = signals.empty() ? 0 : signals.front().size();
  t.values.resize(static_cast<Eigen::Index>(len * signals.size()));
  for (std::size_t s = 0; s < signals.size(); ++s) {
    if (signals[s].size() != len) fail(ErrorCode::LayoutMismatch, "bundle signals differ in length");
    for (std::size_t i = 0; i < len; ++i) t.values[static_cast<Eigen::Index>(s * len + i)] = signals[s][i];
  }
  return t;
}

std::string write_templates_csv(std::span<const Template> templates) {
  std::ostringstream os;
  for (const auto& t : templates) {
    os << t.method_id << ',' << t.label << ',' << t.signals;
    for (Eigen::Index i = 0; i < t.values.size(); ++i) os << ',' << text::shortest(t.values[i]);
    os << "\n";
  }
  return os.str();
}

std::vector<Template> parse_templates_csv(std::string_view csv) {
  std::vector<Template> out;
  std::size_t ln = 0;
  for (auto line : text::split(csv, '\n')) {
    ++ln;
    line = text::trim(line);
    if (line.empty()) continue;
    auto fields = text::split(line, ',');
    if (fields.size() < 3) fail(ErrorCode::MalformedFile, "template row " + std::to_string(ln) + ": too few fields");
    Template t;
    t.method_id = std::string(fields[0]);
    t.label = std::string(fields[1]);
    auto sig = text::parse_int(fields[2]);
    if (!sig || *sig < 0) fail(ErrorCode::MalformedFile, "template row " + std::to_string(ln) + ": bad signal count");
    t.signals = static_cast<std::size_t>(*sig);
    t.values.resize(static_cast<Eigen::Index>(fields.size() - 3));
    for (std::size_t i = 3; i < fields.size(); ++i) {
      auto v = text::parse_double(fields[i]);
      if (!v) fail(ErrorCode::MalformedFile, "template row " + std::to_string(ln) + ": non-numeric value");
      t.values[static_cast<Eigen::Index>(i - 3)] = *v;
    }
    if (t.signals && t.values.size() % static_cast<Eigen::Index>(t.signals) != 0)
      fail(ErrorCode::MalformedFile, "template row " + std::to_string(ln) + ": ragged signal bundle");
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace gaitrec
