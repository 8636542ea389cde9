#include "gaitrec/report.hpp"

#include <cmath>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "gaitrec/error.hpp"
#include "gaitrec/text.hpp"

namespace gaitrec {

namespace {

constexpr std::string_view kHeadline = "DBI DI SC FDR CCR EER AUC MAP DCT TD";
constexpr std::string_view kSequenceHeader = "FAR FRR TAR FAR RCL PCN";
constexpr std::size_t kHeadlineCount = 10;

double parse_field(std::string_view f, std::size_t line) {
  f = text::trim(f);
  if (f.empty() || f == "<1") return std::numeric_limits<double>::quiet_NaN();
  if (f == "inf") return std::numeric_limits<double>::infinity();
  if (f == "-inf") return -std::numeric_limits<double>::infinity();
  auto v = text::parse_double(f);
  if (!v) fail(ErrorCode::MalformedFile, "report line " + std::to_string(line) + ": non-numeric value '" + std::string(f) + "'");
  return *v;
}

}  // namespace

std::string format_value(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return text::fixed_trimmed(v, kReportDecimals);
}

std::string format_threshold(double v) {
  std::string s = text::fixed_trimmed(v, kReportDecimals);
  if (s.find('.') == std::string::npos && std::isfinite(v)) s += ".0";
  return s;
}

std::string format_dct(double ms) {
  if (std::isnan(ms)) return "";
  if (ms < 1.0) return "<1";
  return std::to_string(std::llround(ms));
}

std::string write_report(const std::vector<MethodReport>& reports) {
  std::ostringstream os;
  for (const auto& r : reports) {
    const auto& s = r.separability;
    const auto& m = r.metrics;
    os << r.display_name << ", " << format_threshold(r.threshold) << "\n";
    os << kHeadline << "\n";
    os << format_value(s.dbi) << ',' << format_value(s.di) << ',' << format_value(s.sc) << ',' << format_value(s.fdr)
       << ',' << format_value(m.ccr) << ',' << format_value(m.eer) << ',' << format_value(m.auc) << ','
       << format_value(m.map) << ',' << format_dct(r.dct_ms) << ',' << format_value(r.td) << "\n";
    os << "CMC\n";
    for (double v : m.cmc) os << format_value(v) << "\n";
    os << kSequenceHeader << "\n";
    const auto& q = m.sequences;
    for (std::size_t i = 0; i < q.far.size(); ++i)
      os << format_value(q.far[i]) << ',' << format_value(q.frr[i]) << ',' << format_value(q.roc_tar[i]) << ','
         << format_value(q.roc_far[i]) << ',' << format_value(q.rcl[i]) << ',' << format_value(q.pcn[i]) << "\n";
  }
  return os.str();
}

std::vector<ReportBlock> parse_report(std::string_view body) {
  auto lines = text::split(body, '\n');
  if (!lines.empty() && text::trim(lines.back()).empty()) lines.pop_back();
  std::vector<ReportBlock> out;
  std::size_t i = 0;
  auto bad = [&](const std::string& msg) -> void {
    fail(ErrorCode::MalformedFile, "report line " + std::to_string(i + 1) + ": " + msg);
  };
  auto line = [&]() -> std::string_view {
    if (i >= lines.size()) bad("unexpected end of report");
    return text::trim(lines[i]);
  };
  while (i < lines.size()) {
    ReportBlock b;
    const std::string_view title = line();
    const auto comma = title.rfind(", ");
    if (comma == std::string_view::npos) bad("expected '{method name}, {distance threshold}'");
    b.method_name = std::string(title.substr(0, comma));
    b.threshold = parse_field(title.substr(comma + 2), i + 1);
    ++i;
    if (line() != kHeadline) bad("expected the coefficient header");
    ++i;
    const auto values = text::split(line(), ',');
    if (values.size() != kHeadlineCount) bad("expected ten coefficient values");
    for (auto v : values) b.headline.push_back(parse_field(v, i + 1));
    b.dct = std::string(text::trim(values[8]));
    ++i;
    if (line() != "CMC") bad("expected 'CMC'");
    ++i;
    while (line() != kSequenceHeader) {
      b.cmc.push_back(parse_field(line(), i + 1));
      ++i;
    }
    ++i;
    while (i < lines.size()) {
      const auto fields = text::split(text::trim(lines[i]), ',');
      if (fields.size() != 6) break;
      std::vector<double> row;
      for (auto f : fields) row.push_back(parse_field(f, i + 1));
      b.sequences.push_back(std::move(row));
      ++i;
    }
    out.push_back(std::move(b));
  }
  return out;
}

std::string report_metadata_json(const std::vector<MethodReport>& reports, const SetupConfig& cfg, double threshold,
                                 const MethodOptions& options) {
  using nlohmann::json;
  json methods = json::array();
  for (const auto& r : reports)
    methods.push_back({{"id", r.method_id}, {"name", r.display_name}, {"runs", r.runs}, {"probes", r.metrics.probes},
                       {"dct_ms", std::isnan(r.dct_ms) ? json(nullptr) : json(r.dct_ms)}, {"td", r.td}});
  json meta = {
      {"seed", cfg.seed},
      {"setup", cfg.describe()},
      {"repetitions", cfg.repetitions},
      {"outer_folds", cfg.folds()},
      {"inner_folds", cfg.inner_folds},
      {"fineness", cfg.fineness},
      {"distance_threshold", threshold},
      {"methods", methods},
      {"conventions",
       {{"headline_average", "arithmetic mean over repetitions and outer folds; sequences averaged pointwise"},
        {"homogeneous_split", "per-class seeded shuffle, outer fold f learns on positions p with p mod 3 == f"},
        {"mahalanobis_covariance", "population covariance of the learning templates in feature space, pseudo-inverted"},
        {"mmc_spectrum_cutoff", 1e-8},
        {"mmc_retention", "whitened between-class eigenvalues >= 0.5"},
        {"lda_regularization", "1e-6 * trace / dim added to the within-class scatter"},
        {"verification_pairs", "all unordered evaluation pairs, genuine iff same identity"},
        {"eer", "linear interpolation between bracketing knots"},
        {"far_frr_grid", "threshold_i = threshold_EER * i / (fineness / 2)"},
        {"roc_grid", "threshold_i = max distance * i / (fineness - 1), anchored at (0,0)"},
        {"retrieval", "probe-gallery pairs of the inner loop within the threshold, micro-averaged; MAP trapezoidal"},
        {"centroids", "mean for feature vectors, medoid for signal bundles"},
        {"silhouette", "a(n) averages over the whole own class including the template itself"},
        {"kumar_distance", "Frobenius norm of the covariance difference"},
        {"kwolek_frames", options.features.kwolek_frames},
        {"raw_frames", options.raw_frames},
        {"gavrilova_signals", options.features.gavrilova.describe()}}},
  };
  return meta.dump(2) + "\n";
}

}  // namespace gaitrec
