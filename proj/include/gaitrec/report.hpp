#pragma once

// The evaluation output file: one block per method,
//
//   {method name}, {distance threshold}
//   DBI DI SC FDR CCR EER AUC MAP DCT TD
//   {one comma-separated line of values}
//   CMC
//   {C~ lines}
//   FAR FRR TAR FAR RCL PCN
//   {fineness lines of six comma-separated values}
//
// Undefined values (the random baseline) are left empty; DCT is whole
// milliseconds or "<1".

#include <string>
#include <string_view>
#include <vector>

#include "gaitrec/evaluation.hpp"

namespace gaitrec {

inline constexpr int kReportDecimals = 6;

std::string write_report(const std::vector<MethodReport>& reports);

// Parsed form of one block, values as printed.
struct ReportBlock {
  std::string method_name;
  double threshold = 0;
  std::vector<double> headline;  // DBI DI SC FDR CCR EER AUC MAP DCT TD; empty and "<1" parse as NaN
  std::string dct;               // DCT as printed
  std::vector<double> cmc;
  std::vector<std::vector<double>> sequences;  // rows of six
};

// Throws Error{MalformedFile}.
std::vector<ReportBlock> parse_report(std::string_view text);

// JSON metadata written next to a report: seed, setup and the conventions
// the numbers depend on.
std::string report_metadata_json(const std::vector<MethodReport>& reports, const SetupConfig& cfg, double threshold,
                                 const MethodOptions& options);

std::string format_value(double v);
std::string format_threshold(double v);
std::string format_dct(double ms);

}  // namespace gaitrec
