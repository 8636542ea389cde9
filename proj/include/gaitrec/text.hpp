#pragma once

// Small text helpers shared by the file-format readers and writers.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gaitrec::text {

std::vector<std::string_view> split_ws(std::string_view line);
std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);
std::string lower(std::string_view s);

std::optional<double> parse_double(std::string_view token);
std::optional<long long> parse_int(std::string_view token);

// Shortest decimal representation that parses back to the same double.
std::string shortest(double v);
// Fixed-point with `decimals` digits, trailing zeros (and a bare '.') removed,
// and negative zero printed as "0".
std::string fixed_trimmed(double v, int decimals);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace gaitrec::text
