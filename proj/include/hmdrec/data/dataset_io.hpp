#pragma once

// Dataset text format, one record per line:
//
//   # hmdrec-dataset 1
//   trial <subject> <ClassName> <trial_index> <onset|-> <sample_count>
//   <19 space-separated decimals in TrackingSample::fields() order>
//   ...
//
// Decimals use the shortest representation that round-trips exactly.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hmdrec/data/tracking.hpp"

namespace hmdrec::data {

inline constexpr std::string_view kDatasetHeader = "# hmdrec-dataset 1";

void write_dataset(std::span<const Trial> trials, std::ostream& out);
void write_dataset(std::span<const Trial> trials, const std::filesystem::path& path);

/// Throws ParseError carrying the offending line number.
std::vector<Trial> read_dataset(std::istream& in);
std::vector<Trial> read_dataset(const std::filesystem::path& path);

std::string format_sample(const TrackingSample& s);
/// Parses one sample line; returns std::nullopt for blank, comment and trial header lines.
std::optional<TrackingSample> parse_sample_line(std::string_view line, std::size_t line_no);

}  // namespace hmdrec::data
