#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace liftscore {

std::string read_text_file(const std::filesystem::path& path);

/// Writes to a sibling temporary and renames over `path`, so readers never
/// observe a partial file. Creates parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Shortest decimal that round-trips to the same double.
std::string format_number(double value);

/// Fixed two-decimal rendering after half-away-from-zero rounding.
std::string format_points(double points);

}  // namespace liftscore
