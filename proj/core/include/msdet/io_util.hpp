#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace msdet {

/// Shortest representation that parses back to the exact same double
/// (std::to_chars). Infinities print as "inf"/"-inf".
std::string format_double(double value);

/// Strict double parse of the whole token; throws ParseError via the callers'
/// wrappers, here just reports success.
bool try_parse_double(std::string_view token, double& out);

/// Splits into lines on '\n', tolerating a trailing '\r' per line (CRLF
/// input). A trailing final newline does not produce an empty last element.
std::vector<std::string_view> split_lines(std::string_view text);

/// Splits on a single-character delimiter; empty fields preserved.
std::vector<std::string_view> split(std::string_view text, char delim);

std::string read_file(const std::filesystem::path& path);

/// Writes via a temp file in the same directory followed by an atomic rename,
/// creating parent directories as needed.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace msdet
