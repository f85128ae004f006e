#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

// Small string and file helpers shared by every module.
namespace vsp {

std::string_view trim(std::string_view s);
std::string_view rtrim(std::string_view s);
std::string to_lower(std::string_view s);
bool starts_with_ci(std::string_view s, std::string_view prefix);

// Splits on '\n' (a preceding '\r' is dropped). A trailing newline does not
// produce an empty final line; "" yields no lines.
std::vector<std::string> split_lines(std::string_view text);
std::string join_lines(const std::vector<std::string>& lines, bool trailing_newline = false);

std::string replace_all(std::string text, std::string_view from, std::string_view to);

// Number of Unicode code points; invalid bytes count as one each.
std::size_t utf8_length(std::string_view s);

// Whole-file IO. read_file throws vsp::Error when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);
void append_file(const std::filesystem::path& path, std::string_view content);

// RFC 4180 style CSV. Quoted fields may span lines; "" escapes a quote.
struct CsvRecord {
    std::vector<std::string> fields;
    std::size_t line = 0;  // 1-based line where the record starts
};

// Throws vsp::MalformedRow on an unterminated quote or stray quote.
std::vector<CsvRecord> parse_csv(std::string_view text);
std::string csv_escape(std::string_view field);
std::string csv_line(const std::vector<std::string>& fields);

std::string to_hex(const unsigned char* data, std::size_t size);

// Fixed-precision decimal rendering used in reports ("0.571429").
std::string format_fixed(double value, int digits);

}  // namespace vsp
