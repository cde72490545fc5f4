#ifndef MESOCAT_APP_TABLE_IO_HPP
#define MESOCAT_APP_TABLE_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mesocat::app {

enum class Format { csv, json };

/// A rectangular numeric table with a one-line description of its columns.
struct Table {
  std::string comment;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// CSV: "# comment", header line, rows in %.12e. JSON: {"comment", "columns", "rows"}.
std::string render_table(const Table& table, Format format);

/// Writes the table and returns the FNV-1a checksum of the bytes written.
std::string write_table(const Table& table, const std::filesystem::path& path, Format format);

Table parse_table(std::string_view text, Format format);
Table read_table(const std::filesystem::path& path, Format format);

/// 64-bit FNV-1a, lowercase hex.
std::string fnv1a_hex(std::string_view bytes);

const char* extension(Format format);

}  // namespace mesocat::app

#endif  // MESOCAT_APP_TABLE_IO_HPP
