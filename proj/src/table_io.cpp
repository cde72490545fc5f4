#include "mesocat/app/table_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mesocat/errors.hpp"

namespace mesocat::app {

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

const char* extension(Format format) { return format == Format::csv ? ".csv" : ".json"; }

std::string render_table(const Table& table, Format format) {
  if (format == Format::json) {
    nlohmann::json j;
    j["comment"] = table.comment;
    j["columns"] = table.columns;
    j["rows"] = table.rows;
    return j.dump(1) + "\n";
  }
  std::string out = "# " + table.comment + "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_number(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string write_table(const Table& table, const std::filesystem::path& path, Format format) {
  const std::string text = render_table(table, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
  return fnv1a_hex(text);
}

Table parse_table(std::string_view text, Format format) {
  Table t;
  if (format == Format::json) {
    const auto j = nlohmann::json::parse(text);
    t.comment = j.at("comment").get<std::string>();
    t.columns = j.at("columns").get<std::vector<std::string>>();
    t.rows = j.at("rows").get<std::vector<std::vector<double>>>();
  } else {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
      throw Error("csv table: missing comment line");
    }
    t.comment = line.substr(2);
    if (!std::getline(in, line)) throw Error("csv table: missing header");
    t.columns = split(line, ',');
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<double> row;
      for (const auto& cell : split(line, ',')) row.push_back(std::stod(cell));
      t.rows.push_back(std::move(row));
    }
  }
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size()) throw Error("table row width does not match header");
  }
  return t;
}

Table read_table(const std::filesystem::path& path, Format format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_table(buf.str(), format);
}

}  // namespace mesocat::app
