#include "storalyze/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "storalyze/error.hpp"

namespace storalyze::csv {

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::optional<std::size_t> Table::find(std::string_view column) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (iequals(header[i], column)) return i;
  }
  return std::nullopt;
}

std::size_t Table::require(std::string_view column, const std::filesystem::path& source) const {
  if (auto idx = find(column)) return *idx;
  throw Error(ErrorCode::MissingColumn,
              "column '" + std::string(column) + "' not found in " + source.string());
}

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(trim(current));
  return fields;
}

Table parse(std::string_view text) {
  Table table;
  std::size_t pos = 0;
  bool have_header = false;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    if (trim(line).empty()) continue;
    auto fields = split_line(line);
    if (!have_header) {
      // strip a UTF-8 byte order mark
      if (!fields.empty() && fields[0].rfind("\xEF\xBB\xBF", 0) == 0) fields[0].erase(0, 3);
      table.header = std::move(fields);
      have_header = true;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  return table;
}

Table read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  Table table = parse(buf.str());
  if (table.header.empty()) throw Error(ErrorCode::ParseError, path.string() + " has no header row");
  return table;
}

double parse_number(std::string_view cell) {
  const std::string s = trim(cell);
  if (s.empty() || iequals(s, "na") || iequals(s, "nan") || iequals(s, "null") || iequals(s, "-nan")) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  double value = 0.0;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), value);
  if (ec == std::errc::result_out_of_range) {
    return value;
  }
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::ParseError, "not a number: '" + s + "'");
  }
  return value;
}

std::optional<double> parse_optional_number(std::string_view cell) {
  if (trim(cell).empty()) return std::nullopt;
  return parse_number(cell);
}

}  // namespace storalyze::csv
