#include "storalyze/format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "storalyze/error.hpp"

namespace storalyze {

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

std::string format_metric(std::optional<double> value) {
  return value ? format_number(*value) : std::string("undefined");
}

double round_sig9(double value) {
  if (!std::isfinite(value)) return value;
  return std::strtod(format_number(value).c_str(), nullptr);
}

std::string format_exact(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::FileNotFound, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(ErrorCode::FileNotFound, "write failed for " + path.string());
}

}  // namespace storalyze
