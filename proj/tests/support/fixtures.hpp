#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "storalyze/format.hpp"

namespace fixtures {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("storalyze-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string hour_stamp(std::size_t h, int year = 2050) {
  // hourly stamps from Jan 1; day-of-year rolled into month/day
  int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if ((year % 4 == 0 && year % 100 != 0) || year % 400 == 0) days[1] = 29;
  std::size_t day = h / 24;
  int month = 0;
  while (month < 11 && day >= static_cast<std::size_t>(days[month])) day -= days[month++];
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02zuT%02zu:00:00", year, month + 1, day + 1, h % 24);
  return buf;
}

/// Wide CSV: timestamp plus the named columns. Empty strings in `cells`
/// leave a blank cell.
inline std::string wide_csv(const std::vector<std::string>& names, const std::vector<std::vector<double>>& columns,
                            int year = 2050) {
  std::string s = "timestamp";
  for (const auto& n : names) s += "," + n;
  s += "\n";
  for (std::size_t t = 0; t < columns.front().size(); ++t) {
    s += hour_stamp(t, year);
    for (const auto& c : columns) s += "," + storalyze::format_exact(c[t]);
    s += "\n";
  }
  return s;
}

inline std::vector<double> random_walk(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> step(0.0, 1.0);
  std::vector<double> x(n);
  double v = 0.0;
  for (auto& e : x) e = v += step(rng);
  return x;
}

/// Piecewise-linear triangle wave 0 -> 1 -> 0, `count` times, `half` samples per leg.
inline std::vector<double> triangles(std::size_t count, std::size_t half) {
  std::vector<double> x;
  for (std::size_t c = 0; c < count; ++c) {
    for (std::size_t i = 0; i < half; ++i) x.push_back(static_cast<double>(i) / half);
    for (std::size_t i = 0; i < half; ++i) x.push_back(1.0 - static_cast<double>(i) / half);
  }
  x.push_back(0.0);
  return x;
}

}  // namespace fixtures
