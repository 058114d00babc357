#include "storalyze/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "storalyze/csv.hpp"
#include "storalyze/error.hpp"
#include "storalyze/format.hpp"

namespace storalyze {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t find_time_column(const csv::Table& table) {
  for (std::string_view name : {"timestamp", "datetime", "time", "snapshot", "date"}) {
    if (auto idx = table.find(name)) return *idx;
  }
  return 0;
}

struct Sample {
  Timestamp time;
  double value;
};

std::vector<Sample> select_samples(const csv::Table& table, std::string_view column,
                                   const std::filesystem::path& path) {
  const std::size_t time_col = find_time_column(table);
  std::vector<Sample> samples;
  samples.reserve(table.rows.size());

  auto series_col = table.find("series");
  if (!series_col) series_col = table.find("variable");
  const auto long_value_col = table.find("value");
  const bool long_format = series_col && long_value_col && !table.find(column);

  if (long_format) {
    for (const auto& row : table.rows) {
      if (row.size() <= std::max({time_col, *series_col, *long_value_col})) {
        throw Error(ErrorCode::ParseError, "short row in " + path.string());
      }
      if (row[*series_col] != column) continue;
      samples.push_back({parse_timestamp(row[time_col]), csv::parse_number(row[*long_value_col])});
    }
    if (samples.empty()) {
      throw Error(ErrorCode::MissingColumn,
                  "no rows for series '" + std::string(column) + "' in " + path.string());
    }
    return samples;
  }

  std::size_t value_col = 0;
  if (column.empty()) {
    if (table.header.size() != 2) {
      throw Error(ErrorCode::MissingColumn, "no column selected and " + path.string() +
                                                " does not have exactly one value column");
    }
    value_col = time_col == 0 ? 1 : 0;
  } else {
    value_col = table.require(column, path);
  }
  for (const auto& row : table.rows) {
    if (row.size() <= std::max(time_col, value_col)) {
      throw Error(ErrorCode::ParseError, "short row in " + path.string());
    }
    samples.push_back({parse_timestamp(row[time_col]), csv::parse_number(row[value_col])});
  }
  return samples;
}

}  // namespace

TimeSeries load_series(const std::filesystem::path& path, std::string_view column, Unit unit) {
  const csv::Table table = csv::read(path);
  const std::vector<Sample> samples = select_samples(table, column, path);
  if (samples.size() < 2) {
    throw Error(ErrorCode::TooShort, path.string() + " has fewer than 2 samples");
  }

  // Lay samples onto the hourly grid; skipped timestamps become NaN.
  std::vector<double> values;
  values.reserve(samples.size());
  values.push_back(samples.front().value);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const auto step = samples[i].time - samples[i - 1].time;
    if (step <= std::chrono::seconds{0} || step % std::chrono::hours{1} != std::chrono::seconds{0}) {
      throw Error(ErrorCode::NonUniformSpacing,
                  "timestamps are not hourly and increasing at row " + std::to_string(i + 1) + " of " +
                      path.string());
    }
    const auto hours = std::chrono::duration_cast<std::chrono::hours>(step).count();
    if (static_cast<std::size_t>(hours - 1) > kMaxInterpolatedGap) {
      throw Error(ErrorCode::TooManyGaps, std::to_string(hours - 1) + " missing hours before row " +
                                              std::to_string(i + 1) + " of " + path.string());
    }
    values.insert(values.end(), static_cast<std::size_t>(hours - 1), kNaN);
    values.push_back(samples[i].value);
  }

  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::isinf(values[i])) {
      throw Error(ErrorCode::NonFiniteValue, "infinite value at hour " + std::to_string(i) + " of " +
                                                 path.string());
    }
  }

  std::size_t filled = 0;
  for (std::size_t i = 0; i < values.size();) {
    if (!std::isnan(values[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < values.size() && std::isnan(values[j])) ++j;
    if (i == 0 || j == values.size()) {
      throw Error(ErrorCode::NonFiniteValue,
                  "missing value at the series boundary (hour " + std::to_string(i) + ") of " + path.string());
    }
    const std::size_t run = j - i;
    if (run > kMaxInterpolatedGap) {
      throw Error(ErrorCode::TooManyGaps, std::to_string(run) + " consecutive missing hours from hour " +
                                              std::to_string(i) + " of " + path.string());
    }
    const double left = values[i - 1];
    const double right = values[j];
    for (std::size_t k = i; k < j; ++k) {
      const double frac = static_cast<double>(k - i + 1) / static_cast<double>(run + 1);
      values[k] = left + frac * (right - left);
    }
    filled += run;
    i = j;
  }

  std::string name = column.empty() ? table.header[find_time_column(table) == 0 ? 1 : 0] : std::string(column);
  return TimeSeries(std::move(name), unit, samples.front().time, std::move(values), filled);
}

void write_series(const std::filesystem::path& path, const TimeSeries& s) {
  std::ostringstream out;
  out << "timestamp," << s.name() << '\n';
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << format_timestamp(s.time_at(i)) << ',' << format_exact(s[i]) << '\n';
  }
  write_text_file(path, out.str());
}

std::string_view to_string(CapexUnit unit) {
  return unit == CapexUnit::EurPerKw ? "EUR/kW" : "EUR/kWh";
}

std::string technology_key(std::string_view name) {
  std::string out;
  bool space = false;
  for (char c : csv::trim(name)) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out.push_back(' ');
    space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

void CostTable::add(CostAssumptions row) {
  if (row.capex < 0.0) {
    throw Error(ErrorCode::NegativeCost, "negative capex for '" + row.technology + "' in " +
                                             std::to_string(row.year));
  }
  if (row.fom_pct && (*row.fom_pct < 0.0 || *row.fom_pct > 100.0)) {
    throw Error(ErrorCode::InvalidValue, "fom_pct outside [0, 100] for '" + row.technology + "'");
  }
  if (row.lifetime_years && *row.lifetime_years < 1) {
    throw Error(ErrorCode::InvalidLifetime, "lifetime below one year for '" + row.technology + "'");
  }
  if (row.efficiency && (*row.efficiency <= 0.0 || *row.efficiency > 1.0)) {
    throw Error(ErrorCode::InvalidValue, "efficiency outside (0, 1] for '" + row.technology + "'");
  }
  if (row.discount_rate < 0.0 || row.discount_rate >= 1.0) {
    throw Error(ErrorCode::InvalidValue, "discount rate outside [0, 1) for '" + row.technology + "'");
  }
  const std::string key = technology_key(row.technology);
  rows_[key][row.year] = std::move(row);
}

bool CostTable::contains(std::string_view technology) const {
  return rows_.count(technology_key(technology)) != 0;
}

std::vector<std::string> CostTable::technologies() const {
  std::vector<std::string> out;
  for (const auto& [key, _] : rows_) out.push_back(key);
  return out;
}

std::vector<int> CostTable::anchor_years(std::string_view technology) const {
  std::vector<int> out;
  if (auto it = rows_.find(technology_key(technology)); it != rows_.end()) {
    for (const auto& [year, _] : it->second) out.push_back(year);
  }
  return out;
}

CostAssumptions CostTable::at(std::string_view technology, int year) const {
  const auto it = rows_.find(technology_key(technology));
  if (it == rows_.end()) {
    throw Error(ErrorCode::UnknownTechnology, "no cost data for '" + std::string(technology) + "'");
  }
  const auto& anchors = it->second;
  if (auto exact = anchors.find(year); exact != anchors.end()) return exact->second;

  const auto upper = anchors.upper_bound(year);
  if (upper == anchors.begin() || upper == anchors.end()) {
    throw Error(ErrorCode::YearOutOfRange, "year " + std::to_string(year) + " outside the anchor years of '" +
                                               std::string(technology) + "'");
  }
  const auto lower = std::prev(upper);
  const CostAssumptions& lo = lower->second;
  const CostAssumptions& hi = upper->second;
  if (lo.capex_unit != hi.capex_unit) {
    throw Error(ErrorCode::InvalidValue, "capex unit changes between anchors of '" + std::string(technology) + "'");
  }
  const double w = static_cast<double>(year - lower->first) / static_cast<double>(upper->first - lower->first);
  auto lerp = [w](double a, double b) { return a + w * (b - a); };
  auto lerp_opt = [&](std::optional<double> a, std::optional<double> b) -> std::optional<double> {
    if (a && b) return lerp(*a, *b);
    return a;
  };

  CostAssumptions out = lo;
  out.year = year;
  out.capex = lerp(lo.capex, hi.capex);
  out.fom_pct = lerp_opt(lo.fom_pct, hi.fom_pct);
  out.efficiency = lerp_opt(lo.efficiency, hi.efficiency);
  out.discount_rate = lerp(lo.discount_rate, hi.discount_rate);
  // lifetime stays at the earlier anchor's integer value
  return out;
}

CostTable load_costs(const std::filesystem::path& path) {
  const csv::Table table = csv::read(path);
  const std::size_t c_tech = table.require("technology", path);
  const std::size_t c_year = table.require("year", path);
  const std::size_t c_capex = table.require("capex", path);
  const std::size_t c_unit = table.require("capex_unit", path);
  const std::size_t c_fom = table.require("fom_pct", path);
  const std::size_t c_life = table.require("lifetime_years", path);
  const std::size_t c_eff = table.require("efficiency", path);
  const auto c_rate = table.find("discount_rate");

  CostTable costs;
  for (const auto& row : table.rows) {
    if (row.size() < table.header.size()) {
      throw Error(ErrorCode::ParseError, "short row in " + path.string());
    }
    CostAssumptions a;
    a.technology = row[c_tech];
    const double year = csv::parse_number(row[c_year]);
    if (!std::isfinite(year) || year != std::floor(year)) {
      throw Error(ErrorCode::ParseError, "bad year '" + row[c_year] + "' in " + path.string());
    }
    a.year = static_cast<int>(year);
    a.capex = csv::parse_number(row[c_capex]);
    if (!std::isfinite(a.capex)) {
      throw Error(ErrorCode::ParseError, "missing capex for '" + a.technology + "' in " + path.string());
    }
    const std::string unit = technology_key(row[c_unit]);
    if (unit == "eur/kw" || unit == "eur/kwel" || unit == "eur_per_kw") {
      a.capex_unit = CapexUnit::EurPerKw;
    } else if (unit == "eur/kwh" || unit == "eur_per_kwh") {
      a.capex_unit = CapexUnit::EurPerKwh;
    } else {
      throw Error(ErrorCode::InvalidValue, "unknown capex unit '" + row[c_unit] + "'");
    }
    a.fom_pct = csv::parse_optional_number(row[c_fom]);
    if (auto life = csv::parse_optional_number(row[c_life])) {
      if (*life != std::floor(*life)) {
        throw Error(ErrorCode::InvalidLifetime, "non-integer lifetime for '" + a.technology + "'");
      }
      a.lifetime_years = static_cast<int>(*life);
    }
    a.efficiency = csv::parse_optional_number(row[c_eff]);
    if (c_rate) {
      if (auto r = csv::parse_optional_number(row[*c_rate])) a.discount_rate = *r;
    }
    costs.add(std::move(a));
  }
  return costs;
}

}  // namespace storalyze
