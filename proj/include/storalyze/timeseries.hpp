#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace storalyze {

enum class Unit { EurPerMwh, MWh, MW, Dimensionless };

std::string_view to_string(Unit unit);
/// Accepts the canonical names (EUR_per_MWh, MWh, MW, dimensionless), case-insensitive.
Unit parse_unit(std::string_view text);

using Timestamp = std::chrono::sys_seconds;

/// ISO-8601 date-time: `YYYY-MM-DD[T| ]HH:MM[:SS][Z|+HH:MM|-HH:MM]`, or a bare date.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

/// Uniformly hourly, unit-tagged series. Immutable once constructed; all
/// values are finite and there are at least two samples.
class TimeSeries {
 public:
  TimeSeries(std::string name, Unit unit, Timestamp start, std::vector<double> values,
             std::size_t interpolated_count = 0);

  const std::string& name() const noexcept { return name_; }
  Unit unit() const noexcept { return unit_; }
  Timestamp start() const noexcept { return start_; }
  int year() const;
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  Timestamp time_at(std::size_t i) const { return start_ + std::chrono::hours(i); }

  /// Hours filled by linear interpolation during loading.
  std::size_t interpolated_count() const noexcept { return interpolated_; }

  /// 8760 or 8784 samples.
  bool is_annual() const noexcept;
  /// Throws TooShort unless is_annual().
  void require_annual() const;

 private:
  std::string name_;
  Unit unit_;
  Timestamp start_;
  std::vector<double> values_;
  std::size_t interpolated_ = 0;
};

/// Min-max rescaling of a series onto [0, 1].
struct NormalizedSeries {
  std::shared_ptr<const TimeSeries> source;
  std::vector<double> values;
  double min = 0.0;
  double max = 0.0;
  /// Set when max == min; values are then all zero.
  bool constant = false;

  std::size_t size() const noexcept { return values.size(); }
};

NormalizedSeries normalize_minmax(const TimeSeries& s);
NormalizedSeries normalize_minmax(std::shared_ptr<const TimeSeries> s);
/// Same rescaling on a bare sequence (no source attached).
NormalizedSeries normalize_minmax(std::span<const double> values);

void require_aligned(const TimeSeries& a, const TimeSeries& b);

}  // namespace storalyze
