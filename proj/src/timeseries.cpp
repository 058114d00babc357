#include "storalyze/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "storalyze/error.hpp"

namespace storalyze {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

int parse_digits(std::string_view text, std::size_t pos, std::size_t count) {
  if (pos + count > text.size()) {
    throw Error(ErrorCode::ParseError, "truncated timestamp '" + std::string(text) + "'");
  }
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + count, value);
  if (ec != std::errc{} || ptr != text.data() + pos + count) {
    throw Error(ErrorCode::ParseError, "bad timestamp '" + std::string(text) + "'");
  }
  return value;
}

void expect_char(std::string_view text, std::size_t pos, char c) {
  if (pos >= text.size() || text[pos] != c) {
    throw Error(ErrorCode::ParseError, "bad timestamp '" + std::string(text) + "'");
  }
}

}  // namespace

std::string_view to_string(Unit unit) {
  switch (unit) {
    case Unit::EurPerMwh: return "EUR_per_MWh";
    case Unit::MWh: return "MWh";
    case Unit::MW: return "MW";
    case Unit::Dimensionless: return "dimensionless";
  }
  return "dimensionless";
}

Unit parse_unit(std::string_view text) {
  const std::string t = lower(text);
  if (t == "eur_per_mwh" || t == "eur/mwh") return Unit::EurPerMwh;
  if (t == "mwh") return Unit::MWh;
  if (t == "mw") return Unit::MW;
  if (t == "dimensionless" || t == "1" || t == "") return Unit::Dimensionless;
  throw Error(ErrorCode::InvalidValue, "unknown unit '" + std::string(text) + "'");
}

Timestamp parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);

  const int y = parse_digits(text, 0, 4);
  expect_char(text, 4, '-');
  const int mo = parse_digits(text, 5, 2);
  expect_char(text, 7, '-');
  const int d = parse_digits(text, 8, 2);
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) {
    throw Error(ErrorCode::ParseError, "invalid date '" + std::string(text) + "'");
  }
  int hh = 0, mm = 0, ss = 0;
  std::size_t pos = 10;
  if (pos < text.size()) {
    if (text[pos] != 'T' && text[pos] != ' ') {
      throw Error(ErrorCode::ParseError, "bad timestamp '" + std::string(text) + "'");
    }
    hh = parse_digits(text, pos + 1, 2);
    expect_char(text, pos + 3, ':');
    mm = parse_digits(text, pos + 4, 2);
    pos += 6;
    if (pos < text.size() && text[pos] == ':') {
      ss = parse_digits(text, pos + 1, 2);
      pos += 3;
      // fractional seconds are accepted and dropped
      if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      }
    }
  }
  int offset_minutes = 0;
  if (pos < text.size()) {
    if (text[pos] == 'Z') {
      ++pos;
    } else if (text[pos] == '+' || text[pos] == '-') {
      const int sign = text[pos] == '-' ? -1 : 1;
      const int oh = parse_digits(text, pos + 1, 2);
      expect_char(text, pos + 3, ':');
      const int om = parse_digits(text, pos + 4, 2);
      offset_minutes = sign * (oh * 60 + om);
      pos += 6;
    }
  }
  if (pos != text.size() || hh > 23 || mm > 59 || ss > 60) {
    throw Error(ErrorCode::ParseError, "bad timestamp '" + std::string(text) + "'");
  }
  return sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss} - minutes{offset_minutes};
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const auto day_point = floor<days>(ts);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{ts - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

TimeSeries::TimeSeries(std::string name, Unit unit, Timestamp start, std::vector<double> values,
                       std::size_t interpolated_count)
    : name_(std::move(name)),
      unit_(unit),
      start_(start),
      values_(std::move(values)),
      interpolated_(interpolated_count) {
  if (values_.size() < 2) {
    throw Error(ErrorCode::TooShort, "series '" + name_ + "' needs at least 2 samples");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::NonFiniteValue,
                  "series '" + name_ + "' has a non-finite value at hour " + std::to_string(i));
    }
  }
}

int TimeSeries::year() const {
  const std::chrono::year_month_day ymd{std::chrono::floor<std::chrono::days>(start_)};
  return static_cast<int>(ymd.year());
}

bool TimeSeries::is_annual() const noexcept {
  return values_.size() == 8760 || values_.size() == 8784;
}

void TimeSeries::require_annual() const {
  if (!is_annual()) {
    throw Error(ErrorCode::TooShort, "series '" + name_ + "' has " + std::to_string(values_.size()) +
                                         " samples; an annual series needs 8760 or 8784");
  }
}

NormalizedSeries normalize_minmax(std::span<const double> values) {
  NormalizedSeries out;
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  out.min = *lo;
  out.max = *hi;
  out.values.resize(values.size(), 0.0);
  if (out.max > out.min) {
    const double range = out.max - out.min;
    std::transform(values.begin(), values.end(), out.values.begin(),
                   [&](double x) { return (x - out.min) / range; });
  } else {
    out.constant = true;
  }
  return out;
}

NormalizedSeries normalize_minmax(std::shared_ptr<const TimeSeries> s) {
  NormalizedSeries out = normalize_minmax(s->values());
  out.source = std::move(s);
  return out;
}

NormalizedSeries normalize_minmax(const TimeSeries& s) {
  return normalize_minmax(std::make_shared<const TimeSeries>(s));
}

void require_aligned(const TimeSeries& a, const TimeSeries& b) {
  if (a.size() != b.size() || a.start() != b.start()) {
    throw Error(ErrorCode::MisalignedSeries, "series '" + a.name() + "' (" + std::to_string(a.size()) +
                                                 " h from " + format_timestamp(a.start()) + ") and '" +
                                                 b.name() + "' (" + std::to_string(b.size()) + " h from " +
                                                 format_timestamp(b.start()) + ") are not aligned");
  }
}

}  // namespace storalyze
