#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "storalyze/timeseries.hpp"

namespace storalyze {

enum class SeriesKind { Storage, Price };

/// Thresholds in normalized units. `filter` is a pre-pass: excursions smaller
/// than it are merged into their neighbours before charge/discharge legs are
/// sought. A leg counts as charging once it rises by `rise` and as
/// discharging once it falls by `fall`.
struct CycleThresholds {
  double filter = 0.0;
  double rise = 0.10;
  double fall = 0.10;

  /// 10% for filling levels and generation, 5% for prices.
  static CycleThresholds defaults_for(SeriesKind kind);

  /// Throws InvalidValue unless filter >= 0 and rise, fall in (0, 1].
  void validate() const;
};

enum class Direction { Rising, Falling };

/// A maximal monotone-after-hysteresis stretch between two turning points.
struct Segment {
  Direction direction;
  std::size_t start;
  std::size_t end;
  double depth;
};

struct Leg {
  std::size_t start;
  std::size_t end;
  double depth;
};

/// One charge leg followed by the next discharge leg. Either leg may be
/// missing at the series boundaries: a series that opens mid-discharge yields
/// a discharge-only record, a trailing unmatched charge yields a charge-only
/// record.
struct CycleRecord {
  std::optional<Leg> charge;
  std::optional<Leg> discharge;

  bool complete() const noexcept { return charge.has_value() && discharge.has_value(); }
};

/// The turning-point state machine. Starts in a waiting state and commits to
/// charging or discharging once the first threshold is crossed; thereafter a
/// reversal is confirmed only when the move away from the running extreme
/// reaches the opposite threshold, so smaller wiggles stay inside the current
/// leg. Every returned segment meets its threshold and directions alternate.
std::vector<Segment> find_segments(std::span<const double> normalized, const CycleThresholds& th);

std::vector<CycleRecord> detect_cycles(std::span<const double> normalized, const CycleThresholds& th);
std::vector<CycleRecord> detect_cycles(const NormalizedSeries& s, const CycleThresholds& th);

/// Number of complete cycles (plus boundary records when include_partial).
std::size_t cycle_frequency(std::span<const CycleRecord> cycles, bool include_partial = false);

/// How per-hour energy is read from the weighting series.
enum class WeightSource {
  /// Net charging power, MW over one hour: positive charges, negative discharges.
  /// A leg [start, end] covers hours start..end inclusive.
  Flow,
  /// Filling level at the end of each hour; hour t moved level[t] - level[t-1].
  /// A leg [start, end] covers hours start+1..end.
  LevelIncrements,
};

struct HourlyEnergy {
  std::vector<double> charged;
  std::vector<double> discharged;
};

HourlyEnergy hourly_energy(const TimeSeries& weights, WeightSource source);

struct PricedCycle {
  CycleRecord cycle;
  std::optional<double> buy_price;
  std::optional<double> sell_price;
  double bought_energy = 0.0;
  double sold_energy = 0.0;
};

/// Energy-weighted mean price over each leg. A leg whose weights sum to zero
/// falls back to the plain mean price and reports zero energy.
std::vector<PricedCycle> attach_prices(std::span<const CycleRecord> cycles, const TimeSeries& price,
                                       const TimeSeries& weights, WeightSource source);

}  // namespace storalyze
