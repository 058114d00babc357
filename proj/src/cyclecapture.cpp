#include "storalyze/cyclecapture.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "storalyze/error.hpp"

namespace storalyze {

namespace {

struct Point {
  std::size_t index;
  double value;
};

enum class State { Waiting, Charging, Discharging };

std::vector<Segment> run_state_machine(std::span<const Point> pts, double rise, double fall) {
  std::vector<Segment> segments;
  if (pts.size() < 2) return segments;

  State state = State::Waiting;
  std::size_t lo = 0, hi = 0;        // running extremes while waiting
  std::size_t start = 0, cand = 0;   // current leg origin and its running extreme

  auto emit = [&](Direction dir) {
    segments.push_back({dir, pts[start].index, pts[cand].index, std::abs(pts[cand].value - pts[start].value)});
  };

  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double v = pts[i].value;
    switch (state) {
      case State::Waiting:
        if (v > pts[hi].value) hi = i;
        if (v < pts[lo].value) lo = i;
        if (v - pts[lo].value >= rise) {
          state = State::Charging;
          start = lo;
          cand = i;
        } else if (pts[hi].value - v >= fall) {
          state = State::Discharging;
          start = hi;
          cand = i;
        }
        break;
      case State::Charging:
        if (v > pts[cand].value) {
          cand = i;
        } else if (pts[cand].value - v >= fall) {
          emit(Direction::Rising);
          state = State::Discharging;
          start = cand;
          cand = i;
        }
        break;
      case State::Discharging:
        if (v < pts[cand].value) {
          cand = i;
        } else if (v - pts[cand].value >= rise) {
          emit(Direction::Falling);
          state = State::Charging;
          start = cand;
          cand = i;
        }
        break;
    }
  }
  if (state == State::Charging) emit(Direction::Rising);
  if (state == State::Discharging) emit(Direction::Falling);
  return segments;
}

std::vector<Point> segment_points(const std::vector<Segment>& segments, std::span<const double> values) {
  std::vector<Point> pts;
  if (segments.empty()) return pts;
  pts.reserve(segments.size() + 1);
  pts.push_back({segments.front().start, values[segments.front().start]});
  for (const auto& s : segments) pts.push_back({s.end, values[s.end]});
  return pts;
}

}  // namespace

CycleThresholds CycleThresholds::defaults_for(SeriesKind kind) {
  const double t = kind == SeriesKind::Price ? 0.05 : 0.10;
  return {0.0, t, t};
}

void CycleThresholds::validate() const {
  if (!(filter >= 0.0) || !std::isfinite(filter)) {
    throw Error(ErrorCode::InvalidValue, "filter threshold must be >= 0");
  }
  if (!(rise > 0.0 && rise <= 1.0)) throw Error(ErrorCode::InvalidValue, "rise threshold must be in (0, 1]");
  if (!(fall > 0.0 && fall <= 1.0)) throw Error(ErrorCode::InvalidValue, "fall threshold must be in (0, 1]");
}

std::vector<Segment> find_segments(std::span<const double> normalized, const CycleThresholds& th) {
  th.validate();
  std::vector<Point> pts(normalized.size());
  for (std::size_t i = 0; i < normalized.size(); ++i) pts[i] = {i, normalized[i]};
  if (th.filter > 0.0) {
    pts = segment_points(run_state_machine(pts, th.filter, th.filter), normalized);
  }
  return run_state_machine(pts, th.rise, th.fall);
}

std::vector<CycleRecord> detect_cycles(std::span<const double> normalized, const CycleThresholds& th) {
  const std::vector<Segment> segments = find_segments(normalized, th);
  std::vector<CycleRecord> cycles;
  std::size_t i = 0;
  if (!segments.empty() && segments.front().direction == Direction::Falling) {
    const auto& s = segments.front();
    cycles.push_back({std::nullopt, Leg{s.start, s.end, s.depth}});
    i = 1;
  }
  // directions alternate, so from here on rising legs sit at i, i+2, ...
  for (; i < segments.size(); i += 2) {
    const auto& up = segments[i];
    CycleRecord rec{Leg{up.start, up.end, up.depth}, std::nullopt};
    if (i + 1 < segments.size()) {
      const auto& down = segments[i + 1];
      rec.discharge = Leg{down.start, down.end, down.depth};
    }
    cycles.push_back(rec);
  }
  return cycles;
}

std::vector<CycleRecord> detect_cycles(const NormalizedSeries& s, const CycleThresholds& th) {
  return detect_cycles(std::span<const double>(s.values), th);
}

std::size_t cycle_frequency(std::span<const CycleRecord> cycles, bool include_partial) {
  if (include_partial) return cycles.size();
  return static_cast<std::size_t>(
      std::count_if(cycles.begin(), cycles.end(), [](const CycleRecord& c) { return c.complete(); }));
}

HourlyEnergy hourly_energy(const TimeSeries& weights, WeightSource source) {
  const std::size_t n = weights.size();
  HourlyEnergy e{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  if (source == WeightSource::Flow) {
    for (std::size_t t = 0; t < n; ++t) {
      e.charged[t] = std::max(weights[t], 0.0);
      e.discharged[t] = std::max(-weights[t], 0.0);
    }
  } else {
    for (std::size_t t = 1; t < n; ++t) {
      const double delta = weights[t] - weights[t - 1];
      e.charged[t] = std::max(delta, 0.0);
      e.discharged[t] = std::max(-delta, 0.0);
    }
  }
  return e;
}

namespace {

struct WeightedPrice {
  double price;
  double energy;
};

WeightedPrice leg_price(const Leg& leg, const TimeSeries& price, const std::vector<double>& energy,
                        WeightSource source) {
  const std::size_t first = source == WeightSource::Flow ? leg.start : leg.start + 1;
  const std::size_t last = leg.end;
  double weighted = 0.0, total = 0.0, plain = 0.0;
  std::size_t hours = 0;
  for (std::size_t t = first; t <= last && t < price.size(); ++t) {
    weighted += energy[t] * price[t];
    total += energy[t];
    plain += price[t];
    ++hours;
  }
  if (total > 0.0) return {weighted / total, total};
  if (hours == 0) return {price[std::min(leg.end, price.size() - 1)], 0.0};
  return {plain / static_cast<double>(hours), 0.0};
}

}  // namespace

std::vector<PricedCycle> attach_prices(std::span<const CycleRecord> cycles, const TimeSeries& price,
                                       const TimeSeries& weights, WeightSource source) {
  require_aligned(price, weights);
  const HourlyEnergy energy = hourly_energy(weights, source);
  std::vector<PricedCycle> out;
  out.reserve(cycles.size());
  for (const auto& c : cycles) {
    const std::size_t last = std::max(c.charge ? c.charge->end : 0, c.discharge ? c.discharge->end : 0);
    if (last >= price.size()) {
      throw Error(ErrorCode::MisalignedSeries,
                  "cycle index " + std::to_string(last) + " beyond price series of " + std::to_string(price.size()) + " h");
    }
    PricedCycle pc{c, std::nullopt, std::nullopt, 0.0, 0.0};
    if (c.charge) {
      const auto wp = leg_price(*c.charge, price, energy.charged, source);
      pc.buy_price = wp.price;
      pc.bought_energy = wp.energy;
    }
    if (c.discharge) {
      const auto wp = leg_price(*c.discharge, price, energy.discharged, source);
      pc.sell_price = wp.price;
      pc.sold_energy = wp.energy;
    }
    out.push_back(pc);
  }
  return out;
}

}  // namespace storalyze
