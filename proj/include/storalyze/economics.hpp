#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "storalyze/cyclecapture.hpp"
#include "storalyze/ingest.hpp"
#include "storalyze/timeseries.hpp"

namespace storalyze {

/// Storage technology or hydrogen working pathway a configuration stands for.
enum class StorageTag {
  Battery,
  ESFC,  ///< electrolysis - store - fuel cell
  ESSE,  ///< electrolysis - store - Sabatier - electricity
  ESSH,  ///< electrolysis - store - Sabatier - heating
  ESE,   ///< electrolysis - Sabatier - store - electricity
  ESH,   ///< electrolysis - Sabatier - store - heating
  DirectH2,
  IndirectH2,
};

std::string_view to_string(StorageTag tag);
StorageTag parse_storage_tag(std::string_view text);
/// ESE, ESH and the indirect aggregate route hydrogen straight into the
/// Sabatier process, so no hydrogen store is paid for.
bool is_indirect(StorageTag tag);

struct PowerLink {
  std::string technology;
  double capacity_kw = 0.0;
};

struct StoreUnit {
  std::string technology;
  double capacity_kwh = 0.0;
};

class StorageConfig {
 public:
  StorageConfig(StorageTag tag, PowerLink charging, std::optional<StoreUnit> store = std::nullopt,
                std::optional<PowerLink> discharging = std::nullopt);

  StorageTag tag() const noexcept { return tag_; }
  const PowerLink& charging_link() const noexcept { return charging_; }
  const std::optional<StoreUnit>& store() const noexcept { return store_; }
  const std::optional<PowerLink>& discharging_link() const noexcept { return discharging_; }
  bool include_store_cost() const noexcept { return !is_indirect(tag_); }

 private:
  StorageTag tag_;
  PowerLink charging_;
  std::optional<StoreUnit> store_;
  std::optional<PowerLink> discharging_;
};

/// Capital recovery factor r / (1 - (1 + r)^-n); 1/n when r = 0.
double annuity_factor(double rate, int lifetime_years);

/// capacity * capex * (annuity + FOM) for one component. `capacity` is in kW
/// or kWh and must match the technology's capex unit.
double component_annualized_cost(const CostTable& costs, std::string_view technology, double capacity,
                                 CapexUnit expected_unit, int year);

/// Sum over the charging link, the store (unless the pathway skips it) and
/// the discharging link, in EUR per year.
double annualized_cost(const StorageConfig& cfg, const CostTable& costs, int year);

struct AnnualCashflow {
  int year = 0;
  double annualized_cost = 0.0;   ///< EUR/yr
  double revenue = 0.0;           ///< EUR/yr
  double charging_cost = 0.0;     ///< EUR/yr
  double discharged_energy = 0.0; ///< MWh/yr leaving the store, before discharge efficiency
};

enum class LcosMode { Cumulative, Snapshot };

struct LcosOptions {
  /// Each modelled year stands for this many calendar years.
  double step_years = 5.0;
  /// When set, each planning year is additionally discounted to this base
  /// year at `discount_rate`.
  std::optional<int> discount_base_year;
  double discount_rate = 0.07;
};

/// Levelized cost of storage in EUR/MWh. Cumulative sums every flow given
/// (the caller passes the years up to the one of interest); snapshot uses
/// the latest year alone. Empty when no energy was discharged.
std::optional<double> lcos(std::span<const AnnualCashflow> flows, LcosMode mode, const LcosOptions& opts = {});

/// (revenue - charging cost) per MWh discharged; empty when nothing was discharged.
std::optional<double> unit_benefit(const AnnualCashflow& flow);
/// Cumulative form over several planning years, weighted like lcos().
std::optional<double> unit_benefit(std::span<const AnnualCashflow> flows, const LcosOptions& opts = {});

/// Mean sell-minus-buy price over the complete cycles. Throws NoCycles.
double overall_price_spread(std::span<const PricedCycle> cycles);

/// mean(sell) - mean(buy). Throws EmptyInput.
double price_spread_summary(std::span<const double> buy, std::span<const double> sell);

struct StorageEfficiencies {
  double charge = 1.0;
  double discharge = 1.0;
};

/// Builds one year's cash flow from hourly prices and the store's energy
/// movements: charging buys energy / eta_charge at the hour's price,
/// discharging sells energy * eta_discharge.
AnnualCashflow cashflow_from_series(int year, double annualized_cost, const TimeSeries& price,
                                    const TimeSeries& weights, WeightSource source,
                                    const StorageEfficiencies& eff = {});

}  // namespace storalyze
