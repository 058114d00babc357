#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "storalyze/economics.hpp"

namespace storalyze {

/// One year of hourly hydrogen-bus flows (MWh of H2 per hour) with the
/// hydrogen and electricity prices at the node.
struct HydrogenFlows {
  std::vector<double> electrolyzer_out;
  std::vector<double> store_in;
  std::vector<double> store_out;
  std::vector<double> fuelcell_in;
  std::vector<double> sabatier_in;
  std::vector<double> h2_price;
  std::vector<double> elec_price;
  /// Annual gas use of the methane bus, MWh/yr.
  double gas_to_power_annual = 0.0;
  double gas_to_heat_annual = 0.0;
  /// Optional store filling level (MWh); used for the direct capacity.
  std::vector<double> store_level;

  std::size_t hours() const noexcept { return electrolyzer_out.size(); }
  /// Throws MisalignedSeries on length mismatch and InvalidValue on negative
  /// or non-finite flows.
  void validate() const;
};

/// Wide CSV with columns electrolyzer_out, store_in, store_out, fuelcell_in,
/// sabatier_in, h2_price, elec_price and optionally store_level.
HydrogenFlows load_hydrogen_flows(const std::filesystem::path& path, double gas_to_power_annual,
                                  double gas_to_heat_annual);

/// How electrolyser output is attributed when hydrogen is not labelled.
enum class SplitConvention {
  /// Sabatier draws on fresh electrolyser output first: indirect = min(electrolyser, Sabatier).
  MaximalIndirect,
  /// Sabatier draws on the store first; only the remainder counts as indirect.
  MaximalDirect,
};

struct DirectIndirectSplit {
  std::vector<double> direct;
  std::vector<double> indirect;
};

/// Per-hour split of electrolyser output. With `check_conservation`, both
///   electrolyser = store_in + indirect
///   sabatier     = (store_out - fuelcell_in) + indirect
/// must hold within `tolerance` relative, else ConservationViolation.
DirectIndirectSplit split_direct_indirect(const HydrogenFlows& f,
                                          SplitConvention convention = SplitConvention::MaximalIndirect,
                                          bool check_conservation = true, double tolerance = 1e-6);

struct UseShares {
  double electricity;
  double heating;
};

/// Annual power/heat split of gas use; throws ZeroGasUse when both are zero.
UseShares split_electricity_heating(double gas_to_power_annual, double gas_to_heat_annual);

struct PathwayEntry {
  double energy = 0.0;         ///< MWh/yr
  double revenue = 0.0;        ///< EUR/yr
  double charging_cost = 0.0;  ///< EUR/yr
};

inline constexpr std::array<StorageTag, 5> kHydrogenPathways{StorageTag::ESFC, StorageTag::ESSE, StorageTag::ESSH,
                                                            StorageTag::ESE, StorageTag::ESH};

struct PathwayLedger {
  std::array<PathwayEntry, 5> entries{};  ///< in kHydrogenPathways order
  double direct_total = 0.0;              ///< revenue of ESFC + ESSE + ESSH, EUR/yr
  double indirect_total = 0.0;            ///< revenue of ESE + ESH, EUR/yr
  double direct_capacity_mwh = 0.0;       ///< hydrogen store volume
  double indirect_capacity_mw = 0.0;      ///< electrolyser power feeding the Sabatier process directly
  UseShares use_shares{0.0, 0.0};

  const PathwayEntry& entry(StorageTag pathway) const;
  double total_revenue() const noexcept { return direct_total + indirect_total; }
  /// Revenue share per pathway; empty when there is no revenue at all.
  std::optional<std::array<double, 5>> revenue_shares() const;
  std::optional<double> indirect_revenue_share() const;
  /// ESSH + ESH revenue over the total.
  std::optional<double> heating_revenue_share() const;

  /// Aggregate one pathway, DirectH2 or IndirectH2 into a cash flow.
  AnnualCashflow cashflow(StorageTag group, int year, double annualized_cost) const;
  /// All five pathways together.
  AnnualCashflow cashflow_all(int year, double annualized_cost) const;
};

struct ConversionEfficiencies {
  double electrolysis = 0.8;
  double fuel_cell = 0.58;
};

/// Attributes hydrogen revenue, energy and charging cost to the five
/// pathways. Hydrogen sold to the Sabatier process earns the hydrogen price;
/// fuel-cell output earns the electricity price. Charging cost is the
/// electrolyser's electricity bill, attributed hour by hour to the direct or
/// indirect share and then by energy share within each group.
PathwayLedger revenue_breakdown(const HydrogenFlows& f, const ConversionEfficiencies& eff = {},
                                SplitConvention convention = SplitConvention::MaximalIndirect,
                                bool check_conservation = true);

}  // namespace storalyze
