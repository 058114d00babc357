#include "storalyze/pathways.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "storalyze/error.hpp"
#include "storalyze/ingest.hpp"

namespace storalyze {

namespace {

std::size_t slot(StorageTag pathway) {
  for (std::size_t i = 0; i < kHydrogenPathways.size(); ++i) {
    if (kHydrogenPathways[i] == pathway) return i;
  }
  throw Error(ErrorCode::InvalidValue, "'" + std::string(to_string(pathway)) + "' is not a hydrogen pathway");
}

bool close_enough(double a, double b, double tolerance) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-9});
  return std::abs(a - b) <= tolerance * scale;
}

}  // namespace

void HydrogenFlows::validate() const {
  const std::size_t n = electrolyzer_out.size();
  const std::pair<const char*, const std::vector<double>*> columns[] = {
      {"electrolyzer_out", &electrolyzer_out}, {"store_in", &store_in},   {"store_out", &store_out},
      {"fuelcell_in", &fuelcell_in},           {"sabatier_in", &sabatier_in}, {"h2_price", &h2_price},
      {"elec_price", &elec_price}};
  for (const auto& [name, v] : columns) {
    if (v->size() != n) {
      throw Error(ErrorCode::MisalignedSeries, std::string(name) + " has " + std::to_string(v->size()) +
                                                   " hours, electrolyzer_out has " + std::to_string(n));
    }
    const bool is_price = v == &h2_price || v == &elec_price;
    for (std::size_t t = 0; t < n; ++t) {
      if (!std::isfinite((*v)[t]) || (!is_price && (*v)[t] < 0.0)) {
        throw Error(ErrorCode::InvalidValue, std::string(name) + " is negative or non-finite at hour " +
                                                 std::to_string(t));
      }
    }
  }
  if (!store_level.empty() && store_level.size() != n) {
    throw Error(ErrorCode::MisalignedSeries, "store_level length differs from the flows");
  }
  if (gas_to_power_annual < 0.0 || gas_to_heat_annual < 0.0) {
    throw Error(ErrorCode::InvalidValue, "annual gas use must be non-negative");
  }
}

HydrogenFlows load_hydrogen_flows(const std::filesystem::path& path, double gas_to_power_annual,
                                  double gas_to_heat_annual) {
  auto column = [&](std::string_view name, Unit unit) {
    const TimeSeries s = load_series(path, name, unit);
    return std::vector<double>(s.values().begin(), s.values().end());
  };
  HydrogenFlows f;
  f.electrolyzer_out = column("electrolyzer_out", Unit::MWh);
  f.store_in = column("store_in", Unit::MWh);
  f.store_out = column("store_out", Unit::MWh);
  f.fuelcell_in = column("fuelcell_in", Unit::MWh);
  f.sabatier_in = column("sabatier_in", Unit::MWh);
  f.h2_price = column("h2_price", Unit::EurPerMwh);
  f.elec_price = column("elec_price", Unit::EurPerMwh);
  try {
    f.store_level = column("store_level", Unit::MWh);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::MissingColumn) throw;
  }
  f.gas_to_power_annual = gas_to_power_annual;
  f.gas_to_heat_annual = gas_to_heat_annual;
  f.validate();
  return f;
}

DirectIndirectSplit split_direct_indirect(const HydrogenFlows& f, SplitConvention convention,
                                          bool check_conservation, double tolerance) {
  f.validate();
  const std::size_t n = f.hours();
  DirectIndirectSplit out{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t t = 0; t < n; ++t) {
    const double produced = f.electrolyzer_out[t];
    const double from_store_to_sabatier = std::max(f.store_out[t] - f.fuelcell_in[t], 0.0);
    double indirect = 0.0;
    if (convention == SplitConvention::MaximalIndirect) {
      indirect = std::min(produced, f.sabatier_in[t]);
    } else {
      indirect = std::clamp(f.sabatier_in[t] - from_store_to_sabatier, 0.0, produced);
    }
    if (check_conservation) {
      if (!close_enough(produced, f.store_in[t] + indirect, tolerance) ||
          !close_enough(f.sabatier_in[t], f.store_out[t] - f.fuelcell_in[t] + indirect, tolerance)) {
        throw Error(ErrorCode::ConservationViolation,
                    "hydrogen balance does not close at hour " + std::to_string(t));
      }
    }
    out.indirect[t] = indirect;
    out.direct[t] = produced - indirect;
  }
  return out;
}

UseShares split_electricity_heating(double gas_to_power_annual, double gas_to_heat_annual) {
  if (gas_to_power_annual < 0.0 || gas_to_heat_annual < 0.0) {
    throw Error(ErrorCode::InvalidValue, "annual gas use must be non-negative");
  }
  const double total = gas_to_power_annual + gas_to_heat_annual;
  if (!(total > 0.0)) throw Error(ErrorCode::ZeroGasUse, "no gas use to split between power and heat");
  const double power = gas_to_power_annual / total;
  return {power, 1.0 - power};
}

const PathwayEntry& PathwayLedger::entry(StorageTag pathway) const { return entries[slot(pathway)]; }

std::optional<std::array<double, 5>> PathwayLedger::revenue_shares() const {
  const double total = total_revenue();
  if (total == 0.0) return std::nullopt;
  std::array<double, 5> shares{};
  for (std::size_t i = 0; i < entries.size(); ++i) shares[i] = entries[i].revenue / total;
  return shares;
}

std::optional<double> PathwayLedger::indirect_revenue_share() const {
  const double total = total_revenue();
  if (total == 0.0) return std::nullopt;
  return indirect_total / total;
}

std::optional<double> PathwayLedger::heating_revenue_share() const {
  const double total = total_revenue();
  if (total == 0.0) return std::nullopt;
  return (entry(StorageTag::ESSH).revenue + entry(StorageTag::ESH).revenue) / total;
}

AnnualCashflow PathwayLedger::cashflow(StorageTag group, int year, double annualized_cost) const {
  std::vector<StorageTag> members;
  switch (group) {
    case StorageTag::DirectH2: members = {StorageTag::ESFC, StorageTag::ESSE, StorageTag::ESSH}; break;
    case StorageTag::IndirectH2: members = {StorageTag::ESE, StorageTag::ESH}; break;
    default: members = {group}; break;
  }
  AnnualCashflow f;
  f.year = year;
  f.annualized_cost = annualized_cost;
  for (StorageTag p : members) {
    const PathwayEntry& e = entry(p);
    f.revenue += e.revenue;
    f.charging_cost += e.charging_cost;
    f.discharged_energy += e.energy;
  }
  return f;
}

AnnualCashflow PathwayLedger::cashflow_all(int year, double annualized_cost) const {
  AnnualCashflow f;
  f.year = year;
  f.annualized_cost = annualized_cost;
  for (const auto& e : entries) {
    f.revenue += e.revenue;
    f.charging_cost += e.charging_cost;
    f.discharged_energy += e.energy;
  }
  return f;
}

PathwayLedger revenue_breakdown(const HydrogenFlows& f, const ConversionEfficiencies& eff,
                                SplitConvention convention, bool check_conservation) {
  if (!(eff.electrolysis > 0.0 && eff.electrolysis <= 1.0) || !(eff.fuel_cell > 0.0 && eff.fuel_cell <= 1.0)) {
    throw Error(ErrorCode::InvalidValue, "conversion efficiencies must be in (0, 1]");
  }
  const DirectIndirectSplit split = split_direct_indirect(f, convention, check_conservation);
  const std::size_t n = f.hours();

  double fc_energy = 0.0, fc_revenue = 0.0;
  double store_sab_energy = 0.0, store_sab_revenue = 0.0;
  double ind_energy = 0.0, ind_revenue = 0.0;
  double direct_bill = 0.0, indirect_bill = 0.0;
  double peak_indirect = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double to_sab_from_store = std::max(f.sabatier_in[t] - split.indirect[t], 0.0);
    fc_energy += f.fuelcell_in[t];
    fc_revenue += f.fuelcell_in[t] * eff.fuel_cell * f.elec_price[t];
    store_sab_energy += to_sab_from_store;
    store_sab_revenue += to_sab_from_store * f.h2_price[t];
    ind_energy += split.indirect[t];
    ind_revenue += split.indirect[t] * f.h2_price[t];
    direct_bill += split.direct[t] / eff.electrolysis * f.elec_price[t];
    indirect_bill += split.indirect[t] / eff.electrolysis * f.elec_price[t];
    peak_indirect = std::max(peak_indirect, split.indirect[t]);
  }

  PathwayLedger ledger;
  const bool any_sabatier = store_sab_energy > 0.0 || ind_energy > 0.0;
  ledger.use_shares = any_sabatier || f.gas_to_power_annual + f.gas_to_heat_annual > 0.0
                          ? split_electricity_heating(f.gas_to_power_annual, f.gas_to_heat_annual)
                          : UseShares{0.0, 0.0};
  const UseShares& use = ledger.use_shares;

  // Direct charging cost is shared between fuel-cell and Sabatier offtake by
  // their energy; with no offtake at all it follows the gas-use split.
  const double direct_out = fc_energy + store_sab_energy;
  const double fc_cost_share = direct_out > 0.0 ? fc_energy / direct_out : 0.0;

  ledger.entries[slot(StorageTag::ESFC)] = {fc_energy, fc_revenue, direct_bill * fc_cost_share};
  const double sab_direct_bill = direct_bill * (1.0 - fc_cost_share);
  ledger.entries[slot(StorageTag::ESSE)] = {store_sab_energy * use.electricity, store_sab_revenue * use.electricity,
                                           sab_direct_bill * use.electricity};
  ledger.entries[slot(StorageTag::ESSH)] = {store_sab_energy * use.heating, store_sab_revenue * use.heating,
                                           sab_direct_bill * use.heating};
  ledger.entries[slot(StorageTag::ESE)] = {ind_energy * use.electricity, ind_revenue * use.electricity,
                                          indirect_bill * use.electricity};
  ledger.entries[slot(StorageTag::ESH)] = {ind_energy * use.heating, ind_revenue * use.heating,
                                          indirect_bill * use.heating};

  ledger.direct_total = fc_revenue + store_sab_revenue;
  ledger.indirect_total = ind_revenue;
  ledger.indirect_capacity_mw = peak_indirect / eff.electrolysis;

  if (!f.store_level.empty()) {
    ledger.direct_capacity_mwh = *std::max_element(f.store_level.begin(), f.store_level.end());
  } else {
    double level = 0.0, lo = 0.0, hi = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      level += f.store_in[t] - f.store_out[t];
      lo = std::min(lo, level);
      hi = std::max(hi, level);
    }
    ledger.direct_capacity_mwh = hi - lo;
  }
  return ledger;
}

}  // namespace storalyze
