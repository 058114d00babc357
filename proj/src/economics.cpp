#include "storalyze/economics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "storalyze/error.hpp"

namespace storalyze {

std::string_view to_string(StorageTag tag) {
  switch (tag) {
    case StorageTag::Battery: return "battery";
    case StorageTag::ESFC: return "ESFC";
    case StorageTag::ESSE: return "ESSE";
    case StorageTag::ESSH: return "ESSH";
    case StorageTag::ESE: return "ESE";
    case StorageTag::ESH: return "ESH";
    case StorageTag::DirectH2: return "direct_h2";
    case StorageTag::IndirectH2: return "indirect_h2";
  }
  return "battery";
}

StorageTag parse_storage_tag(std::string_view text) {
  const std::string key = technology_key(text);
  if (key == "battery") return StorageTag::Battery;
  if (key == "esfc") return StorageTag::ESFC;
  if (key == "esse") return StorageTag::ESSE;
  if (key == "essh") return StorageTag::ESSH;
  if (key == "ese") return StorageTag::ESE;
  if (key == "esh") return StorageTag::ESH;
  if (key == "direct_h2" || key == "direct") return StorageTag::DirectH2;
  if (key == "indirect_h2" || key == "indirect") return StorageTag::IndirectH2;
  throw Error(ErrorCode::InvalidValue, "unknown storage pathway '" + std::string(text) + "'");
}

bool is_indirect(StorageTag tag) {
  return tag == StorageTag::ESE || tag == StorageTag::ESH || tag == StorageTag::IndirectH2;
}

StorageConfig::StorageConfig(StorageTag tag, PowerLink charging, std::optional<StoreUnit> store,
                             std::optional<PowerLink> discharging)
    : tag_(tag), charging_(std::move(charging)), store_(std::move(store)), discharging_(std::move(discharging)) {
  auto check = [](double c, std::string_view what) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw Error(ErrorCode::InvalidValue, std::string(what) + " capacity must be finite and >= 0");
    }
  };
  check(charging_.capacity_kw, "charging link");
  if (store_) check(store_->capacity_kwh, "store");
  if (discharging_) check(discharging_->capacity_kw, "discharging link");
}

double annuity_factor(double rate, int lifetime_years) {
  if (lifetime_years < 1) throw Error(ErrorCode::InvalidLifetime, "lifetime must be at least one year");
  if (!(rate >= 0.0 && rate < 1.0)) throw Error(ErrorCode::InvalidValue, "discount rate must be in [0, 1)");
  if (rate == 0.0) return 1.0 / lifetime_years;
  return rate / (1.0 - std::pow(1.0 + rate, -lifetime_years));
}

double component_annualized_cost(const CostTable& costs, std::string_view technology, double capacity,
                                 CapexUnit expected_unit, int year) {
  const CostAssumptions a = costs.at(technology, year);
  if (a.capex_unit != expected_unit) {
    throw Error(ErrorCode::InvalidValue, "'" + std::string(technology) + "' is priced in " +
                                             std::string(to_string(a.capex_unit)) + ", expected " +
                                             std::string(to_string(expected_unit)));
  }
  if (!a.lifetime_years || !a.fom_pct) {
    throw Error(ErrorCode::IncompleteCostData,
                "'" + std::string(technology) + "' lacks lifetime or FOM in the cost table");
  }
  if (capacity == 0.0) return 0.0;
  return capacity * a.capex * (annuity_factor(a.discount_rate, *a.lifetime_years) + *a.fom_pct / 100.0);
}

double annualized_cost(const StorageConfig& cfg, const CostTable& costs, int year) {
  double total = component_annualized_cost(costs, cfg.charging_link().technology, cfg.charging_link().capacity_kw,
                                           CapexUnit::EurPerKw, year);
  if (cfg.store() && cfg.include_store_cost()) {
    total += component_annualized_cost(costs, cfg.store()->technology, cfg.store()->capacity_kwh,
                                       CapexUnit::EurPerKwh, year);
  }
  if (cfg.discharging_link()) {
    total += component_annualized_cost(costs, cfg.discharging_link()->technology,
                                       cfg.discharging_link()->capacity_kw, CapexUnit::EurPerKw, year);
  }
  return total;
}

namespace {

double year_weight(const AnnualCashflow& f, const LcosOptions& opts) {
  double w = opts.step_years;
  if (opts.discount_base_year) {
    w *= std::pow(1.0 + opts.discount_rate, -static_cast<double>(f.year - *opts.discount_base_year));
  }
  return w;
}

const AnnualCashflow& latest(std::span<const AnnualCashflow> flows) {
  return *std::max_element(flows.begin(), flows.end(),
                           [](const AnnualCashflow& a, const AnnualCashflow& b) { return a.year < b.year; });
}

}  // namespace

std::optional<double> lcos(std::span<const AnnualCashflow> flows, LcosMode mode, const LcosOptions& opts) {
  if (flows.empty()) return std::nullopt;
  if (mode == LcosMode::Snapshot) {
    const auto& f = latest(flows);
    if (!(f.discharged_energy > 0.0)) return std::nullopt;
    return f.annualized_cost / f.discharged_energy;
  }
  double cost = 0.0, energy = 0.0;
  for (const auto& f : flows) {
    const double w = year_weight(f, opts);
    cost += w * f.annualized_cost;
    energy += w * f.discharged_energy;
  }
  if (!(energy > 0.0)) return std::nullopt;
  return cost / energy;
}

std::optional<double> unit_benefit(const AnnualCashflow& flow) {
  if (!(flow.discharged_energy > 0.0)) return std::nullopt;
  return (flow.revenue - flow.charging_cost) / flow.discharged_energy;
}

std::optional<double> unit_benefit(std::span<const AnnualCashflow> flows, const LcosOptions& opts) {
  double net = 0.0, energy = 0.0;
  for (const auto& f : flows) {
    const double w = year_weight(f, opts);
    net += w * (f.revenue - f.charging_cost);
    energy += w * f.discharged_energy;
  }
  if (!(energy > 0.0)) return std::nullopt;
  return net / energy;
}

double overall_price_spread(std::span<const PricedCycle> cycles) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& c : cycles) {
    if (!c.cycle.complete() || !c.buy_price || !c.sell_price) continue;
    sum += *c.sell_price - *c.buy_price;
    ++n;
  }
  if (n == 0) throw Error(ErrorCode::NoCycles, "overall price spread needs at least one complete cycle");
  return sum / static_cast<double>(n);
}

double price_spread_summary(std::span<const double> buy, std::span<const double> sell) {
  if (buy.empty() || sell.empty()) throw Error(ErrorCode::EmptyInput, "price spread needs buy and sell prices");
  const double mean_buy = std::accumulate(buy.begin(), buy.end(), 0.0) / static_cast<double>(buy.size());
  const double mean_sell = std::accumulate(sell.begin(), sell.end(), 0.0) / static_cast<double>(sell.size());
  return mean_sell - mean_buy;
}

AnnualCashflow cashflow_from_series(int year, double annualized_cost, const TimeSeries& price,
                                    const TimeSeries& weights, WeightSource source, const StorageEfficiencies& eff) {
  require_aligned(price, weights);
  if (!(eff.charge > 0.0 && eff.charge <= 1.0) || !(eff.discharge > 0.0 && eff.discharge <= 1.0)) {
    throw Error(ErrorCode::InvalidValue, "efficiencies must be in (0, 1]");
  }
  const HourlyEnergy e = hourly_energy(weights, source);
  AnnualCashflow f;
  f.year = year;
  f.annualized_cost = annualized_cost;
  for (std::size_t t = 0; t < price.size(); ++t) {
    f.discharged_energy += e.discharged[t];
    f.revenue += e.discharged[t] * eff.discharge * price[t];
    f.charging_cost += e.charged[t] / eff.charge * price[t];
  }
  return f;
}

}  // namespace storalyze
