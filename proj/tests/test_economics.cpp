#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "expect_error.hpp"
#include "fixtures.hpp"
#include "storalyze/economics.hpp"

using namespace storalyze;

namespace {

const CostTable& costs() {
  static const CostTable t = load_costs(STORALYZE_SOURCE_DIR "/data/costs.csv");
  return t;
}

// closed form, written out independently of the library
double crf(double r, int n) { return r / (1.0 - 1.0 / std::pow(1.0 + r, n)); }

StorageConfig battery(double store_kwh, double inverter_kw) {
  return StorageConfig(StorageTag::Battery, PowerLink{"battery inverter", inverter_kw},
                       StoreUnit{"battery storage", store_kwh});
}

AnnualCashflow flow(int year, double cost, double revenue, double charging, double energy) {
  return AnnualCashflow{year, cost, revenue, charging, energy};
}

TimeSeries series(std::vector<double> v) { return TimeSeries("x", Unit::MWh, Timestamp{}, std::move(v)); }

}  // namespace

TEST(Annuity, KnownValues) {
  EXPECT_DOUBLE_EQ(annuity_factor(0.0, 10), 0.1);
  EXPECT_NEAR(annuity_factor(0.07, 1), 1.07, 1e-12);
  EXPECT_NEAR(annuity_factor(0.07, 25), 0.08581, 1e-5);
  EXPECT_NEAR(annuity_factor(0.07, 25), crf(0.07, 25), 1e-15);
}

TEST(Annuity, InvalidInputs) {
  EXPECT_ERROR_CODE(annuity_factor(0.07, 0), ErrorCode::InvalidLifetime);
  EXPECT_ERROR_CODE(annuity_factor(-0.01, 10), ErrorCode::InvalidValue);
  EXPECT_ERROR_CODE(annuity_factor(1.0, 10), ErrorCode::InvalidValue);
}

TEST(AnnualizedCost, BatteryExample) {
  const double store = 1000.0 * 75.0 * crf(0.07, 20);
  const double inverter = 1000.0 * 60.0 * (crf(0.07, 20) + 0.002);
  EXPECT_NEAR(store, 7079.5, 0.1);
  EXPECT_NEAR(inverter, 5783.5, 0.2);
  const double total = annualized_cost(battery(1000.0, 1000.0), costs(), 2050);
  EXPECT_NEAR(total, store + inverter, 1e-9);
  EXPECT_NEAR(total, 12863.0, 1.0);
}

TEST(AnnualizedCost, IndirectPathwaySkipsTheStore) {
  const StorageConfig ese(StorageTag::ESE, PowerLink{"electrolysis", 1000.0},
                          StoreUnit{"H2 storage underground", 1e6});
  EXPECT_FALSE(ese.include_store_cost());
  EXPECT_NEAR(annualized_cost(ese, costs(), 2050), 500000.0 * (crf(0.07, 25) + 0.05), 1e-6);
  EXPECT_NEAR(annualized_cost(ese, costs(), 2050), 67905.0, 5.0);
}

TEST(AnnualizedCost, StoreFlagPerTag) {
  for (StorageTag t : {StorageTag::Battery, StorageTag::ESFC, StorageTag::ESSE, StorageTag::ESSH,
                       StorageTag::DirectH2}) {
    EXPECT_TRUE(StorageConfig(t, PowerLink{"electrolysis", 1.0}).include_store_cost()) << to_string(t);
  }
  for (StorageTag t : {StorageTag::ESE, StorageTag::ESH, StorageTag::IndirectH2}) {
    EXPECT_FALSE(StorageConfig(t, PowerLink{"electrolysis", 1.0}).include_store_cost()) << to_string(t);
  }
}

TEST(AnnualizedCost, ZeroCapacityCostsNothing) {
  EXPECT_EQ(annualized_cost(battery(0.0, 0.0), costs(), 2050), 0.0);
}

TEST(AnnualizedCost, ErrorCases) {
  const StorageConfig unknown(StorageTag::Battery, PowerLink{"perpetual motion", 1.0});
  EXPECT_ERROR_CODE(annualized_cost(unknown, costs(), 2050), ErrorCode::UnknownTechnology);
  // store technology priced per kW is a unit mismatch
  const StorageConfig swapped(StorageTag::Battery, PowerLink{"battery storage", 1.0});
  EXPECT_ERROR_CODE(annualized_cost(swapped, costs(), 2050), ErrorCode::InvalidValue);
  // generation rows carry no lifetime or FOM
  const StorageConfig wind(StorageTag::Battery, PowerLink{"onshore wind", 1.0});
  EXPECT_ERROR_CODE(annualized_cost(wind, costs(), 2050), ErrorCode::IncompleteCostData);
  EXPECT_ERROR_CODE(battery(-1.0, 1.0), ErrorCode::InvalidValue);
}

TEST(StorageTags, RoundTrip) {
  for (StorageTag t : {StorageTag::Battery, StorageTag::ESFC, StorageTag::ESSE, StorageTag::ESSH, StorageTag::ESE,
                       StorageTag::ESH, StorageTag::DirectH2, StorageTag::IndirectH2}) {
    EXPECT_EQ(parse_storage_tag(to_string(t)), t);
  }
  EXPECT_ERROR_CODE(parse_storage_tag("flywheel"), ErrorCode::InvalidValue);
}

TEST(Lcos, SnapshotOfBatteryExample) {
  const double cost = annualized_cost(battery(1000.0, 1000.0), costs(), 2050);
  const std::vector<AnnualCashflow> f{flow(2050, cost, 0, 0, 300.0)};
  ASSERT_TRUE(lcos(f, LcosMode::Snapshot));
  EXPECT_NEAR(*lcos(f, LcosMode::Snapshot), 42.88, 0.01);
  EXPECT_NEAR(*lcos(f, LcosMode::Cumulative), 42.88, 0.01);
}

TEST(Lcos, DuplicatedYearsKeepTheRatio) {
  const std::vector<AnnualCashflow> f{flow(2045, 12863.0, 0, 0, 300.0), flow(2050, 12863.0, 0, 0, 300.0)};
  EXPECT_NEAR(*lcos(f, LcosMode::Cumulative), 12863.0 / 300.0, 1e-12);
}

TEST(Lcos, CumulativeWeightsEveryYear) {
  const std::vector<AnnualCashflow> f{flow(2040, 100.0, 0, 0, 10.0), flow(2045, 300.0, 0, 0, 10.0),
                                      flow(2050, 200.0, 0, 0, 20.0)};
  EXPECT_NEAR(*lcos(f, LcosMode::Cumulative), 600.0 / 40.0, 1e-12);
  EXPECT_NEAR(*lcos(f, LcosMode::Snapshot), 10.0, 1e-12);
  LcosOptions disc;
  disc.discount_base_year = 2040;
  const double w1 = 1.0, w2 = std::pow(1.07, -5), w3 = std::pow(1.07, -10);
  EXPECT_NEAR(*lcos(f, LcosMode::Cumulative, disc), (100 * w1 + 300 * w2 + 200 * w3) / (10 * w1 + 10 * w2 + 20 * w3),
              1e-12);
}

TEST(Lcos, ZeroDischargeIsUndefined) {
  const std::vector<AnnualCashflow> f{flow(2050, 1000.0, 0, 0, 0.0)};
  EXPECT_FALSE(lcos(f, LcosMode::Snapshot));
  EXPECT_FALSE(lcos(f, LcosMode::Cumulative));
  EXPECT_FALSE(lcos(std::vector<AnnualCashflow>{}, LcosMode::Cumulative));
}

TEST(Lcos, HomogeneousInCapacityAndEnergy) {
  for (double s : {0.5, 3.0, 17.0}) {
    const double c1 = annualized_cost(battery(1000.0, 400.0), costs(), 2040);
    const double cs = annualized_cost(battery(1000.0 * s, 400.0 * s), costs(), 2040);
    const std::vector<AnnualCashflow> a{flow(2040, c1, 0, 0, 250.0)};
    const std::vector<AnnualCashflow> b{flow(2040, cs, 0, 0, 250.0 * s)};
    EXPECT_NEAR(*lcos(a, LcosMode::Snapshot), *lcos(b, LcosMode::Snapshot), 1e-9);
  }
}

TEST(UnitBenefit, Arithmetic) {
  EXPECT_EQ(*unit_benefit(flow(2050, 0, 0, 0, 100.0)), 0.0);
  EXPECT_DOUBLE_EQ(*unit_benefit(flow(2050, 0, 1000.0, 400.0, 20.0)), 30.0);
  EXPECT_FALSE(unit_benefit(flow(2050, 0, 1000.0, 400.0, 0.0)));
}

TEST(UnitBenefit, LinearInPrices) {
  std::mt19937_64 rng(13);
  const auto level = series(fixtures::random_walk(rng, 600));
  std::vector<double> p = fixtures::random_walk(rng, 600);
  for (auto& v : p) v += 100.0;
  const auto base = cashflow_from_series(2050, 0.0, series(p), level, WeightSource::LevelIncrements, {0.9, 0.9});
  for (double a : {0.5, 2.0, 3.25}) {
    std::vector<double> q = p;
    for (auto& v : q) v *= a;
    const auto scaled = cashflow_from_series(2050, 0.0, series(q), level, WeightSource::LevelIncrements, {0.9, 0.9});
    EXPECT_NEAR(*unit_benefit(scaled), a * *unit_benefit(base), 1e-9 * std::abs(a * *unit_benefit(base)) + 1e-12);
  }
}

TEST(UnitBenefit, BreakEvenOrdering) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<AnnualCashflow> f;
    for (int y = 2025; y <= 2050; y += 5) f.push_back(flow(y, u(rng), u(rng), u(rng) * 0.5, u(rng) + 1.0));
    const double ub = *unit_benefit(f);
    const double lc = *lcos(f, LcosMode::Cumulative);
    double net = 0.0, cost = 0.0;
    for (const auto& x : f) {
      net += 5.0 * (x.revenue - x.charging_cost);
      cost += 5.0 * x.annualized_cost;
    }
    if (std::abs(net - cost) < 1e-9 * cost) continue;
    EXPECT_EQ(ub >= lc, net >= cost);
  }
}

TEST(CashflowFromSeries, ChargingAndDischargingWithEfficiencies) {
  const auto level = series({0, 10, 10, 4});
  const auto price = series({0, 20, 50, 80});
  const auto f = cashflow_from_series(2050, 5.0, price, level, WeightSource::LevelIncrements, {0.8, 0.5});
  EXPECT_DOUBLE_EQ(f.charging_cost, 10.0 / 0.8 * 20.0);
  EXPECT_DOUBLE_EQ(f.revenue, 6.0 * 0.5 * 80.0);
  EXPECT_DOUBLE_EQ(f.discharged_energy, 6.0);
  EXPECT_EQ(f.annualized_cost, 5.0);
  EXPECT_ERROR_CODE(cashflow_from_series(2050, 0, series({1, 2}), level, WeightSource::Flow),
                    ErrorCode::MisalignedSeries);
  EXPECT_ERROR_CODE(cashflow_from_series(2050, 0, price, level, WeightSource::Flow, {0.0, 1.0}),
                    ErrorCode::InvalidValue);
}

TEST(PriceSpread, OverallSpread) {
  auto cycle = [](double buy, double sell) {
    return PricedCycle{CycleRecord{Leg{0, 1, 1}, Leg{1, 2, 1}}, buy, sell, 1.0, 1.0};
  };
  const std::vector<PricedCycle> two{cycle(10, 30), cycle(20, 40)};
  EXPECT_DOUBLE_EQ(overall_price_spread(two), 20.0);
  EXPECT_DOUBLE_EQ(overall_price_spread(std::vector<PricedCycle>{cycle(25, 25)}), 0.0);
  EXPECT_ERROR_CODE(overall_price_spread(std::vector<PricedCycle>{}), ErrorCode::NoCycles);
  // a half cycle alone does not count
  const std::vector<PricedCycle> partial{PricedCycle{CycleRecord{Leg{0, 1, 1}, std::nullopt}, 5.0, std::nullopt}};
  EXPECT_ERROR_CODE(overall_price_spread(partial), ErrorCode::NoCycles);
}

TEST(PriceSpread, ConstantPriceSeriesHasZeroSpread) {
  const auto x = fixtures::triangles(4, 12);
  const auto level = series(x);
  const auto priced = attach_prices(detect_cycles(normalize_minmax(level), {}), series(std::vector<double>(x.size(), 42.0)),
                                    level, WeightSource::LevelIncrements);
  EXPECT_DOUBLE_EQ(overall_price_spread(priced), 0.0);
}

TEST(PriceSpread, Summary) {
  const std::vector<double> a{10, 20}, b{30, 40};
  EXPECT_DOUBLE_EQ(price_spread_summary(a, b), 20.0);
  EXPECT_DOUBLE_EQ(price_spread_summary(a, a), 0.0);
  EXPECT_ERROR_CODE(price_spread_summary(std::vector<double>{}, b), ErrorCode::EmptyInput);
}

TEST(PriceSpread, SummaryEqualsOpsForUniformLegs) {
  // each leg trades at one price, every cycle moves the same energy
  const std::size_t half = 10;
  const auto x = fixtures::triangles(6, half);
  std::vector<double> p(x.size());
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (std::size_t leg = 0; leg < 12; ++leg) {
    const double price = u(rng);
    for (std::size_t t = leg * half + 1; t <= (leg + 1) * half; ++t) p[t] = price;
  }
  const auto level = series(x);
  const auto priced =
      attach_prices(detect_cycles(normalize_minmax(level), {}), series(p), level, WeightSource::LevelIncrements);
  std::vector<double> buys, sells;
  for (const auto& c : priced) {
    ASSERT_TRUE(c.cycle.complete());
    EXPECT_NEAR(c.bought_energy, c.sold_energy, 1e-12);
    buys.push_back(*c.buy_price);
    sells.push_back(*c.sell_price);
  }
  EXPECT_NEAR(overall_price_spread(priced), price_spread_summary(buys, sells), 1e-12);
}

TEST(PriceSpread, TwoCycleFixtureIsExactlyTwenty) {
  // level 0 -> 1 -> 0 -> 1 -> 0, buying at 10 then 20, selling at 30 then 40
  const auto level = series({0, 1, 0, 1, 0});
  const auto price = series({0, 10, 30, 20, 40});
  const auto priced =
      attach_prices(detect_cycles(normalize_minmax(level), {}), price, level, WeightSource::LevelIncrements);
  ASSERT_EQ(priced.size(), 2u);
  EXPECT_EQ(overall_price_spread(priced), 20.0);
}
