#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "expect_error.hpp"
#include "fixtures.hpp"
#include "storalyze/ingest.hpp"
#include "storalyze/timeseries.hpp"

using namespace storalyze;
using fixtures::TempDir;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

TimeSeries load_one(const TempDir& dir, const std::vector<double>& v, Unit unit = Unit::Dimensionless) {
  fixtures::write_file(dir / "s.csv", fixtures::wide_csv({"x"}, {v}));
  return load_series(dir / "s.csv", "x", unit);
}

}  // namespace

TEST(Timestamps, ParsesCommonIsoForms) {
  const Timestamp t = parse_timestamp("2050-03-01T05:00:00");
  EXPECT_EQ(format_timestamp(t), "2050-03-01T05:00:00");
  EXPECT_EQ(parse_timestamp("2050-03-01 05:00"), t);
  EXPECT_EQ(parse_timestamp("2050-03-01T07:00:00+02:00"), t);
  EXPECT_EQ(parse_timestamp("2050-03-01T05:00:00Z"), t);
  EXPECT_EQ(format_timestamp(parse_timestamp("2050-03-01")), "2050-03-01T00:00:00");
}

TEST(Timestamps, RejectsGarbage) {
  EXPECT_ERROR_CODE(parse_timestamp("yesterday"), ErrorCode::ParseError);
  EXPECT_ERROR_CODE(parse_timestamp("2050-13-01T00:00"), ErrorCode::ParseError);
}

TEST(LoadSeries, ConstantYearPassesThrough) {
  TempDir dir;
  const TimeSeries s = load_one(dir, std::vector<double>(8760, 25.0), Unit::EurPerMwh);
  EXPECT_EQ(s.size(), 8760u);
  EXPECT_TRUE(s.is_annual());
  EXPECT_EQ(s.unit(), Unit::EurPerMwh);
  EXPECT_EQ(s.year(), 2050);
  for (double v : s.values()) EXPECT_EQ(v, 25.0);
  EXPECT_EQ(s.interpolated_count(), 0u);
}

TEST(LoadSeries, SingleGapIsInterpolated) {
  TempDir dir;
  std::vector<double> v(200, 10.0);
  v[100] = kNaN;
  v[101] = 12.0;
  const TimeSeries s = load_one(dir, v);
  EXPECT_DOUBLE_EQ(s[100], 11.0);
  EXPECT_EQ(s.interpolated_count(), 1u);
}

TEST(LoadSeries, ThreeHourGapIsInterpolated) {
  TempDir dir;
  std::vector<double> v{0, 0, 4, kNaN, kNaN, kNaN, 8, 8};
  const TimeSeries s = load_one(dir, v);
  EXPECT_DOUBLE_EQ(s[3], 5.0);
  EXPECT_DOUBLE_EQ(s[4], 6.0);
  EXPECT_DOUBLE_EQ(s[5], 7.0);
  EXPECT_EQ(s.interpolated_count(), 3u);
}

TEST(LoadSeries, FiveMissingHoursIsTooManyGaps) {
  TempDir dir;
  std::vector<double> v(20, 1.0);
  for (int i = 5; i < 10; ++i) v[i] = kNaN;
  EXPECT_ERROR_CODE(load_one(dir, v), ErrorCode::TooManyGaps);
}

TEST(LoadSeries, SkippedTimestampsCountAsGaps) {
  TempDir dir;
  fixtures::write_file(dir / "s.csv",
                       "timestamp,x\n2050-01-01T00:00,1\n2050-01-01T01:00,2\n2050-01-01T03:00,4\n2050-01-01T04:00,5\n");
  const TimeSeries s = load_series(dir / "s.csv", "x", Unit::MW);
  ASSERT_EQ(s.size(), 5u);
  EXPECT_DOUBLE_EQ(s[2], 3.0);
  EXPECT_EQ(s.interpolated_count(), 1u);
}

TEST(LoadSeries, NonHourlySpacingIsRejected) {
  TempDir dir;
  fixtures::write_file(dir / "s.csv", "timestamp,x\n2050-01-01T00:00,1\n2050-01-01T00:30,2\n2050-01-01T01:00,3\n");
  EXPECT_ERROR_CODE(load_series(dir / "s.csv", "x", Unit::MW), ErrorCode::NonUniformSpacing);
  fixtures::write_file(dir / "t.csv", "timestamp,x\n2050-01-01T02:00,1\n2050-01-01T01:00,2\n2050-01-01T03:00,3\n");
  EXPECT_ERROR_CODE(load_series(dir / "t.csv", "x", Unit::MW), ErrorCode::NonUniformSpacing);
}

TEST(LoadSeries, InfinityAndBoundaryGapsAreNonFinite) {
  TempDir dir;
  fixtures::write_file(dir / "s.csv", "timestamp,x\n2050-01-01T00:00,1\n2050-01-01T01:00,inf\n2050-01-01T02:00,3\n");
  EXPECT_ERROR_CODE(load_series(dir / "s.csv", "x", Unit::MW), ErrorCode::NonFiniteValue);
  EXPECT_ERROR_CODE(load_one(dir, {kNaN, 1.0, 2.0}), ErrorCode::NonFiniteValue);
  EXPECT_ERROR_CODE(load_one(dir, {1.0, 2.0, kNaN}), ErrorCode::NonFiniteValue);
}

TEST(LoadSeries, MissingColumnAndFile) {
  TempDir dir;
  fixtures::write_file(dir / "s.csv", fixtures::wide_csv({"x"}, {{1.0, 2.0, 3.0}}));
  EXPECT_ERROR_CODE(load_series(dir / "s.csv", "price", Unit::MW), ErrorCode::MissingColumn);
  EXPECT_ERROR_CODE(load_series(dir / "nope.csv", "x", Unit::MW), ErrorCode::FileNotFound);
}

TEST(LoadSeries, TooShortSeriesRejected) {
  TempDir dir;
  fixtures::write_file(dir / "s.csv", "timestamp,x\n2050-01-01T00:00,1\n");
  EXPECT_ERROR_CODE(load_series(dir / "s.csv", "x", Unit::MW), ErrorCode::TooShort);
}

TEST(LoadSeries, LongFormatSelectsSeriesRows) {
  TempDir dir;
  fixtures::write_file(dir / "long.csv",
                       "snapshot,series,value\n"
                       "2050-01-01 00:00,price,10\n2050-01-01 00:00,level,1\n"
                       "2050-01-01 01:00,price,20\n2050-01-01 01:00,level,2\n"
                       "2050-01-01 02:00,price,30\n2050-01-01 02:00,level,3\n");
  const TimeSeries p = load_series(dir / "long.csv", "price", Unit::EurPerMwh);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[2], 30.0);
  const TimeSeries l = load_series(dir / "long.csv", "level", Unit::MWh);
  EXPECT_EQ(l[0], 1.0);
}

TEST(LoadSeries, SingleValueColumnNeedsNoSelector) {
  TempDir dir;
  fixtures::write_file(dir / "s.csv", fixtures::wide_csv({"soc"}, {{0.1, 0.2, 0.3}}));
  const TimeSeries s = load_series(dir / "s.csv", "", Unit::Dimensionless);
  EXPECT_EQ(s.name(), "soc");
  EXPECT_EQ(s[1], 0.2);
}

TEST(LoadSeries, LeapYearLengthIsAnnual) {
  TempDir dir;
  fixtures::write_file(dir / "leap.csv", fixtures::wide_csv({"x"}, {std::vector<double>(8784, 1.0)}, 2048));
  const TimeSeries s = load_series(dir / "leap.csv", "x", Unit::Dimensionless);
  EXPECT_EQ(s.size(), 8784u);
  EXPECT_TRUE(s.is_annual());
  EXPECT_NO_THROW(s.require_annual());
  const TimeSeries t = load_one(dir, std::vector<double>(100, 1.0));
  EXPECT_ERROR_CODE(t.require_annual(), ErrorCode::TooShort);
}

TEST(LoadSeries, WriteThenReloadIsBitExact) {
  TempDir dir;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> d(0.0, 1e3);
  std::vector<double> v(500);
  for (auto& x : v) x = d(rng);
  const TimeSeries s = load_one(dir, v, Unit::MWh);
  write_series(dir / "copy.csv", s);
  const TimeSeries back = load_series(dir / "copy.csv", s.name(), Unit::MWh);
  ASSERT_EQ(back.size(), s.size());
  EXPECT_EQ(back.start(), s.start());
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(back[i], s[i]);
}

TEST(Normalize, LinearRescale) {
  const std::vector<double> v{2, 4, 6};
  const NormalizedSeries n = normalize_minmax(v);
  EXPECT_EQ(n.values, (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(n.min, 2.0);
  EXPECT_EQ(n.max, 6.0);
  EXPECT_FALSE(n.constant);
}

TEST(Normalize, ConstantSeriesMapsToZerosWithFlag) {
  const TimeSeries s("c", Unit::MW, Timestamp{}, {5, 5, 5});
  const NormalizedSeries n = normalize_minmax(s);
  EXPECT_EQ(n.values, (std::vector<double>{0, 0, 0}));
  EXPECT_TRUE(n.constant);
  ASSERT_TRUE(n.source);
  EXPECT_EQ(n.source->name(), "c");
}

TEST(Normalize, RandomSeriesSpansUnitInterval) {
  std::mt19937_64 rng(11);
  const auto v = fixtures::random_walk(rng, 1000);
  const NormalizedSeries n = normalize_minmax(v);
  const auto [lo, hi] = std::minmax_element(n.values.begin(), n.values.end());
  EXPECT_EQ(*lo, 0.0);
  EXPECT_EQ(*hi, 1.0);
  const auto [vlo, vhi] = std::minmax_element(v.begin(), v.end());
  EXPECT_EQ(n.values[vlo - v.begin()], 0.0);
  EXPECT_EQ(n.values[vhi - v.begin()], 1.0);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_DOUBLE_EQ(n.values[i], (v[i] - *vlo) / (*vhi - *vlo));
}

TEST(Normalize, IdempotentOnNormalizedInput) {
  std::mt19937_64 rng(12);
  const auto once = normalize_minmax(fixtures::random_walk(rng, 300));
  const auto twice = normalize_minmax(once.values);
  for (std::size_t i = 0; i < once.size(); ++i) EXPECT_DOUBLE_EQ(twice.values[i], once.values[i]);
}

TEST(TimeSeriesType, RejectsNonFiniteAndShortInput) {
  EXPECT_ERROR_CODE(TimeSeries("x", Unit::MW, Timestamp{}, {1.0}), ErrorCode::TooShort);
  EXPECT_ERROR_CODE(TimeSeries("x", Unit::MW, Timestamp{}, {1.0, kNaN}), ErrorCode::NonFiniteValue);
}

TEST(TimeSeriesType, AlignmentCheck) {
  const TimeSeries a("a", Unit::MW, Timestamp{}, {1, 2, 3});
  const TimeSeries b("b", Unit::MW, Timestamp{}, {1, 2});
  const TimeSeries c("c", Unit::MW, Timestamp{} + std::chrono::hours(1), {1, 2, 3});
  EXPECT_ERROR_CODE(require_aligned(a, b), ErrorCode::MisalignedSeries);
  EXPECT_ERROR_CODE(require_aligned(a, c), ErrorCode::MisalignedSeries);
  EXPECT_NO_THROW(require_aligned(a, a));
}

TEST(Units, ParseCanonicalNames) {
  EXPECT_EQ(parse_unit("EUR_per_MWh"), Unit::EurPerMwh);
  EXPECT_EQ(parse_unit("mwh"), Unit::MWh);
  EXPECT_EQ(parse_unit("dimensionless"), Unit::Dimensionless);
  EXPECT_ERROR_CODE(parse_unit("furlongs"), ErrorCode::InvalidValue);
}

// --- cost table -------------------------------------------------------------

class BundledCosts : public ::testing::Test {
 protected:
  static const CostTable& table() {
    static const CostTable t = load_costs(STORALYZE_SOURCE_DIR "/data/costs.csv");
    return t;
  }
};

TEST_F(BundledCosts, BatteryStorage2050) {
  const CostAssumptions c = table().at("battery storage", 2050);
  EXPECT_DOUBLE_EQ(c.capex, 75.0);
  EXPECT_EQ(c.capex_unit, CapexUnit::EurPerKwh);
  EXPECT_EQ(c.lifetime_years, 20);
  EXPECT_DOUBLE_EQ(c.discount_rate, 0.07);
}

TEST_F(BundledCosts, Electrolysis2020) {
  const CostAssumptions c = table().at("Electrolysis", 2020);
  EXPECT_DOUBLE_EQ(c.capex, 600.0);
  ASSERT_TRUE(c.efficiency);
  EXPECT_DOUBLE_EQ(*c.efficiency, 0.8);
}

TEST_F(BundledCosts, InterpolatesBetweenAnchors) {
  EXPECT_NEAR(table().at("onshore wind", 2022).capex, 1101.6, 1e-9);
}

TEST_F(BundledCosts, InterpolatedValuesStayBetweenAnchors) {
  for (const auto& tech : table().technologies()) {
    const auto years = table().anchor_years(tech);
    for (std::size_t i = 0; i + 1 < years.size(); ++i) {
      const double a = table().at(tech, years[i]).capex;
      const double b = table().at(tech, years[i + 1]).capex;
      for (int y = years[i]; y <= years[i + 1]; ++y) {
        const double v = table().at(tech, y).capex;
        EXPECT_GE(v, std::min(a, b) - 1e-12) << tech << " " << y;
        EXPECT_LE(v, std::max(a, b) + 1e-12) << tech << " " << y;
      }
    }
  }
}

TEST_F(BundledCosts, UnknownTechnologyAndYearOutsideAnchors) {
  EXPECT_ERROR_CODE(table().at("flux capacitor", 2030), ErrorCode::UnknownTechnology);
  EXPECT_ERROR_CODE(table().at("battery storage", 2019), ErrorCode::YearOutOfRange);
  EXPECT_ERROR_CODE(table().at("battery storage", 2051), ErrorCode::YearOutOfRange);
}

TEST(CostTableLoad, NegativeCapexRejected) {
  TempDir dir;
  fixtures::write_file(dir / "c.csv",
                       "technology,year,capex,capex_unit,fom_pct,lifetime_years,efficiency\n"
                       "widget,2030,-5,EUR/kW,1,20,0.9\n");
  EXPECT_ERROR_CODE(load_costs(dir / "c.csv"), ErrorCode::NegativeCost);
}

TEST(CostTableLoad, RequiredColumnsAndRanges) {
  TempDir dir;
  fixtures::write_file(dir / "a.csv", "technology,year,capex\nwidget,2030,5\n");
  EXPECT_ERROR_CODE(load_costs(dir / "a.csv"), ErrorCode::MissingColumn);

  CostTable t;
  CostAssumptions row{"widget", 2030, 10.0, CapexUnit::EurPerKw, 1.0, 20, 0.9, 0.07};
  auto bad = row;
  bad.fom_pct = 120.0;
  EXPECT_ERROR_CODE(t.add(bad), ErrorCode::InvalidValue);
  bad = row;
  bad.lifetime_years = 0;
  EXPECT_ERROR_CODE(t.add(bad), ErrorCode::InvalidLifetime);
  bad = row;
  bad.efficiency = 1.5;
  EXPECT_ERROR_CODE(t.add(bad), ErrorCode::InvalidValue);
  bad = row;
  bad.discount_rate = 1.0;
  EXPECT_ERROR_CODE(t.add(bad), ErrorCode::InvalidValue);
  EXPECT_NO_THROW(t.add(row));
}

TEST(CostTableLoad, LifetimeTakenFromLowerAnchor) {
  CostTable t;
  t.add({"widget", 2030, 100.0, CapexUnit::EurPerKw, 2.0, 20, 0.8, 0.07});
  t.add({"widget", 2040, 50.0, CapexUnit::EurPerKw, 4.0, 30, 0.9, 0.07});
  const auto c = t.at("widget", 2035);
  EXPECT_DOUBLE_EQ(c.capex, 75.0);
  EXPECT_DOUBLE_EQ(*c.fom_pct, 3.0);
  EXPECT_DOUBLE_EQ(*c.efficiency, 0.85);
  EXPECT_EQ(c.lifetime_years, 20);
}
