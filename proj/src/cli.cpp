#include "storalyze/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "storalyze/co2path.hpp"
#include "storalyze/csv.hpp"
#include "storalyze/cyclecapture.hpp"
#include "storalyze/economics.hpp"
#include "storalyze/error.hpp"
#include "storalyze/format.hpp"
#include "storalyze/ingest.hpp"
#include "storalyze/pathways.hpp"
#include "storalyze/spectral.hpp"

#ifndef STORALYZE_DEFAULT_COSTS
#define STORALYZE_DEFAULT_COSTS "data/costs.csv"
#endif

namespace storalyze::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

Json num(double v) { return std::isfinite(v) ? Json(round_sig9(v)) : Json(nullptr); }
Json num(std::optional<double> v) { return v ? num(*v) : Json(nullptr); }

std::string cell(std::optional<double> v) { return v ? format_number(*v) : std::string(); }

// ---------------------------------------------------------------------------
// Options shared by several subcommands

struct Common {
  std::string out_dir = ".";
  std::string country = "XX";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out-dir,-o", c.out_dir, "Directory for reports")->capture_default_str();
  cmd->add_option("--country", c.country, "Country code recorded in reports")->capture_default_str();
}

struct ThresholdFlags {
  std::string kind = "storage";
  double filter = 0.0;
  double rise = 0.1;
  double fall = 0.1;
  bool include_partial = false;
  CLI::Option* filter_opt = nullptr;
  CLI::Option* rise_opt = nullptr;
  CLI::Option* fall_opt = nullptr;

  void add(CLI::App* cmd) {
    cmd->add_option("--kind", kind, "Series kind selecting default thresholds")
        ->check(CLI::IsMember({"storage", "price"}))
        ->capture_default_str();
    filter_opt = cmd->add_option("--filter", filter, "Noise filter, normalized units");
    rise_opt = cmd->add_option("--rise", rise, "Charging threshold, normalized units");
    fall_opt = cmd->add_option("--fall", fall, "Discharging threshold, normalized units");
    cmd->add_flag("--include-partial", include_partial, "Count boundary half-cycles");
  }

  CycleThresholds resolve() const {
    CycleThresholds th = CycleThresholds::defaults_for(kind == "price" ? SeriesKind::Price : SeriesKind::Storage);
    if (filter_opt->count() > 0) th.filter = filter;
    if (rise_opt->count() > 0) th.rise = rise;
    if (fall_opt->count() > 0) th.fall = fall;
    th.validate();
    return th;
  }

  Json echo(const CycleThresholds& th) const {
    return Json{{"kind", kind},
                {"filter", num(th.filter)},
                {"rise", num(th.rise)},
                {"fall", num(th.fall)},
                {"include_partial", include_partial}};
  }
};

struct CostFlags {
  std::string costs;
  void add(CLI::App* cmd) {
    costs = STORALYZE_DEFAULT_COSTS;
    cmd->add_option("--costs", costs, "Cost assumption table")->envname("STORALYZE_COSTS")->capture_default_str();
  }
};

void write_json(const fs::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

fs::path resolve_against(const fs::path& base_file, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base_file.parent_path() / path;
}

std::vector<CycleRecord> counted(const std::vector<CycleRecord>& records, bool include_partial) {
  std::vector<CycleRecord> out;
  for (const auto& r : records) {
    if (include_partial || r.complete()) out.push_back(r);
  }
  return out;
}

std::optional<double> ops_or_undefined(std::span<const PricedCycle> priced) {
  try {
    return overall_price_spread(priced);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoCycles) return std::nullopt;
    throw;
  }
}

WeightSource parse_weight_source(const std::string& s) {
  return s == "flow" ? WeightSource::Flow : WeightSource::LevelIncrements;
}

// ---------------------------------------------------------------------------
// cycles

struct CyclesArgs {
  Common common;
  ThresholdFlags th;
  std::string input;
  std::string column;
  std::string price;
  std::string price_column;
  std::string weights = "level";
};

int run_cycles(const CyclesArgs& a, std::ostream& out) {
  const CycleThresholds th = a.th.resolve();
  const TimeSeries series = load_series(a.input, a.column, Unit::Dimensionless);
  const auto records = counted(detect_cycles(normalize_minmax(series), th), a.th.include_partial);

  std::optional<TimeSeries> price;
  std::vector<PricedCycle> priced;
  if (!a.price.empty()) {
    price.emplace(load_series(a.price, a.price_column, Unit::EurPerMwh));
    priced = attach_prices(records, *price, series, parse_weight_source(a.weights));
  }

  std::ostringstream csv;
  csv << "cycle,complete,charge_start,charge_end,discharge_start,discharge_end,charge_depth,discharge_depth";
  if (price) csv << ",buy_price,sell_price,spread";
  csv << "\n";
  std::size_t complete = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const CycleRecord& r = records[i];
    complete += r.complete() ? 1 : 0;
    auto idx = [](const std::optional<Leg>& l, bool first) {
      return l ? std::to_string(first ? l->start : l->end) : std::string();
    };
    auto depth = [](const std::optional<Leg>& l) { return l ? format_number(l->depth) : std::string(); };
    csv << i + 1 << ',' << (r.complete() ? 1 : 0) << ',' << idx(r.charge, true) << ',' << idx(r.charge, false) << ','
        << idx(r.discharge, true) << ',' << idx(r.discharge, false) << ',' << depth(r.charge) << ','
        << depth(r.discharge);
    if (price) {
      const PricedCycle& p = priced[i];
      std::optional<double> spread;
      if (p.buy_price && p.sell_price) spread = *p.sell_price - *p.buy_price;
      csv << ',' << cell(p.buy_price) << ',' << cell(p.sell_price) << ',' << cell(spread);
    }
    csv << "\n";
  }
  const fs::path dir(a.common.out_dir);
  write_text_file(dir / "cycles.csv", csv.str());

  Json report{{"config",
               {{"command", "cycles"},
                {"input", a.input},
                {"column", series.name()},
                {"country", a.common.country},
                {"thresholds", a.th.echo(th)},
                {"price", a.price},
                {"weights", a.weights}}},
              {"series", {{"start", format_timestamp(series.start())}, {"hours", series.size()},
                          {"interpolated", series.interpolated_count()}}},
              {"cycles", records.size()},
              {"complete_cycles", complete}};
  if (price) report["overall_price_spread"] = num(ops_or_undefined(priced));
  write_json(dir / "cycles.json", report);
  out << "cycles: " << records.size() << " records (" << complete << " complete) -> " << (dir / "cycles.csv").string()
      << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// fft

struct FftArgs {
  Common common;
  std::string input;
  std::string column;
  bool detrend = false;
  std::size_t top = 5;
};

int run_fft(const FftArgs& a, std::ostream& out) {
  const TimeSeries series = load_series(a.input, a.column, Unit::Dimensionless);
  const Spectrum sp = fft_spectrum(series, a.detrend);
  std::ostringstream csv;
  csv << "index,frequency_per_hour,period_hours,amplitude\n";
  for (std::size_t k = 0; k < sp.amplitudes.size(); ++k) {
    csv << k << ',' << format_number(sp.frequencies[k]) << ','
        << (k == 0 ? std::string() : format_number(1.0 / sp.frequencies[k])) << ','
        << format_number(sp.amplitudes[k]) << "\n";
  }
  const fs::path dir(a.common.out_dir);
  write_text_file(dir / "spectrum.csv", csv.str());

  Json peaks = Json::array();
  for (const auto& p : dominant_periods(sp, a.top)) {
    peaks.push_back({{"index", p.index}, {"period_hours", num(p.period_hours)}, {"amplitude", num(p.amplitude)}});
  }
  write_json(dir / "fft.json", Json{{"config",
                                     {{"command", "fft"},
                                      {"input", a.input},
                                      {"column", series.name()},
                                      {"country", a.common.country},
                                      {"detrend", a.detrend},
                                      {"top", a.top}}},
                                    {"samples", sp.sample_count},
                                    {"dominant_periods", peaks}});
  out << "fft: " << sp.amplitudes.size() << " bins -> " << (dir / "spectrum.csv").string() << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// cwt

struct CwtArgs {
  Common common;
  std::string input;
  std::string column;
  double min_period = 6.0;
  double max_period = 2190.0;
  std::size_t count = 64;
  bool detrend = true;
  std::string method = "auto";
};

int run_cwt(const CwtArgs& a, std::ostream& out) {
  const TimeSeries series = load_series(a.input, a.column, Unit::Dimensionless);
  const auto scales = log_spaced_scales(a.min_period, a.max_period, a.count);
  CwtOptions opts;
  opts.detrend = a.detrend;
  opts.method = a.method == "direct" ? CwtMethod::Direct : a.method == "fft" ? CwtMethod::Fft : CwtMethod::Auto;
  const Scalogram sg = cwt_scalogram(series, scales, opts);
  const auto r = ridge(sg);

  std::ostringstream grid;
  grid << "timestamp";
  for (double p : sg.periods) grid << ",p" << format_number(p);
  grid << "\n";
  std::ostringstream ridge_csv;
  ridge_csv << "timestamp,period_hours,magnitude,in_cone\n";
  for (std::size_t b = 0; b < sg.time_count; ++b) {
    const std::string ts = format_timestamp(series.time_at(b));
    grid << ts;
    for (std::size_t s = 0; s < sg.scales.size(); ++s) grid << ',' << format_number(sg.magnitude(s, b));
    grid << "\n";
    ridge_csv << ts << ',' << format_number(sg.periods[r[b]]) << ',' << format_number(sg.magnitude(r[b], b)) << ','
              << (sg.in_cone_of_influence(r[b], b) ? 1 : 0) << "\n";
  }
  const fs::path dir(a.common.out_dir);
  write_text_file(dir / "scalogram.csv", grid.str());
  write_text_file(dir / "ridge.csv", ridge_csv.str());

  // Time-averaged magnitude inside the cone of influence.
  Json global = Json::array();
  for (std::size_t s = 0; s < sg.scales.size(); ++s) {
    std::optional<double> mean;
    if (sg.valid_first[s] <= sg.valid_last[s]) {
      double acc = 0.0;
      for (std::size_t b = sg.valid_first[s]; b <= sg.valid_last[s]; ++b) acc += sg.magnitude(s, b);
      mean = acc / static_cast<double>(sg.valid_last[s] - sg.valid_first[s] + 1);
    }
    global.push_back({{"period_hours", num(sg.periods[s])}, {"scale", num(sg.scales[s])}, {"mean_magnitude", num(mean)}});
  }
  write_json(dir / "cwt.json", Json{{"config",
                                     {{"command", "cwt"},
                                      {"input", a.input},
                                      {"column", series.name()},
                                      {"country", a.common.country},
                                      {"min_period", num(a.min_period)},
                                      {"max_period", num(a.max_period)},
                                      {"count", a.count},
                                      {"detrend", a.detrend},
                                      {"method", a.method}}},
                                    {"global_spectrum", global}});
  out << "cwt: " << sg.scales.size() << " scales x " << sg.time_count << " hours -> "
      << (dir / "scalogram.csv").string() << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// Manifest rows shared by econ and report

struct ManifestRow {
  int year = 0;
  fs::path series_file;
  std::optional<double> charge_kw, store_kwh, discharge_kw;
  fs::path h2_flows_file;
  std::optional<double> gas_to_power, gas_to_heat, electrolysis_kw, h2_store_kwh, fuelcell_kw;
};

std::vector<ManifestRow> load_manifest(const fs::path& path) {
  const csv::Table t = csv::read(path);
  const std::size_t year_col = t.require("year", path);
  auto opt_col = [&](std::string_view name) { return t.find(name); };
  const auto series_col = opt_col("series_file");
  const auto flows_col = opt_col("h2_flows_file");
  auto number = [&](const std::vector<std::string>& row, std::optional<std::size_t> col) -> std::optional<double> {
    if (!col || *col >= row.size()) return std::nullopt;
    const std::optional<double> v = csv::parse_optional_number(row[*col]);
    if (v && !(*v >= 0.0)) throw Error(ErrorCode::InvalidValue, "negative capacity in " + path.string());
    return v;
  };
  std::vector<ManifestRow> rows;
  for (const auto& row : t.rows) {
    ManifestRow m;
    const double y = csv::parse_number(row.at(year_col));
    if (!std::isfinite(y) || y != std::floor(y)) throw Error(ErrorCode::ParseError, "bad year in " + path.string());
    m.year = static_cast<int>(y);
    if (series_col && *series_col < row.size() && !row[*series_col].empty()) {
      m.series_file = resolve_against(path, row[*series_col]);
    }
    if (flows_col && *flows_col < row.size() && !row[*flows_col].empty()) {
      m.h2_flows_file = resolve_against(path, row[*flows_col]);
    }
    m.charge_kw = number(row, opt_col("charge_kw"));
    m.store_kwh = number(row, opt_col("store_kwh"));
    m.discharge_kw = number(row, opt_col("discharge_kw"));
    m.gas_to_power = number(row, opt_col("gas_to_power"));
    m.gas_to_heat = number(row, opt_col("gas_to_heat"));
    m.electrolysis_kw = number(row, opt_col("electrolysis_kw"));
    m.h2_store_kwh = number(row, opt_col("h2_store_kwh"));
    m.fuelcell_kw = number(row, opt_col("fuelcell_kw"));
    rows.push_back(std::move(m));
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "manifest " + path.string() + " has no rows");
  std::sort(rows.begin(), rows.end(), [](const ManifestRow& l, const ManifestRow& r) { return l.year < r.year; });
  return rows;
}

struct EconRow {
  std::string technology;
  int year = 0;
  std::optional<double> lcos_cum, lcos_snap, unit_benefit, ops, cycles_per_year;
  AnnualCashflow flow;
};

std::string econ_csv(const std::string& country, const std::vector<EconRow>& rows) {
  std::ostringstream csv;
  csv << "country,year,technology,lcos_cum,lcos_snap,unit_benefit,ops,cycles_per_year\n";
  for (const auto& r : rows) {
    csv << country << ',' << r.year << ',' << r.technology << ',' << format_metric(r.lcos_cum) << ','
        << format_metric(r.lcos_snap) << ',' << format_metric(r.unit_benefit) << ',' << format_metric(r.ops) << ','
        << format_metric(r.cycles_per_year) << "\n";
  }
  return csv.str();
}

Json econ_json(const std::vector<EconRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    arr.push_back({{"technology", r.technology},
                   {"year", r.year},
                   {"lcos_cum", num(r.lcos_cum)},
                   {"lcos_snap", num(r.lcos_snap)},
                   {"unit_benefit", num(r.unit_benefit)},
                   {"ops", num(r.ops)},
                   {"cycles_per_year", num(r.cycles_per_year)},
                   {"annualized_cost", num(r.flow.annualized_cost)},
                   {"revenue", num(r.flow.revenue)},
                   {"charging_cost", num(r.flow.charging_cost)},
                   {"discharged_energy", num(r.flow.discharged_energy)}});
  }
  return arr;
}

// Fills the LCOS and unit-benefit columns of rows that share a technology,
// accumulating cash flows year by year.
void fill_metrics(std::vector<EconRow>& rows, const LcosOptions& lopts) {
  std::map<std::string, std::vector<AnnualCashflow>> history;
  for (auto& r : rows) {
    auto& h = history[r.technology];
    h.push_back(r.flow);
    r.lcos_cum = lcos(h, LcosMode::Cumulative, lopts);
    r.lcos_snap = lcos(h, LcosMode::Snapshot, lopts);
    r.unit_benefit = unit_benefit(r.flow);
  }
}

// Level series for cycle counting: the level column itself, or the running
// sum of a net-charging flow column.
TimeSeries level_series(const fs::path& file, const std::string& level_column, const std::string& flow_column) {
  if (flow_column.empty()) return load_series(file, level_column, Unit::MWh);
  const TimeSeries flow = load_series(file, flow_column, Unit::MW);
  std::vector<double> level(flow.size());
  double acc = 0.0;
  for (std::size_t t = 0; t < flow.size(); ++t) level[t] = acc += flow[t];
  return TimeSeries(flow.name() + "_level", Unit::MWh, flow.start(), std::move(level), flow.interpolated_count());
}

struct StoreColumns {
  std::string price = "price";
  std::string level = "level";
  std::string flow;
};

struct StoreTechs {
  std::string tag = "battery";
  std::string charge = "battery inverter";
  std::string store = "battery storage";
  std::string discharge;
  std::optional<double> charge_eff, discharge_eff;
};

EconRow evaluate_store(const ManifestRow& m, const StoreColumns& cols, const StoreTechs& techs, const CostTable& costs,
                       const CycleThresholds& th, bool include_partial) {
  if (m.series_file.empty() || !m.charge_kw) {
    throw Error(ErrorCode::MissingColumn, "manifest year " + std::to_string(m.year) +
                                              " needs series_file and charge_kw for storage economics");
  }
  const StorageTag tag = parse_storage_tag(techs.tag);
  const std::string discharge_tech = techs.discharge.empty() ? techs.charge : techs.discharge;
  std::optional<StoreUnit> store;
  if (m.store_kwh) store = StoreUnit{techs.store, *m.store_kwh};
  std::optional<PowerLink> discharge;
  if (m.discharge_kw) discharge = PowerLink{discharge_tech, *m.discharge_kw};
  const StorageConfig cfg(tag, PowerLink{techs.charge, *m.charge_kw}, store, discharge);
  const double cost = annualized_cost(cfg, costs, m.year);

  StorageEfficiencies eff;
  eff.charge = techs.charge_eff.value_or(costs.at(techs.charge, m.year).efficiency.value_or(1.0));
  eff.discharge = techs.discharge_eff.value_or(costs.at(discharge_tech, m.year).efficiency.value_or(1.0));

  const TimeSeries price = load_series(m.series_file, cols.price, Unit::EurPerMwh);
  const TimeSeries level = level_series(m.series_file, cols.level, cols.flow);
  EconRow row;
  row.technology = std::string(to_string(tag));
  row.year = m.year;
  row.flow = cashflow_from_series(m.year, cost, price, level, WeightSource::LevelIncrements, eff);

  const auto records = counted(detect_cycles(normalize_minmax(level), th), include_partial);
  row.cycles_per_year = static_cast<double>(cycle_frequency(records, include_partial));
  row.ops = ops_or_undefined(attach_prices(records, price, level, WeightSource::LevelIncrements));
  return row;
}

struct LcosFlags {
  double step_years = 5.0;
  int discount_base_year = 0;
  double discount_rate = 0.07;
  CLI::Option* base_opt = nullptr;

  void add(CLI::App* cmd) {
    cmd->add_option("--step-years", step_years, "Calendar years represented by each planning year")
        ->capture_default_str();
    base_opt = cmd->add_option("--discount-to", discount_base_year, "Discount planning years to this base year");
    cmd->add_option("--discount-rate", discount_rate, "Rate used with --discount-to")->capture_default_str();
  }
  LcosOptions resolve() const {
    LcosOptions o;
    o.step_years = step_years;
    o.discount_rate = discount_rate;
    if (base_opt->count() > 0) o.discount_base_year = discount_base_year;
    return o;
  }
  Json echo() const {
    return Json{{"step_years", num(step_years)},
                {"discount_to", base_opt->count() > 0 ? Json(discount_base_year) : Json(nullptr)},
                {"discount_rate", num(discount_rate)}};
  }
};

// ---------------------------------------------------------------------------
// econ

struct EconArgs {
  Common common;
  ThresholdFlags th;
  CostFlags costs;
  LcosFlags lcos;
  std::string manifest;
  StoreColumns cols;
  StoreTechs techs;
  double charge_eff = 1.0, discharge_eff = 1.0;
  CLI::Option* charge_eff_opt = nullptr;
  CLI::Option* discharge_eff_opt = nullptr;
};

int run_econ(EconArgs a, std::ostream& out) {
  const CycleThresholds th = a.th.resolve();
  const CostTable costs = load_costs(a.costs.costs);
  if (a.charge_eff_opt->count() > 0) a.techs.charge_eff = a.charge_eff;
  if (a.discharge_eff_opt->count() > 0) a.techs.discharge_eff = a.discharge_eff;
  const fs::path manifest(a.manifest);
  std::vector<EconRow> rows;
  for (const auto& m : load_manifest(manifest)) {
    rows.push_back(evaluate_store(m, a.cols, a.techs, costs, th, a.th.include_partial));
  }
  fill_metrics(rows, a.lcos.resolve());

  const fs::path dir(a.common.out_dir);
  write_text_file(dir / "econ.csv", econ_csv(a.common.country, rows));
  write_json(dir / "econ.json", Json{{"config",
                                      {{"command", "econ"},
                                       {"manifest", a.manifest},
                                       {"country", a.common.country},
                                       {"costs", a.costs.costs},
                                       {"tag", a.techs.tag},
                                       {"charge_tech", a.techs.charge},
                                       {"store_tech", a.techs.store},
                                       {"discharge_tech", a.techs.discharge.empty() ? a.techs.charge : a.techs.discharge},
                                       {"price_column", a.cols.price},
                                       {"level_column", a.cols.level},
                                       {"flow_column", a.cols.flow},
                                       {"charge_eff", num(a.techs.charge_eff)},
                                       {"discharge_eff", num(a.techs.discharge_eff)},
                                       {"thresholds", a.th.echo(th)},
                                       {"lcos", a.lcos.echo()}}},
                                     {"economics", econ_json(rows)}});
  const EconRow& last = rows.back();
  out << "econ: " << last.technology << " " << last.year << " lcos_cum=" << format_metric(last.lcos_cum)
      << " unit_benefit=" << format_metric(last.unit_benefit) << " -> " << (dir / "econ.csv").string() << "\n";
  return last.lcos_cum ? kOk : kUndefined;
}

// ---------------------------------------------------------------------------
// pathway

struct PathwayFlags {
  std::string convention = "maximal-indirect";
  bool no_check = false;
  double eta_el = 0.8, eta_fc = 0.58;
  CLI::Option* eta_el_opt = nullptr;
  CLI::Option* eta_fc_opt = nullptr;

  void add(CLI::App* cmd) {
    cmd->add_option("--convention", convention, "Direct/indirect attribution")
        ->check(CLI::IsMember({"maximal-indirect", "maximal-direct"}))
        ->capture_default_str();
    cmd->add_flag("--no-conservation-check", no_check, "Skip the hourly hydrogen balance check");
    eta_el_opt = cmd->add_option("--eta-el", eta_el, "Electrolysis efficiency")->capture_default_str();
    eta_fc_opt = cmd->add_option("--eta-fc", eta_fc, "Fuel cell efficiency")->capture_default_str();
  }
  SplitConvention split() const {
    return convention == "maximal-direct" ? SplitConvention::MaximalDirect : SplitConvention::MaximalIndirect;
  }
  // Flags win; otherwise the cost table's figures; otherwise the defaults.
  ConversionEfficiencies resolve(const CostTable* costs, int year) const {
    ConversionEfficiencies eff{eta_el, eta_fc};
    if (costs) {
      if (eta_el_opt->count() == 0 && costs->contains("electrolysis")) {
        eff.electrolysis = costs->at("electrolysis", year).efficiency.value_or(eta_el);
      }
      if (eta_fc_opt->count() == 0 && costs->contains("fuel cell")) {
        eff.fuel_cell = costs->at("fuel cell", year).efficiency.value_or(eta_fc);
      }
    }
    return eff;
  }
  Json echo(const ConversionEfficiencies& eff) const {
    return Json{{"convention", convention},
                {"conservation_check", !no_check},
                {"eta_el", num(eff.electrolysis)},
                {"eta_fc", num(eff.fuel_cell)}};
  }
};

Json entry_json(const PathwayEntry& e) {
  return Json{{"energy", num(e.energy)}, {"revenue", num(e.revenue)}, {"charging_cost", num(e.charging_cost)}};
}

Json ledger_json(const PathwayLedger& l) {
  Json j;
  for (StorageTag p : kHydrogenPathways) j[std::string(to_string(p))] = entry_json(l.entry(p));
  for (StorageTag g : {StorageTag::DirectH2, StorageTag::IndirectH2}) {
    const AnnualCashflow f = l.cashflow(g, 0, 0.0);
    j[std::string(to_string(g))] = entry_json({f.discharged_energy, f.revenue, f.charging_cost});
  }
  return j;
}

Json ledger_summary(const PathwayLedger& l) {
  return Json{{"direct_total", num(l.direct_total)},
              {"indirect_total", num(l.indirect_total)},
              {"direct_capacity_mwh", num(l.direct_capacity_mwh)},
              {"indirect_capacity_mw", num(l.indirect_capacity_mw)},
              {"electricity_share", num(l.use_shares.electricity)},
              {"heating_share", num(l.use_shares.heating)},
              {"indirect_revenue_share", num(l.indirect_revenue_share())},
              {"heating_revenue_share", num(l.heating_revenue_share())}};
}

struct PathwayArgs {
  Common common;
  PathwayFlags flags;
  std::string input;
  int year = 2050;
  double gas_power = 0.0, gas_heat = 0.0;
};

int run_pathway(const PathwayArgs& a, std::ostream& out) {
  const HydrogenFlows f = load_hydrogen_flows(a.input, a.gas_power, a.gas_heat);
  const ConversionEfficiencies eff = a.flags.resolve(nullptr, a.year);
  const PathwayLedger l = revenue_breakdown(f, eff, a.flags.split(), !a.flags.no_check);
  const std::string year = std::to_string(a.year);

  std::ostringstream csv;
  csv << "country,year,pathway,energy,revenue,charging_cost\n";
  for (StorageTag p : kHydrogenPathways) {
    const PathwayEntry& e = l.entry(p);
    csv << a.common.country << ',' << year << ',' << to_string(p) << ',' << format_number(e.energy) << ','
        << format_number(e.revenue) << ',' << format_number(e.charging_cost) << "\n";
  }
  const fs::path dir(a.common.out_dir);
  write_text_file(dir / "pathway.csv", csv.str());

  Json ledger;
  ledger[a.common.country][year] = ledger_json(l);
  Json summary;
  summary[a.common.country][year] = ledger_summary(l);
  write_json(dir / "pathway.json", Json{{"config",
                                         {{"command", "pathway"},
                                          {"input", a.input},
                                          {"country", a.common.country},
                                          {"year", a.year},
                                          {"gas_to_power", num(a.gas_power)},
                                          {"gas_to_heat", num(a.gas_heat)},
                                          {"pathways", a.flags.echo(eff)}}},
                                        {"ledger", ledger},
                                        {"summary", summary}});
  out << "pathway: direct " << format_number(l.direct_total) << " EUR, indirect " << format_number(l.indirect_total)
      << " EUR -> " << (dir / "pathway.json").string() << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// co2path

struct Co2Args {
  Common common;
  double e0 = 0.0, t0 = 0.0, tf = 0.0, budget = 0.0, beta = 1.0, left = 1.0;
  std::string mode = "asymmetric";
  CLI::Option* budget_opt = nullptr;
  CLI::Option* beta_opt = nullptr;
};

int run_co2path(const Co2Args& a, std::ostream& out) {
  if ((a.budget_opt->count() > 0) == (a.beta_opt->count() > 0)) {
    throw Error(ErrorCode::InvalidValue, "give exactly one of --budget or --beta");
  }
  BetaShape shape = BetaShape::symmetric(a.beta);
  if (a.budget_opt->count() > 0) {
    SolveOptions so;
    so.mode = a.mode == "symmetric" ? BetaMode::Symmetric : BetaMode::Asymmetric;
    so.fixed_left = a.left;
    shape = solve_beta(a.e0, a.t0, a.tf, a.budget, so);
  }
  const EmissionPathway path(a.e0, a.t0, a.tf, shape);
  std::ostringstream csv;
  csv << "year,emission,cumulative,cap_fraction\n";
  for (const auto& y : yearly_path(path)) {
    csv << y.year << ',' << format_number(y.emission) << ',' << format_number(y.cumulative) << ','
        << format_number(y.cap_fraction) << "\n";
  }
  const fs::path dir(a.common.out_dir);
  write_text_file(dir / "co2path.csv", csv.str());
  write_json(dir / "co2path.json",
             Json{{"config",
                   {{"command", "co2path"},
                    {"e0", num(a.e0)},
                    {"t0", num(a.t0)},
                    {"tf", num(a.tf)},
                    {"budget", a.budget_opt->count() > 0 ? num(a.budget) : Json(nullptr)},
                    {"beta", a.beta_opt->count() > 0 ? num(a.beta) : Json(nullptr)},
                    {"mode", a.mode},
                    {"left_shape", num(a.left)}}},
                  {"shape", {{"left", num(shape.left)}, {"right", num(shape.right)}}},
                  {"total", num(path.total())}});
  out << "co2path: shape (" << format_number(shape.left) << ", " << format_number(shape.right) << "), total "
      << format_number(path.total()) << " -> " << (dir / "co2path.csv").string() << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// report

struct ReportArgs {
  Common common;
  ThresholdFlags th;
  CostFlags costs;
  LcosFlags lcos;
  PathwayFlags pathway;
  std::string manifest;
  StoreColumns cols;
  StoreTechs techs;
  std::string h2_store_tech = "H2 storage underground";
  std::size_t top = 3;
};

// Annualized cost of the hydrogen chain split over the pathways: the direct
// group carries its electrolyser share and the store, shared by energy, with
// the fuel cell charged to ESFC alone; the indirect group carries the
// electrolyser share feeding the Sabatier process.
std::map<StorageTag, double> pathway_costs(const ManifestRow& m, const PathwayLedger& l, const CostTable& costs,
                                           const std::string& h2_store_tech) {
  const double indirect_kw = l.indirect_capacity_mw * 1000.0;
  const double direct_kw = std::max(m.electrolysis_kw.value_or(indirect_kw) - indirect_kw, 0.0);
  const double store_kwh = m.h2_store_kwh.value_or(l.direct_capacity_mwh * 1000.0);
  auto part = [&](const char* tech, double capacity, CapexUnit unit) {
    return capacity > 0.0 ? component_annualized_cost(costs, tech, capacity, unit, m.year) : 0.0;
  };
  const double direct_cost = part("electrolysis", direct_kw, CapexUnit::EurPerKw) +
                             (store_kwh > 0.0 ? component_annualized_cost(costs, h2_store_tech, store_kwh,
                                                                          CapexUnit::EurPerKwh, m.year)
                                              : 0.0);
  const double fc_cost = part("fuel cell", m.fuelcell_kw.value_or(0.0), CapexUnit::EurPerKw);
  const double indirect_cost = part("electrolysis", indirect_kw, CapexUnit::EurPerKw);

  auto share = [](double part_energy, double total) { return total > 0.0 ? part_energy / total : 0.0; };
  const double direct_energy = l.entry(StorageTag::ESFC).energy + l.entry(StorageTag::ESSE).energy +
                               l.entry(StorageTag::ESSH).energy;
  const double indirect_energy = l.entry(StorageTag::ESE).energy + l.entry(StorageTag::ESH).energy;
  std::map<StorageTag, double> out;
  out[StorageTag::ESFC] = direct_cost * share(l.entry(StorageTag::ESFC).energy, direct_energy) + fc_cost;
  out[StorageTag::ESSE] = direct_cost * share(l.entry(StorageTag::ESSE).energy, direct_energy);
  out[StorageTag::ESSH] = direct_cost * share(l.entry(StorageTag::ESSH).energy, direct_energy);
  out[StorageTag::ESE] = indirect_cost * share(l.entry(StorageTag::ESE).energy, indirect_energy);
  out[StorageTag::ESH] = indirect_cost * share(l.entry(StorageTag::ESH).energy, indirect_energy);
  return out;
}

int run_report(ReportArgs a, std::ostream& out) {
  const CycleThresholds th = a.th.resolve();
  const CostTable costs = load_costs(a.costs.costs);
  const fs::path manifest(a.manifest);
  const auto rows_in = load_manifest(manifest);

  std::vector<EconRow> rows;
  Json ledger, summary, spectra;
  for (const auto& m : rows_in) {
    const std::string year = std::to_string(m.year);
    if (!m.series_file.empty() && m.charge_kw) {
      rows.push_back(evaluate_store(m, a.cols, a.techs, costs, th, a.th.include_partial));
      const TimeSeries price = load_series(m.series_file, a.cols.price, Unit::EurPerMwh);
      Json peaks = Json::array();
      for (const auto& p : dominant_periods(fft_spectrum(price, true), a.top)) {
        peaks.push_back({{"period_hours", num(p.period_hours)}, {"amplitude", num(p.amplitude)}});
      }
      spectra[year] = peaks;
    }
    if (m.h2_flows_file.empty()) continue;

    const HydrogenFlows f =
        load_hydrogen_flows(m.h2_flows_file, m.gas_to_power.value_or(0.0), m.gas_to_heat.value_or(0.0));
    const ConversionEfficiencies eff = a.pathway.resolve(&costs, m.year);
    const PathwayLedger l = revenue_breakdown(f, eff, a.pathway.split(), !a.pathway.no_check);
    ledger[a.common.country][year] = ledger_json(l);
    summary[a.common.country][year] = ledger_summary(l);

    // Cycling of the hydrogen store against the hydrogen price.
    std::vector<double> level = f.store_level;
    if (level.empty()) {
      double acc = 0.0;
      for (std::size_t t = 0; t < f.hours(); ++t) level.push_back(acc += f.store_in[t] - f.store_out[t]);
    }
    std::optional<double> h2_cycles, h2_ops;
    if (level.size() >= 2) {
      const TimeSeries level_ts("h2_level", Unit::MWh, Timestamp{}, level);
      const TimeSeries price_ts("h2_price", Unit::EurPerMwh, Timestamp{}, f.h2_price);
      const auto records = counted(detect_cycles(normalize_minmax(level_ts), th), a.th.include_partial);
      h2_cycles = static_cast<double>(cycle_frequency(records, a.th.include_partial));
      h2_ops = ops_or_undefined(attach_prices(records, price_ts, level_ts, WeightSource::LevelIncrements));
    }

    const auto cost = pathway_costs(m, l, costs, a.h2_store_tech);
    auto add = [&](std::string name, AnnualCashflow flow, bool direct_store) {
      EconRow r;
      r.technology = std::move(name);
      r.year = m.year;
      r.flow = flow;
      if (direct_store) {
        r.ops = h2_ops;
        r.cycles_per_year = h2_cycles;
      }
      rows.push_back(std::move(r));
    };
    for (StorageTag p : kHydrogenPathways) {
      add(std::string(to_string(p)), l.cashflow(p, m.year, cost.at(p)), !is_indirect(p));
    }
    const double direct_cost = cost.at(StorageTag::ESFC) + cost.at(StorageTag::ESSE) + cost.at(StorageTag::ESSH);
    const double indirect_cost = cost.at(StorageTag::ESE) + cost.at(StorageTag::ESH);
    add(std::string(to_string(StorageTag::DirectH2)), l.cashflow(StorageTag::DirectH2, m.year, direct_cost), true);
    add(std::string(to_string(StorageTag::IndirectH2)), l.cashflow(StorageTag::IndirectH2, m.year, indirect_cost),
        false);
    add("all_h2", l.cashflow_all(m.year, direct_cost + indirect_cost), true);
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "manifest lists neither storage series nor hydrogen flows");
  fill_metrics(rows, a.lcos.resolve());

  const fs::path dir(a.common.out_dir);
  write_text_file(dir / "report.csv", econ_csv(a.common.country, rows));
  write_json(dir / "report.json",
             Json{{"config",
                   {{"command", "report"},
                    {"manifest", a.manifest},
                    {"country", a.common.country},
                    {"costs", a.costs.costs},
                    {"storage_tag", a.techs.tag},
                    {"charge_tech", a.techs.charge},
                    {"store_tech", a.techs.store},
                    {"h2_store_tech", a.h2_store_tech},
                    {"price_column", a.cols.price},
                    {"level_column", a.cols.level},
                    {"flow_column", a.cols.flow},
                    {"thresholds", a.th.echo(th)},
                    {"lcos", a.lcos.echo()},
                    {"pathways", a.pathway.echo(a.pathway.resolve(nullptr, 0))}}},
                  {"economics", econ_json(rows)},
                  {"ledger", ledger.is_null() ? Json::object() : ledger},
                  {"ledger_summary", summary.is_null() ? Json::object() : summary},
                  {"price_spectrum_peaks", spectra.is_null() ? Json::object() : spectra}});
  out << "report: " << rows.size() << " rows -> " << (dir / "report.csv").string() << "\n";
  return kOk;
}

void add_store_options(CLI::App* cmd, StoreColumns& cols, StoreTechs& techs) {
  cmd->add_option("--price-column", cols.price, "Price column in each series file")->capture_default_str();
  cmd->add_option("--level-column", cols.level, "Store filling level column")->capture_default_str();
  cmd->add_option("--flow-column", cols.flow, "Net charging flow column, used instead of the level");
  cmd->add_option("--tag", techs.tag, "Storage tag")->capture_default_str();
  cmd->add_option("--charge-tech", techs.charge, "Charging link technology")->capture_default_str();
  cmd->add_option("--store-tech", techs.store, "Store technology")->capture_default_str();
  cmd->add_option("--discharge-tech", techs.discharge, "Discharging link technology (default: charging link)");
}

int exit_code_for(ErrorCode code) {
  if (is_undefined_result(code)) return kUndefined;
  switch (code) {
    case ErrorCode::InvalidValue:
    case ErrorCode::NonPositiveScale:
    case ErrorCode::UnknownTechnology:
    case ErrorCode::YearOutOfRange:
    case ErrorCode::OutOfDomain:
      return kUsage;
    default:
      return kDataError;
  }
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Storage cycle, spectral, cost and emission-pathway analysis of hourly energy-system series",
               "storalyze"};
  app.set_config("--config", "", "Key-value config file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  CyclesArgs cy;
  auto* cycles = app.add_subcommand("cycles", "Detect charge/discharge cycles");
  add_common(cycles, cy.common);
  cy.th.add(cycles);
  cycles->add_option("--input,-i", cy.input, "Series CSV")->required()->check(CLI::ExistingFile);
  cycles->add_option("--column", cy.column, "Value column (default: the only one)");
  cycles->add_option("--price", cy.price, "Price CSV for cycle spreads")->check(CLI::ExistingFile);
  cycles->add_option("--price-column", cy.price_column, "Price column");
  cycles->add_option("--weights", cy.weights, "How the input weights prices")
      ->check(CLI::IsMember({"level", "flow"}))
      ->capture_default_str();

  FftArgs ft;
  auto* fft = app.add_subcommand("fft", "Amplitude spectrum");
  add_common(fft, ft.common);
  fft->add_option("--input,-i", ft.input, "Series CSV")->required()->check(CLI::ExistingFile);
  fft->add_option("--column", ft.column, "Value column (default: the only one)");
  fft->add_flag("--detrend,!--no-detrend", ft.detrend, "Remove the mean first");
  fft->add_option("--top", ft.top, "Number of dominant periods to report")->capture_default_str();

  CwtArgs cw;
  auto* cwt = app.add_subcommand("cwt", "Morlet wavelet scalogram");
  add_common(cwt, cw.common);
  cwt->add_option("--input,-i", cw.input, "Series CSV")->required()->check(CLI::ExistingFile);
  cwt->add_option("--column", cw.column, "Value column (default: the only one)");
  cwt->add_option("--min-period", cw.min_period, "Shortest pseudo-period, hours")->capture_default_str();
  cwt->add_option("--max-period", cw.max_period, "Longest pseudo-period, hours")->capture_default_str();
  cwt->add_option("--scales", cw.count, "Number of log-spaced scales")->capture_default_str();
  cwt->add_flag("--detrend,!--no-detrend", cw.detrend, "Remove the mean first")->capture_default_str();
  cwt->add_option("--method", cw.method, "Convolution method")
      ->check(CLI::IsMember({"auto", "direct", "fft"}))
      ->capture_default_str();

  EconArgs ec;
  auto* econ = app.add_subcommand("econ", "Storage cost and benefit metrics per planning year");
  add_common(econ, ec.common);
  ec.th.add(econ);
  ec.costs.add(econ);
  ec.lcos.add(econ);
  econ->add_option("--manifest,-m", ec.manifest, "Manifest CSV, one row per planning year")
      ->required()
      ->check(CLI::ExistingFile);
  add_store_options(econ, ec.cols, ec.techs);
  ec.charge_eff_opt = econ->add_option("--charge-eff", ec.charge_eff, "Charging efficiency (default: cost table)");
  ec.discharge_eff_opt =
      econ->add_option("--discharge-eff", ec.discharge_eff, "Discharging efficiency (default: cost table)");

  PathwayArgs pw;
  auto* pathway = app.add_subcommand("pathway", "Hydrogen pathway ledger");
  add_common(pathway, pw.common);
  pw.flags.add(pathway);
  pathway->add_option("--input,-i", pw.input, "Hourly hydrogen flow CSV")->required()->check(CLI::ExistingFile);
  pathway->add_option("--year", pw.year, "Planning year")->capture_default_str();
  pathway->add_option("--gas-power", pw.gas_power, "Annual gas use for power, MWh")->required();
  pathway->add_option("--gas-heat", pw.gas_heat, "Annual gas use for heat, MWh")->required();

  Co2Args co;
  auto* co2 = app.add_subcommand("co2path", "Budget-constrained emission pathway");
  add_common(co2, co.common);
  co2->add_option("--e0", co.e0, "Emissions at t0, GtCO2/yr")->required();
  co2->add_option("--t0", co.t0, "Start year")->required();
  co2->add_option("--tf", co.tf, "Net-zero year")->required();
  co.budget_opt = co2->add_option("--budget", co.budget, "Carbon budget, GtCO2");
  co.beta_opt = co2->add_option("--beta", co.beta, "Symmetric shape, instead of solving for a budget");
  co2->add_option("--mode", co.mode, "Shape family used by the solver")
      ->check(CLI::IsMember({"asymmetric", "symmetric"}))
      ->capture_default_str();
  co2->add_option("--left-shape", co.left, "Fixed left shape in asymmetric mode")->capture_default_str();

  ReportArgs rp;
  auto* report = app.add_subcommand("report", "Full per-country pipeline");
  add_common(report, rp.common);
  rp.th.add(report);
  rp.costs.add(report);
  rp.lcos.add(report);
  rp.pathway.add(report);
  report->add_option("--manifest,-m", rp.manifest, "Manifest CSV, one row per planning year")
      ->required()
      ->check(CLI::ExistingFile);
  add_store_options(report, rp.cols, rp.techs);
  report->add_option("--h2-store-tech", rp.h2_store_tech, "Hydrogen store technology")->capture_default_str();
  report->add_option("--top", rp.top, "Dominant price periods per year")->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*cycles) return run_cycles(cy, out);
    if (*fft) return run_fft(ft, out);
    if (*cwt) return run_cwt(cw, out);
    if (*econ) return run_econ(ec, out);
    if (*pathway) return run_pathway(pw, out);
    if (*co2) return run_co2path(co, out);
    if (*report) return run_report(rp, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsage;
}

int run_command(int argc, const char* const* argv) {
  return run_command(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace storalyze::cli
