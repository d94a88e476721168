// maizx: command-line front end for the carbon-aware placement simulator.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "maizx/maizx.hpp"

namespace {

using namespace maizx;
namespace fs = std::filesystem;

struct InputArgs {
  std::string config_path;
  std::string ci_dir;
  std::string weights;
  std::string forecast_method;
  std::optional<std::size_t> forecast_horizon;
  std::optional<std::size_t> epoch_hours;
  std::optional<std::size_t> cfp_window;
  std::string start;
  std::optional<std::size_t> horizon;
  std::string gap_fill;
};

void add_input_flags(CLI::App* cmd, InputArgs& args, bool scenario_flags) {
  cmd->add_option("--config", args.config_path, "Cluster config JSON (defaults to $MAIZX_CONFIG)")
      ->envname("MAIZX_CONFIG")
      ->required();
  cmd->add_option("--ci-dir", args.ci_dir, "Directory of hourly carbon intensity CSV files, one zone per file")
      ->required();
  cmd->add_option("--start", args.start, "Simulation start, ISO-8601 UTC (config key: start)");
  cmd->add_option("--horizon", args.horizon, "Simulation horizon in hours (config key: horizon_hours)");
  cmd->add_option("--gap-fill", args.gap_fill, "Missing-hour policy: fail or linear (config key: gap_fill)")
      ->check(CLI::IsMember({"fail", "linear"}));
  if (!scenario_flags) return;
  cmd->add_option("--weights", args.weights, "Ranking weights w1,w2,w3,w4 (config key: weights)");
  cmd->add_option("--forecast-method", args.forecast_method,
                  "persistence | seasonal_naive_24h | moving_average:N (config key: forecast.method)");
  cmd->add_option("--forecast-horizon", args.forecast_horizon,
                  "Forecast horizon in hours (config key: forecast.horizon_hours)");
  cmd->add_option("--epoch-hours", args.epoch_hours, "Scenario C decision epoch, 1-24 h (config key: epoch_hours)");
  cmd->add_option("--cfp-window", args.cfp_window,
                  "Trailing CFP window in hours, including the decision hour (config key: cfp_window_hours)");
}

RankingWeights parse_weights(const std::string& text) {
  std::vector<double> w;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    double v = 0.0;
    if (!detail::parse_double(detail::trim(item), v)) fail(ErrorKind::InvalidArgument, "bad weight '" + item + "'");
    w.push_back(v);
  }
  if (w.size() != 4) fail(ErrorKind::InvalidArgument, "--weights needs four comma-separated values");
  return RankingWeights(w[0], w[1], w[2], w[3]);
}

struct Prepared {
  ClusterConfig config;
  nlohmann::json effective;
  LoadedTraces traces;
  Cluster cluster;
  WorkloadSpec workload;
};

Prepared prepare(const InputArgs& args) {
  Prepared p;
  p.effective = read_json_file(args.config_path);
  if (!args.weights.empty()) p.effective["weights"] = parse_weights(args.weights);
  if (!args.forecast_method.empty()) p.effective["forecast"]["method"] = args.forecast_method;
  if (args.forecast_horizon) p.effective["forecast"]["horizon_hours"] = *args.forecast_horizon;
  if (args.epoch_hours) p.effective["epoch_hours"] = *args.epoch_hours;
  if (args.cfp_window) p.effective["cfp_window_hours"] = *args.cfp_window;
  if (!args.start.empty()) p.effective["start"] = args.start;
  if (args.horizon) p.effective["horizon_hours"] = *args.horizon;
  if (!args.gap_fill.empty()) p.effective["gap_fill"] = args.gap_fill;
  p.config = parse_config(p.effective);

  p.traces = load_ci_dir(args.ci_dir, CiParseOptions{p.config.gap_fill});
  p.cluster = validate_cluster(p.config.nodes, p.traces.series, p.config.start, p.config.horizon_hours);
  p.workload = p.config.workload(p.cluster.horizon_hours());
  return p;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::IoError, "cannot write " + path.string());
  out << contents;
  if (!out) fail(ErrorKind::IoError, "failed writing " + path.string());
}

std::size_t resolve_hour(const Cluster& cluster, const std::string& at, std::optional<std::size_t> hour) {
  if (!at.empty()) {
    const auto ts = parse_timestamp(at);
    if (!ts || !is_hour_aligned(*ts)) fail(ErrorKind::InvalidArgument, "--at must be an hour-aligned UTC timestamp");
    if (*ts < cluster.start() || *ts >= cluster.start() + kHour * static_cast<long>(cluster.horizon_hours()))
      fail(ErrorKind::HorizonMismatch, "--at " + at + " is outside the simulation horizon");
    return static_cast<std::size_t>((*ts - cluster.start()) / kHour);
  }
  if (hour) {
    if (*hour >= cluster.horizon_hours()) fail(ErrorKind::HorizonMismatch, "--hour is outside the simulation horizon");
    return *hour;
  }
  return cluster.horizon_hours() - 1;
}

/// Measured hourly energy per node from a directory of power CSV files.
std::map<std::string, std::pair<Timestamp, std::vector<double>>> load_power_dir(const std::string& dir) {
  std::map<std::string, std::pair<Timestamp, std::vector<double>>> out;
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv") paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  for (const auto& path : paths) {
    try {
      const auto series = load_power_csv(path.string());
      out[series.node_id()] = {series.start(), hourly_energy(series)};
    } catch (const Error& e) {
      throw Error(e.kind(), path.string() + ": " + e.what());
    }
  }
  return out;
}

int cmd_validate(const InputArgs& args, const std::string& power_dir) {
  const auto p = prepare(args);
  std::cout << "nodes," << p.cluster.size() << "\n"
            << "zones," << p.cluster.zone_series().size() << "\n"
            << "start," << format_timestamp(p.cluster.start()) << "\n"
            << "horizon_hours," << p.cluster.horizon_hours() << "\n";
  if (!power_dir.empty()) {
    for (const auto& [node_id, measured] : load_power_dir(power_dir)) {
      double total = 0.0;
      for (double kwh : measured.second) total += kwh;
      std::cout << "power," << node_id << ',' << measured.second.size() << "h," << detail::format_double(total)
                << "kWh\n";
    }
  }
  return 0;
}

int cmd_rank(const InputArgs& args, const std::string& at, std::optional<std::size_t> hour,
             const std::string& power_dir) {
  const auto p = prepare(args);
  const std::size_t h = resolve_hour(p.cluster, at, hour);
  std::vector<bool> serving(p.cluster.size(), false);
  auto terms = ranking_terms_at(p.cluster, p.workload, p.config.options, h, serving);
  if (!power_dir.empty()) {
    const auto measured = load_power_dir(power_dir);
    const std::size_t window = std::max<std::size_t>(p.config.options.cfp_window_hours, 1);
    const std::size_t first = h + 1 >= window ? h + 1 - window : 0;
    for (std::size_t i = 0; i < p.cluster.size(); ++i) {
      const Node& node = p.cluster.node(i);
      const auto it = measured.find(node.id());
      if (it == measured.end()) continue;
      const auto& [mstart, kwh] = it->second;
      double cfp = 0.0;
      for (std::size_t k = first; k <= h; ++k) {
        const Timestamp ts = p.cluster.start() + kHour * static_cast<long>(k);
        const auto offset = (ts - mstart) / kHour;
        if (offset < 0 || static_cast<std::size_t>(offset) >= kwh.size())
          fail(ErrorKind::HorizonMismatch, "power trace for " + node.id() + " does not cover " + format_timestamp(ts));
        cfp += compute_cf(kwh[static_cast<std::size_t>(offset)], node.pue(), p.cluster.ci(i)[k]);
      }
      terms[i].cfp = cfp;
    }
  }
  std::map<std::string, RankingTerms> raw;
  for (const auto& t : terms) raw[t.node_id] = t;
  const auto ranked = maiz_ranking(terms, p.config.options.weights);

  using detail::format_double;
  std::cout << "rank,node_id,cfp_g,fcfp_g,cp_ratio,schedule_weight,cfp_norm,fcfp_norm,cp_ratio_norm,schedule_norm,score\n";
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    const auto& s = ranked[k];
    const auto& t = raw.at(s.node_id);
    std::cout << k + 1 << ',' << s.node_id << ',' << format_double(t.cfp) << ',' << format_double(t.fcfp) << ','
              << format_double(t.cp_ratio) << ',' << format_double(t.schedule) << ',' << format_double(s.cfp_norm)
              << ',' << format_double(s.fcfp_norm) << ',' << format_double(s.cp_ratio_norm) << ','
              << format_double(s.schedule_norm) << ',' << format_double(s.score) << '\n';
  }
  return 0;
}

int cmd_forecast(const InputArgs& args, const std::string& zone, const std::string& at,
                 std::optional<std::size_t> hour) {
  const auto p = prepare(args);
  const CarbonIntensitySeries* series = nullptr;
  for (const auto& s : p.cluster.zone_series())
    if (s.zone().id() == zone) series = &s;
  if (series == nullptr) fail(ErrorKind::MissingZoneSeries, "no carbon intensity series for zone " + zone);
  const std::size_t h = resolve_hour(p.cluster, at, hour);
  const auto values = forecast_ci(series->values().first(h + 1), p.config.options.forecast,
                                  p.config.options.forecast_horizon_h);
  std::cout << kCiCsvHeader << '\n';
  const Timestamp first = p.cluster.start() + kHour * static_cast<long>(h + 1);
  for (std::size_t k = 0; k < values.size(); ++k)
    std::cout << format_timestamp(first + kHour * static_cast<long>(k)) << ',' << zone << ','
              << detail::format_double(values[k]) << '\n';
  return 0;
}

int cmd_simulate(const InputArgs& args, const std::string& scenario, const std::string& out_path) {
  auto p = prepare(args);
  if (!scenario.empty()) {
    p.config.scenarios = parse_scenario_list(scenario);
    p.effective["scenario"] = scenario;
  }
  auto kinds = p.config.scenarios;
  if (std::find(kinds.begin(), kinds.end(), ScenarioKind::Baseline) == kinds.end())
    kinds.insert(kinds.begin(), ScenarioKind::Baseline);

  std::vector<ScenarioResult> results;
  for (auto kind : kinds) results.push_back(run_scenario(kind, p.cluster, p.workload, p.config.options));

  ReportMetadata meta;
  meta.start = p.cluster.start();
  meta.config_digest = input_digest(p.effective, p.cluster);
  meta.forecast_method = p.config.options.forecast.name();
  meta.epoch_hours = p.config.options.epoch_hours;
  const auto rendered = render_report(results, p.config.projection, meta);

  const fs::path report_path(out_path);
  const fs::path dir = report_path.has_parent_path() ? report_path.parent_path() : fs::path(".");
  if (!dir.empty()) fs::create_directories(dir);
  write_file(report_path, rendered.report_json);
  write_file(dir / "hourly_cf.csv", rendered.hourly_cf_csv);
  write_file(dir / "hourly_cf_by_scenario.csv", rendered.hourly_cf_by_scenario_csv);
  write_file(dir / "summary.csv", rendered.summary_csv);
  std::cout << rendered.summary_csv;
  return 0;
}

int cmd_report(const std::string& report_path, const ProjectionParams& overrides, bool have_annual) {
  const auto report = report_from_json(read_json_file(report_path));
  const auto* baseline = report.find(ScenarioKind::Baseline);
  if (baseline == nullptr) fail(ErrorKind::MissingBaseline, report_path + ": no baseline scenario");

  double annual = 0.0;
  if (have_annual) {
    annual = *overrides.annual_reduction_per_unit_kg;
  } else {
    double best_kg = 0.0;
    for (const auto& s : report.scenarios) best_kg = std::max(best_kg, baseline->total_cf_kg - s.total_cf_kg);
    annual = best_kg * 8760.0 / static_cast<double>(report.metadata.horizon_hours);
  }

  nlohmann::json out;
  for (const auto& s : report.scenarios)
    out["scenarios"][std::string(to_string(s.scenario))] = {
        {"total_cf_kg", s.total_cf_kg}, {"total_energy_kwh", s.total_energy_kwh}, {"reduction_pct", s.reduction_pct}};
  out["config_digest"] = report.metadata.config_digest;
  if (annual > 0.0) {
    const auto proj = project(overrides, annual);
    out["projection"] = {{"target_kg", proj.target_kg},
                         {"annual_reduction_per_unit_kg", proj.annual_reduction_per_unit_kg},
                         {"years", proj.years},
                         {"units_required", proj.units_required},
                         {"units_required_over_years", proj.units_required_over_years},
                         {"tree_years", proj.tree_years},
                         {"car_years", proj.car_years},
                         {"eco_cost_eur", proj.eco_cost_eur}};
  } else {
    out["projection"] = nullptr;
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Carbon-aware workload placement simulator"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  app.set_version_flag("--version", "maizx 0.1.0");

  InputArgs validate_args, rank_args, forecast_args, simulate_args;
  std::string power_dir, rank_power_dir, rank_at, forecast_at, forecast_zone, scenario, out_path, report_path;
  std::optional<std::size_t> rank_hour, forecast_hour;

  auto* validate = app.add_subcommand("validate", "Check config and traces; print cluster summary");
  add_input_flags(validate, validate_args, false);
  validate->add_option("--power-dir", power_dir, "Directory of 20 s power CSV files to validate and integrate");

  auto* rank = app.add_subcommand("rank", "Print the node ranking at one hour as CSV");
  add_input_flags(rank, rank_args, true);
  rank->add_option("--at", rank_at, "Decision hour, ISO-8601 UTC (default: last hour of the horizon)");
  rank->add_option("--hour", rank_hour, "Decision hour as an index from the start");
  rank->add_option("--power-dir", rank_power_dir, "Use measured power traces for the CFP term");

  auto* forecast = app.add_subcommand("forecast", "Forecast carbon intensity for one zone as CSV");
  add_input_flags(forecast, forecast_args, true);
  forecast->add_option("--zone", forecast_zone, "Zone to forecast")->required();
  forecast->add_option("--at", forecast_at, "Last observed hour, ISO-8601 UTC (default: end of horizon)");
  forecast->add_option("--hour", forecast_hour, "Last observed hour as an index from the start");

  auto* simulate = app.add_subcommand("simulate", "Run scenarios and write report.json plus CSV outputs");
  add_input_flags(simulate, simulate_args, true);
  simulate->add_option("--scenario", scenario, "baseline | a | b | c | all, or a comma list (config key: scenario)");
  simulate->add_option("--out", out_path, "Report JSON path; CSV files are written next to it")->required();

  ProjectionParams projection;
  double annual = 0.0;
  std::vector<std::string> eur_factors;
  auto* report = app.add_subcommand("report", "Print reductions and scale-up projection from a report.json");
  report->add_option("--report", report_path, "report.json written by simulate")->required();
  report->add_option("--target-kg", projection.target_kg, "Reduction target in kg CO2e")->capture_default_str();
  auto* annual_opt = report->add_option("--annual-per-unit-kg", annual,
                                        "Annual reduction per unit in kg (default: derived from the report)");
  report->add_option("--years", projection.years, "Projection period in years")->capture_default_str();
  report->add_option("--kg-per-tree", projection.kg_per_tree_year, "kg CO2 absorbed per tree-year")
      ->capture_default_str();
  report->add_option("--kg-per-car", projection.kg_per_car_year, "kg CO2 emitted per car-year")->capture_default_str();
  report->add_option("--eur-per-kg", eur_factors, "Eco-cost factor NAME=EUR_PER_KG (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) return cmd_validate(validate_args, power_dir);
    if (*rank) return cmd_rank(rank_args, rank_at, rank_hour, rank_power_dir);
    if (*forecast) return cmd_forecast(forecast_args, forecast_zone, forecast_at, forecast_hour);
    if (*simulate) return cmd_simulate(simulate_args, scenario, out_path);
    if (*report) {
      for (const auto& item : eur_factors) {
        const auto eq = item.find('=');
        double v = 0.0;
        if (eq == std::string::npos || !detail::parse_double(item.substr(eq + 1), v))
          fail(ErrorKind::InvalidArgument, "--eur-per-kg expects NAME=VALUE, got '" + item + "'");
        projection.eur_per_kg[item.substr(0, eq)] = v;
      }
      if (*annual_opt) projection.annual_reduction_per_unit_kg = annual;
      return cmd_report(report_path, projection, static_cast<bool>(*annual_opt));
    }
  } catch (const Error& e) {
    std::string message = e.what();
    std::replace(message.begin(), message.end(), '\n', ' ');
    std::fprintf(stderr, "maizx: error: %s: %s\n", std::string(to_string(e.kind())).c_str(), message.c_str());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "maizx: error: Internal: %s\n", e.what());
    return 1;
  }
  return 2;
}
