#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "maizx/error.hpp"
#include "maizx/forecast.hpp"
#include "maizx/ingest.hpp"
#include "maizx/model.hpp"
#include "maizx/report.hpp"
#include "maizx/simulate.hpp"

namespace maizx {

// JSON mappings for the domain types. Reading goes through the validating
// constructors, so an invalid document is rejected with DomainError.

inline void to_json(nlohmann::json& j, const Node& n) {
  j = {{"id", n.id()},
       {"zone", n.zone().id()},
       {"pue", n.pue()},
       {"idle_power_w", n.idle_power_w()},
       {"max_power_w", n.max_power_w()},
       {"capacity_units", n.capacity_units()}};
}

inline Node node_from_json(const nlohmann::json& j) {
  return Node(j.at("id").get<std::string>(), Zone(j.at("zone").get<std::string>()), j.at("pue").get<double>(),
              j.at("idle_power_w").get<double>(), j.at("max_power_w").get<double>(),
              j.at("capacity_units").get<double>());
}

inline void to_json(nlohmann::json& j, const RankingWeights& w) {
  j = {{"w1", w.cfp()}, {"w2", w.fcfp()}, {"w3", w.cp_ratio()}, {"w4", w.schedule()}};
}

inline RankingWeights weights_from_json(const nlohmann::json& j) {
  return RankingWeights(j.value("w1", 0.0), j.value("w2", 0.0), j.value("w3", 0.0), j.value("w4", 0.0));
}

inline void to_json(nlohmann::json& j, const Job& job) {
  j = {{"id", job.id}, {"priority", job.priority}};
  if (job.deadline) j["deadline"] = format_timestamp(*job.deadline);
}

inline Job job_from_json(const nlohmann::json& j) {
  Job job{j.at("id").get<std::string>(), j.value("priority", 0), std::nullopt};
  if (j.contains("deadline") && !j.at("deadline").is_null()) {
    const auto ts = parse_timestamp(j.at("deadline").get<std::string>());
    if (!ts) fail(ErrorKind::ParseError, "job " + job.id + ": bad deadline");
    job.deadline = *ts;
  }
  return job;
}

inline void to_json(nlohmann::json& j, const WorkloadSpec& w) {
  j = {{"demand", std::vector<double>(w.demand().begin(), w.demand().end())}, {"jobs", nlohmann::json::array()}};
  for (const auto& job : w.jobs()) j["jobs"].push_back(job);
}

inline WorkloadSpec workload_from_json(const nlohmann::json& j) {
  std::vector<Job> jobs;
  if (j.contains("jobs"))
    for (const auto& job : j.at("jobs")) jobs.push_back(job_from_json(job));
  return WorkloadSpec(j.at("demand").get<std::vector<double>>(), std::move(jobs));
}

/// How hourly demand is described in a config file: a constant rate, a
/// 24-value daily profile tiled over the horizon, or an explicit list.
struct DemandConfig {
  std::optional<double> units_per_hour;
  std::vector<double> daily_profile;
  std::vector<double> values;

  std::vector<double> expand(std::size_t horizon_hours) const {
    if (!values.empty()) {
      if (values.size() != horizon_hours)
        fail(ErrorKind::HorizonMismatch, "workload lists " + std::to_string(values.size()) +
                                             " hourly demands but the horizon is " +
                                             std::to_string(horizon_hours) + " h");
      return values;
    }
    if (!daily_profile.empty()) {
      if (daily_profile.size() != kDayHours)
        fail(ErrorKind::DomainError, "workload daily_profile must have 24 entries");
      std::vector<double> out(horizon_hours);
      for (std::size_t h = 0; h < horizon_hours; ++h) out[h] = daily_profile[h % kDayHours];
      return out;
    }
    return std::vector<double>(horizon_hours, units_per_hour.value_or(0.0));
  }
};

/// Everything a simulation run needs besides the traces.
struct ClusterConfig {
  std::vector<Node> nodes;
  std::vector<ScenarioKind> scenarios{std::begin(kAllScenarios), std::end(kAllScenarios)};
  std::optional<Timestamp> start;
  std::optional<std::size_t> horizon_hours;
  ScenarioOptions options;
  DemandConfig demand;
  std::vector<Job> jobs;
  ProjectionParams projection;
  GapFill gap_fill = GapFill::Fail;

  WorkloadSpec workload(std::size_t horizon) const { return WorkloadSpec(demand.expand(horizon), jobs); }
};

inline std::vector<ScenarioKind> parse_scenario_list(std::string_view s) {
  if (s == "all") return {std::begin(kAllScenarios), std::end(kAllScenarios)};
  std::vector<ScenarioKind> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const auto item = s.substr(pos, comma == std::string_view::npos ? s.npos : comma - pos);
    const auto kind = parse_scenario(item);
    if (!kind) fail(ErrorKind::InvalidArgument, "unknown scenario '" + std::string(item) + "'");
    if (std::find(out.begin(), out.end(), *kind) == out.end()) out.push_back(*kind);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

inline ClusterConfig parse_config(const nlohmann::json& j) {
  try {
    ClusterConfig cfg;
    for (const auto& n : j.at("nodes")) cfg.nodes.push_back(node_from_json(n));
    if (j.contains("weights")) cfg.options.weights = weights_from_json(j.at("weights"));
    if (j.contains("scenario")) cfg.scenarios = parse_scenario_list(j.at("scenario").get<std::string>());
    if (j.contains("start")) {
      const auto ts = parse_timestamp(j.at("start").get<std::string>());
      if (!ts) fail(ErrorKind::ParseError, "config: bad start timestamp");
      cfg.start = *ts;
    }
    if (j.contains("horizon_hours")) cfg.horizon_hours = j.at("horizon_hours").get<std::size_t>();
    if (j.contains("forecast")) {
      const auto& f = j.at("forecast");
      if (f.contains("method")) {
        const auto method = ForecastMethod::parse(f.at("method").get<std::string>());
        if (!method) fail(ErrorKind::ParseError, "config: unknown forecast method");
        cfg.options.forecast = *method;
      }
      cfg.options.forecast_horizon_h = f.value("horizon_hours", cfg.options.forecast_horizon_h);
    }
    cfg.options.epoch_hours = j.value("epoch_hours", cfg.options.epoch_hours);
    cfg.options.cfp_window_hours = j.value("cfp_window_hours", cfg.options.cfp_window_hours);
    if (j.contains("workload")) {
      const auto& w = j.at("workload");
      if (w.contains("units_per_hour")) cfg.demand.units_per_hour = w.at("units_per_hour").get<double>();
      if (w.contains("daily_profile")) cfg.demand.daily_profile = w.at("daily_profile").get<std::vector<double>>();
      if (w.contains("demand")) cfg.demand.values = w.at("demand").get<std::vector<double>>();
      if (w.contains("jobs"))
        for (const auto& job : w.at("jobs")) cfg.jobs.push_back(job_from_json(job));
    }
    if (j.contains("projection")) {
      const auto& p = j.at("projection");
      cfg.projection.target_kg = p.value("target_kg", cfg.projection.target_kg);
      if (p.contains("annual_reduction_per_unit_kg"))
        cfg.projection.annual_reduction_per_unit_kg = p.at("annual_reduction_per_unit_kg").get<double>();
      cfg.projection.years = p.value("years", cfg.projection.years);
      cfg.projection.kg_per_tree_year = p.value("kg_per_tree_year", cfg.projection.kg_per_tree_year);
      cfg.projection.kg_per_car_year = p.value("kg_per_car_year", cfg.projection.kg_per_car_year);
      if (p.contains("eur_per_kg")) cfg.projection.eur_per_kg = p.at("eur_per_kg").get<std::map<std::string, double>>();
      cfg.projection.validate();
    }
    if (j.contains("gap_fill")) {
      const auto mode = j.at("gap_fill").get<std::string>();
      if (mode == "linear") cfg.gap_fill = GapFill::Linear;
      else if (mode != "fail") fail(ErrorKind::ParseError, "config: gap_fill must be 'fail' or 'linear'");
    }
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, std::string("config: ") + e.what());
  }
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, path + ": " + e.what());
  }
}

inline ClusterConfig load_config(const std::string& path) { return parse_config(read_json_file(path)); }

/// Carbon intensity files found in a directory (`*.csv`, sorted by name),
/// with the file each series came from.
struct LoadedTraces {
  std::vector<CarbonIntensitySeries> series;
  std::vector<std::string> files;
};

inline LoadedTraces load_ci_dir(const std::string& dir, CiParseOptions options = {}) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) fail(ErrorKind::IoError, "not a directory: " + dir);
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv") paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  LoadedTraces out;
  for (const auto& p : paths) {
    try {
      out.series.push_back(load_ci_csv(p.string(), options));
    } catch (const Error& e) {
      throw Error(e.kind(), p.string() + ": " + e.what());
    }
    out.files.push_back(p.string());
  }
  if (out.series.empty()) fail(ErrorKind::IoError, "no .csv carbon intensity files in " + dir);
  return out;
}

/// Digest over the canonical config document and every trace value, so a
/// report can be matched to its inputs.
inline std::string input_digest(const nlohmann::json& config, const Cluster& cluster) {
  std::uint64_t h = fnv1a64(config.dump());
  for (const auto& s : cluster.zone_series()) {
    std::ostringstream buf;
    write_ci_csv(buf, s);
    h = fnv1a64(buf.str(), h);
  }
  return "fnv1a64:" + hex_digest(h);
}

}  // namespace maizx
