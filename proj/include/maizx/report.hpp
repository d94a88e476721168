#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "maizx/error.hpp"
#include "maizx/ingest.hpp"
#include "maizx/simulate.hpp"
#include "maizx/time.hpp"

namespace maizx {

/// Inputs for scaling a per-unit reduction up to an emissions target.
struct ProjectionParams {
  double target_kg = 19'754'000'000.0;
  /// When unset, derived from the simulated reduction, annualised.
  std::optional<double> annual_reduction_per_unit_kg;
  int years = 10;
  double kg_per_tree_year = 20e9 / 90e6;
  double kg_per_car_year = 20e9 / 2.44e6;
  /// Optional euro-per-kg factors (eco-cost categories); none by default.
  std::map<std::string, double> eur_per_kg;

  void validate() const {
    if (!(target_kg > 0.0)) fail(ErrorKind::DomainError, "projection target_kg must be > 0");
    if (annual_reduction_per_unit_kg && !(*annual_reduction_per_unit_kg > 0.0))
      fail(ErrorKind::DomainError, "annual_reduction_per_unit_kg must be > 0");
    if (years < 1) fail(ErrorKind::DomainError, "projection years must be >= 1");
    if (!(kg_per_tree_year > 0.0) || !(kg_per_car_year > 0.0))
      fail(ErrorKind::DomainError, "equivalence factors must be > 0");
    for (const auto& [name, factor] : eur_per_kg)
      if (!(factor > 0.0)) fail(ErrorKind::DomainError, "eco-cost factor " + name + " must be > 0");
  }
};

/// Number of units whose annual reduction adds up to the target; floor of
/// the quotient.
inline std::uint64_t units_required(double target_kg, double annual_per_unit_kg) {
  if (!(target_kg > 0.0) || !(annual_per_unit_kg > 0.0))
    fail(ErrorKind::DomainError, "units_required needs positive target and per-unit reduction");
  return static_cast<std::uint64_t>(std::floor(target_kg / annual_per_unit_kg));
}

struct Equivalences {
  double tree_years = 0.0;
  double car_years = 0.0;
};

inline Equivalences equivalences(double total_kg, const ProjectionParams& params = {}) {
  if (!(total_kg >= 0.0)) fail(ErrorKind::DomainError, "equivalences need a non-negative mass");
  if (!(params.kg_per_tree_year > 0.0) || !(params.kg_per_car_year > 0.0))
    fail(ErrorKind::DomainError, "equivalence factors must be > 0");
  return {total_kg / params.kg_per_tree_year, total_kg / params.kg_per_car_year};
}

struct NodeTotals {
  std::string node_id;
  double energy_kwh = 0.0;
  double cf_g = 0.0;
  double cf_kg = 0.0;
  std::uint64_t powered_hours = 0;

  friend bool operator==(const NodeTotals&, const NodeTotals&) = default;
};

struct ScenarioTotals {
  ScenarioKind scenario = ScenarioKind::Baseline;
  double total_energy_kwh = 0.0;
  double total_cf_g = 0.0;
  double total_cf_kg = 0.0;
  double reduction_pct = 0.0;  // vs baseline, 2 decimals
  std::vector<NodeTotals> nodes;

  friend bool operator==(const ScenarioTotals&, const ScenarioTotals&) = default;
};

struct Projection {
  double target_kg = 0.0;
  double annual_reduction_per_unit_kg = 0.0;
  int years = 0;
  /// Target divided by one year of per-unit reduction.
  std::uint64_t units_required = 0;
  /// Target divided by the reduction a unit accumulates over `years`.
  std::uint64_t units_required_over_years = 0;
  double tree_years = 0.0;
  double car_years = 0.0;
  std::map<std::string, double> eco_cost_eur;

  friend bool operator==(const Projection&, const Projection&) = default;
};

struct ReportMetadata {
  Timestamp start{};
  std::uint64_t horizon_hours = 0;
  std::string config_digest;
  std::string forecast_method;
  std::uint64_t epoch_hours = 1;

  friend bool operator==(const ReportMetadata&, const ReportMetadata&) = default;
};

struct EmissionsReport {
  ReportMetadata metadata;
  std::vector<ScenarioTotals> scenarios;
  std::optional<Projection> projection;

  const ScenarioTotals* find(ScenarioKind kind) const {
    for (const auto& s : scenarios)
      if (s.scenario == kind) return &s;
    return nullptr;
  }

  friend bool operator==(const EmissionsReport&, const EmissionsReport&) = default;
};

inline double round_to(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

/// 64-bit FNV-1a, used for the input digest stored in report metadata.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t hash = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

inline std::string hex_digest(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

inline Projection project(const ProjectionParams& params, double annual_per_unit_kg) {
  params.validate();
  Projection p;
  p.target_kg = params.target_kg;
  p.annual_reduction_per_unit_kg = annual_per_unit_kg;
  p.years = params.years;
  p.units_required = units_required(params.target_kg, annual_per_unit_kg);
  p.units_required_over_years = units_required(params.target_kg, annual_per_unit_kg * params.years);
  const auto eq = equivalences(params.target_kg, params);
  p.tree_years = eq.tree_years;
  p.car_years = eq.car_years;
  for (const auto& [name, factor] : params.eur_per_kg) p.eco_cost_eur[name] = params.target_kg * factor;
  return p;
}

/// Aggregates scenario results. Requires a baseline run; scenarios are
/// listed in baseline, a, b, c order regardless of input order.
inline EmissionsReport build_report(std::span<const ScenarioResult> results, const ProjectionParams& params,
                                    ReportMetadata metadata) {
  const ScenarioResult* baseline = nullptr;
  for (const auto& r : results)
    if (r.scenario == ScenarioKind::Baseline) baseline = &r;
  if (baseline == nullptr) fail(ErrorKind::MissingBaseline, "report needs a baseline scenario run");

  EmissionsReport report;
  report.metadata = std::move(metadata);
  report.metadata.horizon_hours = baseline->hours();
  for (auto kind : kAllScenarios) {
    for (const auto& r : results) {
      if (r.scenario != kind) continue;
      ScenarioTotals totals;
      totals.scenario = kind;
      for (std::size_t i = 0; i < r.node_ids.size(); ++i) {
        NodeTotals node{r.node_ids[i], r.node_energy_kwh(i), r.node_cf_g(i), 0.0, 0};
        node.cf_kg = node.cf_g / 1000.0;
        for (std::size_t h = 0; h < r.hours(); ++h) node.powered_hours += r.allocation.at(h, i).powered ? 1 : 0;
        totals.nodes.push_back(std::move(node));
      }
      totals.total_energy_kwh = r.total_energy_kwh;
      totals.total_cf_g = r.total_cf_g;
      totals.total_cf_kg = r.total_cf_g / 1000.0;
      totals.reduction_pct = round_to(reduction_pct(baseline->total_cf_g, r.total_cf_g), 2);
      report.scenarios.push_back(std::move(totals));
      break;
    }
  }

  double annual = 0.0;
  if (params.annual_reduction_per_unit_kg) {
    annual = *params.annual_reduction_per_unit_kg;
  } else {
    // The simulated cluster is one unit: best scenario saving, annualised.
    double best_saving_g = 0.0;
    for (const auto& r : results) best_saving_g = std::max(best_saving_g, baseline->total_cf_g - r.total_cf_g);
    annual = best_saving_g / 1000.0 * (8760.0 / static_cast<double>(baseline->hours()));
  }
  if (annual > 0.0) report.projection = project(params, annual);
  return report;
}

inline nlohmann::json to_json(const EmissionsReport& report) {
  using nlohmann::json;
  json meta = {
      {"start", format_timestamp(report.metadata.start)},
      {"horizon_hours", report.metadata.horizon_hours},
      {"config_digest", report.metadata.config_digest},
      {"forecast_method", report.metadata.forecast_method},
      {"epoch_hours", report.metadata.epoch_hours},
  };
  json scenarios = json::array();
  for (const auto& s : report.scenarios) {
    json nodes = json::array();
    for (const auto& n : s.nodes)
      nodes.push_back({{"node_id", n.node_id},
                       {"energy_kwh", n.energy_kwh},
                       {"cf_g", n.cf_g},
                       {"cf_kg", n.cf_kg},
                       {"powered_hours", n.powered_hours}});
    scenarios.push_back({{"scenario", std::string(to_string(s.scenario))},
                         {"total_energy_kwh", s.total_energy_kwh},
                         {"total_cf_g", s.total_cf_g},
                         {"total_cf_kg", s.total_cf_kg},
                         {"reduction_pct", s.reduction_pct},
                         {"nodes", std::move(nodes)}});
  }
  json out = {{"metadata", std::move(meta)}, {"scenarios", std::move(scenarios)}};
  if (report.projection) {
    const auto& p = *report.projection;
    out["projection"] = {{"target_kg", p.target_kg},
                         {"annual_reduction_per_unit_kg", p.annual_reduction_per_unit_kg},
                         {"years", p.years},
                         {"units_required", p.units_required},
                         {"units_required_over_years", p.units_required_over_years},
                         {"tree_years", p.tree_years},
                         {"car_years", p.car_years},
                         {"eco_cost_eur", p.eco_cost_eur}};
  }
  return out;
}

inline EmissionsReport report_from_json(const nlohmann::json& j) {
  try {
    EmissionsReport report;
    const auto& meta = j.at("metadata");
    const auto start = parse_timestamp(meta.at("start").get<std::string>());
    if (!start) fail(ErrorKind::ParseError, "report: bad metadata.start");
    report.metadata.start = *start;
    report.metadata.horizon_hours = meta.at("horizon_hours").get<std::uint64_t>();
    report.metadata.config_digest = meta.at("config_digest").get<std::string>();
    report.metadata.forecast_method = meta.at("forecast_method").get<std::string>();
    report.metadata.epoch_hours = meta.at("epoch_hours").get<std::uint64_t>();
    for (const auto& s : j.at("scenarios")) {
      ScenarioTotals totals;
      const auto kind = parse_scenario(s.at("scenario").get<std::string>());
      if (!kind) fail(ErrorKind::ParseError, "report: unknown scenario");
      totals.scenario = *kind;
      totals.total_energy_kwh = s.at("total_energy_kwh").get<double>();
      totals.total_cf_g = s.at("total_cf_g").get<double>();
      totals.total_cf_kg = s.at("total_cf_kg").get<double>();
      totals.reduction_pct = s.at("reduction_pct").get<double>();
      for (const auto& n : s.at("nodes"))
        totals.nodes.push_back({n.at("node_id").get<std::string>(), n.at("energy_kwh").get<double>(),
                                n.at("cf_g").get<double>(), n.at("cf_kg").get<double>(),
                                n.at("powered_hours").get<std::uint64_t>()});
      report.scenarios.push_back(std::move(totals));
    }
    if (j.contains("projection")) {
      const auto& pj = j.at("projection");
      Projection p;
      p.target_kg = pj.at("target_kg").get<double>();
      p.annual_reduction_per_unit_kg = pj.at("annual_reduction_per_unit_kg").get<double>();
      p.years = pj.at("years").get<int>();
      p.units_required = pj.at("units_required").get<std::uint64_t>();
      p.units_required_over_years = pj.at("units_required_over_years").get<std::uint64_t>();
      p.tree_years = pj.at("tree_years").get<double>();
      p.car_years = pj.at("car_years").get<double>();
      p.eco_cost_eur = pj.at("eco_cost_eur").get<std::map<std::string, double>>();
      report.projection = p;
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, std::string("report: ") + e.what());
  }
}

inline constexpr std::string_view kHourlyCfCsvHeader = "hour,scenario,node_id,cf_g";

struct RenderedReport {
  std::string report_json;
  /// One row per scenario x hour x node.
  std::string hourly_cf_csv;
  /// Hourly cluster footprint, one column per scenario.
  std::string hourly_cf_by_scenario_csv;
  /// Per-node and total energy/footprint per scenario.
  std::string summary_csv;
};

inline RenderedReport render_report(std::span<const ScenarioResult> results, const ProjectionParams& params,
                                    ReportMetadata metadata) {
  const auto report = build_report(results, params, std::move(metadata));
  RenderedReport out;
  out.report_json = to_json(report).dump(2) + "\n";

  std::vector<const ScenarioResult*> ordered;
  for (auto kind : kAllScenarios)
    for (const auto& r : results)
      if (r.scenario == kind) {
        ordered.push_back(&r);
        break;
      }

  using detail::format_double;
  std::ostringstream hourly;
  hourly << kHourlyCfCsvHeader << '\n';
  for (const auto* r : ordered)
    for (std::size_t h = 0; h < r->hours(); ++h)
      for (std::size_t i = 0; i < r->node_ids.size(); ++i)
        hourly << h << ',' << to_string(r->scenario) << ',' << r->node_ids[i] << ','
               << format_double(r->footprints[i].values[h]) << '\n';
  out.hourly_cf_csv = hourly.str();

  std::ostringstream plot;
  plot << "hour,timestamp";
  for (const auto* r : ordered) plot << ',' << to_string(r->scenario);
  plot << '\n';
  const std::size_t hours = ordered.front()->hours();
  for (std::size_t h = 0; h < hours; ++h) {
    plot << h << ',' << format_timestamp(report.metadata.start + kHour * static_cast<long>(h));
    for (const auto* r : ordered) plot << ',' << format_double(r->hour_cf_g(h));
    plot << '\n';
  }
  out.hourly_cf_by_scenario_csv = plot.str();

  std::ostringstream summary;
  summary << "scenario,node_id,energy_kwh,cf_kg,reduction_pct\n";
  for (const auto& s : report.scenarios) {
    for (const auto& n : s.nodes)
      summary << to_string(s.scenario) << ',' << n.node_id << ',' << format_double(n.energy_kwh) << ','
              << format_double(n.cf_kg) << ",\n";
    summary << to_string(s.scenario) << ",TOTAL," << format_double(s.total_energy_kwh) << ','
            << format_double(s.total_cf_kg) << ',' << format_double(s.reduction_pct) << '\n';
  }
  out.summary_csv = summary.str();
  return out;
}

}  // namespace maizx
