#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "maizx/carbon.hpp"
#include "maizx/error.hpp"
#include "maizx/forecast.hpp"
#include "maizx/model.hpp"
#include "maizx/ranking.hpp"

namespace maizx {

/// Node power draw in watts for a utilization in [0, 1]; 0 W when off.
inline double power_of(const Node& node, double utilization, bool powered) {
  if (!(utilization >= 0.0 && utilization <= 1.0))
    fail(ErrorKind::DomainError, "node " + node.id() + ": utilization must be in [0, 1]");
  if (!powered) return 0.0;
  return node.idle_power_w() + (node.max_power_w() - node.idle_power_w()) * utilization;
}

struct NodeHour {
  double utilization = 0.0;
  bool powered = false;

  friend bool operator==(const NodeHour&, const NodeHour&) = default;
};

/// Hour-major utilization and power state for every node of a cluster.
class Allocation {
 public:
  Allocation() = default;
  Allocation(std::size_t hours, std::size_t nodes) : nodes_(nodes), cells_(hours * nodes) {}

  std::size_t hours() const noexcept { return nodes_ == 0 ? 0 : cells_.size() / nodes_; }
  std::size_t nodes() const noexcept { return nodes_; }
  NodeHour& at(std::size_t hour, std::size_t node) { return cells_[hour * nodes_ + node]; }
  const NodeHour& at(std::size_t hour, std::size_t node) const { return cells_[hour * nodes_ + node]; }

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::size_t nodes_ = 0;
  std::vector<NodeHour> cells_;
};

struct ScenarioResult {
  ScenarioKind scenario = ScenarioKind::Baseline;
  std::vector<std::string> node_ids;
  Allocation allocation;
  std::vector<std::vector<double>> energy_kwh;  // [node][hour]
  std::vector<FootprintSeries> footprints;      // [node]
  double total_energy_kwh = 0.0;
  double total_cf_g = 0.0;

  std::size_t hours() const noexcept { return allocation.hours(); }

  double node_energy_kwh(std::size_t node) const {
    return std::accumulate(energy_kwh[node].begin(), energy_kwh[node].end(), 0.0);
  }
  double node_cf_g(std::size_t node) const { return footprints[node].total(); }

  double hour_cf_g(std::size_t hour) const {
    double sum = 0.0;
    for (const auto& fp : footprints) sum += fp.values[hour];
    return sum;
  }
};

struct ScenarioOptions {
  RankingWeights weights{};
  ForecastMethod forecast = ForecastMethod::seasonal_naive_24h();
  std::size_t forecast_horizon_h = 24;
  /// Hours between re-rankings in scenario C (1..24).
  std::size_t epoch_hours = 1;
  /// Trailing window, including the decision hour, over which the CFP term
  /// accumulates full-load footprint.
  std::size_t cfp_window_hours = 1;
};

namespace detail {

inline void check_inputs(const Cluster& cluster, const WorkloadSpec& workload) {
  if (cluster.size() == 0) fail(ErrorKind::EmptyCluster, "cluster has no nodes");
  if (workload.hours() != cluster.horizon_hours())
    fail(ErrorKind::HorizonMismatch, "workload covers " + std::to_string(workload.hours()) +
                                         " h but the simulation horizon is " +
                                         std::to_string(cluster.horizon_hours()) + " h");
  double capacity = 0.0;
  for (const auto& node : cluster.nodes()) capacity += node.capacity_units();
  const auto demand = workload.demand();
  for (std::size_t h = 0; h < demand.size(); ++h)
    if (demand[h] > capacity * (1.0 + 1e-12))
      fail(ErrorKind::DemandOverflow, "hour " + std::to_string(h) + " (" +
                                          format_timestamp(cluster.start() + kHour * static_cast<long>(h)) +
                                          "): demand " + std::to_string(demand[h]) +
                                          " exceeds total capacity " + std::to_string(capacity));
}

/// Utilization for `units` of work on a node, clamped against rounding.
inline double utilization_for(const Node& node, double units) {
  return std::clamp(units / node.capacity_units(), 0.0, 1.0);
}

/// Splits demand equally; nodes that saturate keep their capacity and the
/// excess is re-split among the rest.
inline std::vector<double> even_split(const Cluster& cluster, double demand) {
  const std::size_t n = cluster.size();
  std::vector<double> units(n, 0.0);
  std::vector<bool> open(n, true);
  std::size_t open_count = n;
  double remaining = demand;
  while (open_count > 0 && remaining > 0.0) {
    const double share = remaining / static_cast<double>(open_count);
    bool capped_any = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (open[i] && cluster.node(i).capacity_units() <= share) {
        units[i] = cluster.node(i).capacity_units();
        remaining -= units[i];
        open[i] = false;
        --open_count;
        capped_any = true;
      }
    }
    if (!capped_any) {
      for (std::size_t i = 0; i < n; ++i)
        if (open[i]) units[i] = share;
      break;
    }
  }
  return units;
}

/// Fills nodes in `order` up to capacity until the demand is served.
inline std::vector<double> greedy_fill(const Cluster& cluster, std::span<const std::size_t> order, double demand) {
  std::vector<double> units(cluster.size(), 0.0);
  double remaining = demand;
  for (std::size_t i : order) {
    if (remaining <= 0.0) break;
    const double take = std::min(remaining, cluster.node(i).capacity_units());
    units[i] = take;
    remaining -= take;
  }
  return units;
}

/// Node indices ordered by mean carbon intensity over the horizon, then id.
inline std::vector<std::size_t> order_by_mean_ci(const Cluster& cluster) {
  std::vector<double> mean(cluster.size());
  for (std::size_t i = 0; i < cluster.size(); ++i) {
    const auto values = cluster.ci(i).values();
    mean[i] = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  }
  std::vector<std::size_t> order(cluster.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (mean[a] != mean[b]) return mean[a] < mean[b];
    return cluster.node(a).id() < cluster.node(b).id();
  });
  return order;
}

inline ScenarioResult finalize(const Cluster& cluster, ScenarioKind kind, Allocation allocation) {
  ScenarioResult result;
  result.scenario = kind;
  const std::size_t hours = allocation.hours();
  for (std::size_t i = 0; i < cluster.size(); ++i) {
    const Node& node = cluster.node(i);
    result.node_ids.push_back(node.id());
    std::vector<double> energy(hours);
    for (std::size_t h = 0; h < hours; ++h) {
      const auto& cell = allocation.at(h, i);
      energy[h] = power_of(node, cell.utilization, cell.powered) / 1000.0;
    }
    result.footprints.push_back(node_footprint(node, energy, cluster.ci(i)));
    result.total_energy_kwh += std::accumulate(energy.begin(), energy.end(), 0.0);
    result.total_cf_g += result.footprints.back().total();
    result.energy_kwh.push_back(std::move(energy));
  }
  result.allocation = std::move(allocation);
  return result;
}

inline void place(const Cluster& cluster, Allocation& allocation, std::size_t hour, std::span<const double> units) {
  for (std::size_t i = 0; i < cluster.size(); ++i) {
    auto& cell = allocation.at(hour, i);
    cell.utilization = utilization_for(cluster.node(i), units[i]);
    cell.powered = cell.powered || cell.utilization > 0.0;
  }
}

}  // namespace detail

/// Carbon-blind reference: load spread evenly, every node on.
inline ScenarioResult run_baseline(const Cluster& cluster, const WorkloadSpec& workload) {
  detail::check_inputs(cluster, workload);
  Allocation allocation(cluster.horizon_hours(), cluster.size());
  for (std::size_t h = 0; h < cluster.horizon_hours(); ++h) {
    for (std::size_t i = 0; i < cluster.size(); ++i) allocation.at(h, i).powered = true;
    detail::place(cluster, allocation, h, detail::even_split(cluster, workload.demand()[h]));
  }
  return detail::finalize(cluster, ScenarioKind::Baseline, std::move(allocation));
}

/// All load on the node with the lowest mean intensity over the horizon,
/// spilling in the same order; the other nodes stay on at idle.
inline ScenarioResult run_scenario_a(const Cluster& cluster, const WorkloadSpec& workload) {
  detail::check_inputs(cluster, workload);
  const auto order = detail::order_by_mean_ci(cluster);
  Allocation allocation(cluster.horizon_hours(), cluster.size());
  for (std::size_t h = 0; h < cluster.horizon_hours(); ++h) {
    for (std::size_t i = 0; i < cluster.size(); ++i) allocation.at(h, i).powered = true;
    detail::place(cluster, allocation, h, detail::greedy_fill(cluster, order, workload.demand()[h]));
  }
  return detail::finalize(cluster, ScenarioKind::A, std::move(allocation));
}

/// Same target as scenario A, but nodes without load are switched off. The
/// target itself stays on even when there is no demand.
inline ScenarioResult run_scenario_b(const Cluster& cluster, const WorkloadSpec& workload) {
  detail::check_inputs(cluster, workload);
  const auto order = detail::order_by_mean_ci(cluster);
  Allocation allocation(cluster.horizon_hours(), cluster.size());
  for (std::size_t h = 0; h < cluster.horizon_hours(); ++h) {
    allocation.at(h, order.front()).powered = true;
    detail::place(cluster, allocation, h, detail::greedy_fill(cluster, order, workload.demand()[h]));
  }
  return detail::finalize(cluster, ScenarioKind::B, std::move(allocation));
}

/// Ranking inputs for every node at decision hour `hour`. `serving` marks
/// nodes that carried load in the previous hour; moving work off them costs
/// the current job urgency.
inline std::vector<RankingTerms> ranking_terms_at(const Cluster& cluster, const WorkloadSpec& workload,
                                                  const ScenarioOptions& options, std::size_t hour,
                                                  const std::vector<bool>& serving) {
  const std::size_t window = std::max<std::size_t>(options.cfp_window_hours, 1);
  const std::size_t first = hour + 1 >= window ? hour + 1 - window : 0;
  const Timestamp now = cluster.start() + kHour * static_cast<long>(hour);
  const double urgency = schedule_weight(workload.jobs(), now);
  const bool anyone_serving = std::find(serving.begin(), serving.end(), true) != serving.end();

  std::vector<RankingTerms> terms;
  terms.reserve(cluster.size());
  for (std::size_t i = 0; i < cluster.size(); ++i) {
    const Node& node = cluster.node(i);
    const auto ci = cluster.ci(i).values();
    const double full_load_kwh = node.max_power_w() / 1000.0;

    double cfp = 0.0;
    for (std::size_t h = first; h <= hour; ++h) cfp += compute_cf(full_load_kwh, node.pue(), ci[h]);

    double forecast_fp = 0.0;
    if (options.forecast_horizon_h > 0) {
      const auto history = ci.first(hour + 1);
      const auto method = method_for_history(options.forecast, history.size());
      const auto forecast = forecast_ci(history, method, options.forecast_horizon_h);
      const std::vector<double> planned(forecast.size(), full_load_kwh);
      forecast_fp = fcfp(node, planned, forecast);
    }

    const double schedule = anyone_serving && !serving[i] ? urgency : 0.0;
    terms.push_back({node.id(), cfp, forecast_fp, cp_ratio(node), schedule});
  }
  return terms;
}

/// Re-ranks nodes every decision epoch and fills the best-ranked first;
/// nodes without load are off except the top-ranked one.
inline ScenarioResult run_scenario_c(const Cluster& cluster, const WorkloadSpec& workload,
                                     const ScenarioOptions& options = {}) {
  detail::check_inputs(cluster, workload);
  if (options.epoch_hours < 1 || options.epoch_hours > 24)
    fail(ErrorKind::DomainError, "decision epoch must be between 1 and 24 hours");
  Allocation allocation(cluster.horizon_hours(), cluster.size());
  std::vector<std::size_t> order(cluster.size());
  std::vector<bool> serving(cluster.size(), false);
  for (std::size_t h = 0; h < cluster.horizon_hours(); ++h) {
    if (h % options.epoch_hours == 0) {
      const auto terms = ranking_terms_at(cluster, workload, options, h, serving);
      const auto ranked = maiz_ranking(terms, options.weights);
      for (std::size_t k = 0; k < ranked.size(); ++k) order[k] = *cluster.index_of(ranked[k].node_id);
    }
    allocation.at(h, order.front()).powered = true;
    const auto units = detail::greedy_fill(cluster, order, workload.demand()[h]);
    detail::place(cluster, allocation, h, units);
    for (std::size_t i = 0; i < cluster.size(); ++i) serving[i] = units[i] > 0.0;
  }
  return detail::finalize(cluster, ScenarioKind::C, std::move(allocation));
}

inline ScenarioResult run_scenario(ScenarioKind kind, const Cluster& cluster, const WorkloadSpec& workload,
                                   const ScenarioOptions& options = {}) {
  switch (kind) {
    case ScenarioKind::Baseline: return run_baseline(cluster, workload);
    case ScenarioKind::A: return run_scenario_a(cluster, workload);
    case ScenarioKind::B: return run_scenario_b(cluster, workload);
    case ScenarioKind::C: return run_scenario_c(cluster, workload, options);
  }
  return run_baseline(cluster, workload);
}

/// Percentage reduction of `scenario_g` relative to `baseline_g`.
inline double reduction_pct(double baseline_g, double scenario_g) {
  if (!(baseline_g > 0.0)) fail(ErrorKind::ZeroBaseline, "baseline footprint must be > 0");
  return 100.0 * (baseline_g - scenario_g) / baseline_g;
}

}  // namespace maizx
