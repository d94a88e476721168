#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "maizx/error.hpp"
#include "maizx/time.hpp"

namespace maizx {

/// Grid region identifier such as "ES", "NL" or "DE".
class Zone {
 public:
  Zone() = default;
  explicit Zone(std::string id) : id_(std::move(id)) {
    if (id_.empty()) fail(ErrorKind::DomainError, "zone id must be non-empty");
  }

  const std::string& id() const noexcept { return id_; }

  friend bool operator==(const Zone&, const Zone&) = default;
  friend auto operator<=>(const Zone&, const Zone&) = default;

 private:
  std::string id_;
};

/// A compute location. Power is affine in utilization between idle and max.
class Node {
 public:
  Node(std::string id, Zone zone, double pue, double idle_power_w, double max_power_w,
       double capacity_units)
      : id_(std::move(id)),
        zone_(std::move(zone)),
        pue_(pue),
        idle_power_w_(idle_power_w),
        max_power_w_(max_power_w),
        capacity_units_(capacity_units) {
    if (id_.empty()) fail(ErrorKind::DomainError, "node id must be non-empty");
    if (zone_.id().empty()) fail(ErrorKind::DomainError, "node " + id_ + ": zone must be set");
    if (!(pue_ >= 1.0) || !std::isfinite(pue_))
      fail(ErrorKind::DomainError, "node " + id_ + ": pue must be >= 1");
    if (!(idle_power_w_ >= 0.0) || !std::isfinite(idle_power_w_))
      fail(ErrorKind::DomainError, "node " + id_ + ": idle_power_w must be >= 0");
    if (!(max_power_w_ >= idle_power_w_) || !std::isfinite(max_power_w_))
      fail(ErrorKind::DomainError, "node " + id_ + ": max_power_w must be >= idle_power_w");
    if (!(capacity_units_ > 0.0) || !std::isfinite(capacity_units_))
      fail(ErrorKind::DomainError, "node " + id_ + ": capacity_units must be > 0");
  }

  const std::string& id() const noexcept { return id_; }
  const Zone& zone() const noexcept { return zone_; }
  double pue() const noexcept { return pue_; }
  double idle_power_w() const noexcept { return idle_power_w_; }
  double max_power_w() const noexcept { return max_power_w_; }
  double capacity_units() const noexcept { return capacity_units_; }

  friend bool operator==(const Node&, const Node&) = default;

 private:
  std::string id_;
  Zone zone_;
  double pue_;
  double idle_power_w_;
  double max_power_w_;
  double capacity_units_;
};

/// Hourly gCO2/kWh samples for one zone, gap-free.
class CarbonIntensitySeries {
 public:
  CarbonIntensitySeries(Zone zone, Timestamp start, std::vector<double> values)
      : zone_(std::move(zone)), start_(start), values_(std::move(values)) {
    if (!is_hour_aligned(start_))
      fail(ErrorKind::DomainError,
           "carbon intensity series " + zone_.id() + " must start on an hour boundary");
    if (values_.empty())
      fail(ErrorKind::DomainError, "carbon intensity series " + zone_.id() + " is empty");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!(values_[i] >= 0.0) || !std::isfinite(values_[i]))
        fail(ErrorKind::DomainError, "carbon intensity series " + zone_.id() +
                                         ": negative or non-finite value at " +
                                         format_timestamp(start_ + kHour * static_cast<long>(i)));
    }
  }

  const Zone& zone() const noexcept { return zone_; }
  Timestamp start() const noexcept { return start_; }
  Timestamp end() const noexcept { return start_ + kHour * static_cast<long>(values_.size()); }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t hour) const { return values_[hour]; }

  friend bool operator==(const CarbonIntensitySeries&, const CarbonIntensitySeries&) = default;

 private:
  Zone zone_;
  Timestamp start_;
  std::vector<double> values_;
};

/// Sub-hourly wattage samples for one node.
class PowerSeries {
 public:
  static constexpr long kDefaultCadenceS = 20;

  PowerSeries(std::string node_id, Timestamp start, long cadence_s, std::vector<double> values)
      : node_id_(std::move(node_id)), start_(start), cadence_s_(cadence_s), values_(std::move(values)) {
    if (cadence_s_ <= 0) fail(ErrorKind::DomainError, "power series " + node_id_ + ": cadence must be > 0");
    for (double v : values_) {
      if (!(v >= 0.0) || !std::isfinite(v))
        fail(ErrorKind::NegativePower, "power series " + node_id_ + ": negative or non-finite sample");
    }
  }

  const std::string& node_id() const noexcept { return node_id_; }
  Timestamp start() const noexcept { return start_; }
  long cadence_s() const noexcept { return cadence_s_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  friend bool operator==(const PowerSeries&, const PowerSeries&) = default;

 private:
  std::string node_id_;
  Timestamp start_;
  long cadence_s_;
  std::vector<double> values_;
};

struct Job {
  std::string id;
  int priority = 0;  // higher is more urgent
  std::optional<Timestamp> deadline;

  friend bool operator==(const Job&, const Job&) = default;
};

/// Hourly compute demand (abstract units of work per hour) plus optional jobs.
class WorkloadSpec {
 public:
  WorkloadSpec() = default;
  explicit WorkloadSpec(std::vector<double> demand, std::vector<Job> jobs = {})
      : demand_(std::move(demand)), jobs_(std::move(jobs)) {
    for (std::size_t h = 0; h < demand_.size(); ++h) {
      if (!(demand_[h] >= 0.0) || !std::isfinite(demand_[h]))
        fail(ErrorKind::DomainError, "workload demand at hour " + std::to_string(h) + " must be >= 0");
    }
    std::set<std::string_view> seen;
    for (const auto& job : jobs_) {
      if (job.id.empty()) fail(ErrorKind::DomainError, "job id must be non-empty");
      if (job.priority < 0) fail(ErrorKind::DomainError, "job " + job.id + ": priority must be >= 0");
      if (!seen.insert(job.id).second) fail(ErrorKind::DomainError, "duplicate job id " + job.id);
    }
  }

  static WorkloadSpec constant(double units_per_hour, std::size_t hours, std::vector<Job> jobs = {}) {
    return WorkloadSpec(std::vector<double>(hours, units_per_hour), std::move(jobs));
  }

  std::span<const double> demand() const noexcept { return demand_; }
  std::span<const Job> jobs() const noexcept { return jobs_; }
  std::size_t hours() const noexcept { return demand_.size(); }

  friend bool operator==(const WorkloadSpec&, const WorkloadSpec&) = default;

 private:
  std::vector<double> demand_;
  std::vector<Job> jobs_;
};

/// Weights of the four ranking terms.
class RankingWeights {
 public:
  RankingWeights() = default;
  RankingWeights(double w1, double w2, double w3, double w4) : w_{w1, w2, w3, w4} {
    bool any_positive = false;
    for (double w : w_) {
      if (!(w >= 0.0) || !std::isfinite(w)) fail(ErrorKind::DomainError, "ranking weights must be >= 0");
      any_positive = any_positive || w > 0.0;
    }
    if (!any_positive) fail(ErrorKind::DomainError, "at least one ranking weight must be > 0");
  }

  double cfp() const noexcept { return w_[0]; }
  double fcfp() const noexcept { return w_[1]; }
  double cp_ratio() const noexcept { return w_[2]; }
  double schedule() const noexcept { return w_[3]; }

  friend bool operator==(const RankingWeights&, const RankingWeights&) = default;

 private:
  double w_[4] = {0.4, 0.3, 0.2, 0.1};
};

enum class ScenarioKind { Baseline, A, B, C };

inline constexpr ScenarioKind kAllScenarios[] = {ScenarioKind::Baseline, ScenarioKind::A,
                                                 ScenarioKind::B, ScenarioKind::C};

constexpr std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Baseline: return "baseline";
    case ScenarioKind::A: return "a";
    case ScenarioKind::B: return "b";
    case ScenarioKind::C: return "c";
  }
  return "baseline";
}

inline std::optional<ScenarioKind> parse_scenario(std::string_view s) {
  for (auto kind : kAllScenarios)
    if (to_string(kind) == s) return kind;
  if (s == "A") return ScenarioKind::A;
  if (s == "B") return ScenarioKind::B;
  if (s == "C") return ScenarioKind::C;
  if (s == "Baseline") return ScenarioKind::Baseline;
  return std::nullopt;
}

/// Nodes (sorted by id) paired with the carbon intensity of their zone, all
/// sliced to a common hourly horizon.
class Cluster {
 public:
  std::span<const Node> nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const Node& node(std::size_t i) const { return nodes_[i]; }
  const CarbonIntensitySeries& ci(std::size_t i) const { return zone_series_[ci_index_[i]]; }
  std::span<const CarbonIntensitySeries> zone_series() const noexcept { return zone_series_; }
  Timestamp start() const noexcept { return start_; }
  std::size_t horizon_hours() const noexcept { return horizon_hours_; }

  std::optional<std::size_t> index_of(std::string_view node_id) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].id() == node_id) return i;
    return std::nullopt;
  }

 private:
  friend Cluster validate_cluster(std::vector<Node>, std::vector<CarbonIntensitySeries>,
                                  std::optional<Timestamp>, std::optional<std::size_t>);
  std::vector<Node> nodes_;
  std::vector<CarbonIntensitySeries> zone_series_;
  std::vector<std::size_t> ci_index_;
  Timestamp start_{};
  std::size_t horizon_hours_ = 0;
};

/// Checks that every node has exactly one carbon intensity series for its
/// zone and that all series cover [start, start + horizon). When start or
/// horizon are omitted, the widest window covered by every used series is
/// taken. Series for zones without nodes are dropped.
inline Cluster validate_cluster(std::vector<Node> nodes, std::vector<CarbonIntensitySeries> series,
                                std::optional<Timestamp> start = std::nullopt,
                                std::optional<std::size_t> horizon_hours = std::nullopt) {
  if (nodes.empty()) fail(ErrorKind::EmptyCluster, "cluster has no nodes");
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.id() < b.id(); });
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (nodes[i].id() == nodes[i - 1].id()) fail(ErrorKind::DuplicateNodeId, "duplicate node id " + nodes[i].id());

  std::map<std::string, std::size_t> by_zone;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!by_zone.emplace(series[i].zone().id(), i).second)
      fail(ErrorKind::DuplicateZoneSeries, "more than one carbon intensity series for zone " + series[i].zone().id());
  }

  std::set<std::string> used;
  for (const auto& node : nodes) {
    if (!by_zone.contains(node.zone().id()))
      fail(ErrorKind::MissingZoneSeries,
           "node " + node.id() + ": no carbon intensity series for zone " + node.zone().id());
    used.insert(node.zone().id());
  }

  Timestamp lo = Timestamp::min();
  Timestamp hi = Timestamp::max();
  for (const auto& zone : used) {
    const auto& s = series[by_zone.at(zone)];
    lo = std::max(lo, s.start());
    hi = std::min(hi, s.end());
  }
  const Timestamp begin = start.value_or(lo);
  if (!is_hour_aligned(begin)) fail(ErrorKind::HorizonMismatch, "simulation start must be on an hour boundary");
  if (begin < lo || begin >= hi)
    fail(ErrorKind::HorizonMismatch, "simulation start " + format_timestamp(begin) +
                                         " is outside the window covered by every zone");
  const auto available = static_cast<std::size_t>((hi - begin) / kHour);
  const std::size_t horizon = horizon_hours.value_or(available);
  if (horizon == 0) fail(ErrorKind::HorizonMismatch, "simulation horizon must be >= 1 hour");
  if (horizon > available) {
    for (const auto& zone : used) {
      const auto& s = series[by_zone.at(zone)];
      if (s.end() < begin + kHour * static_cast<long>(horizon) || s.start() > begin)
        fail(ErrorKind::HorizonMismatch, "carbon intensity series for zone " + zone + " does not cover " +
                                             std::to_string(horizon) + " h from " + format_timestamp(begin));
    }
  }

  Cluster cluster;
  std::map<std::string, std::size_t> slot;
  for (const auto& zone : used) {
    const auto& s = series[by_zone.at(zone)];
    const auto offset = static_cast<std::size_t>((begin - s.start()) / kHour);
    auto values = s.values().subspan(offset, horizon);
    slot[zone] = cluster.zone_series_.size();
    cluster.zone_series_.emplace_back(s.zone(), begin, std::vector<double>(values.begin(), values.end()));
  }
  for (const auto& node : nodes) cluster.ci_index_.push_back(slot.at(node.zone().id()));
  cluster.nodes_ = std::move(nodes);
  cluster.start_ = begin;
  cluster.horizon_hours_ = horizon;
  return cluster;
}

}  // namespace maizx
