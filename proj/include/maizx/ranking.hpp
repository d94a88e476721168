#pragma once

#include <algorithm>
#include <chrono>
#include <span>
#include <string>
#include <vector>

#include "maizx/error.hpp"
#include "maizx/model.hpp"
#include "maizx/time.hpp"

namespace maizx {

// Every ranking term is oriented so that lower is better, and the combined
// score is minimised: the best placement target comes first.

/// Watts at full load per unit of work per hour.
inline double cp_ratio(const Node& node) { return node.max_power_w() / node.capacity_units(); }

/// Urgency of a job set in [0, 1]: the largest priority_norm x
/// deadline_pressure over the jobs, where priority_norm is the priority
/// relative to the highest in the set and deadline_pressure grows linearly
/// over the last 24 h before the deadline (0.5 when there is none).
inline double schedule_weight(std::span<const Job> jobs, Timestamp now) {
  if (jobs.empty()) return 0.0;
  int max_priority = 0;
  for (const auto& job : jobs) max_priority = std::max(max_priority, job.priority);
  if (max_priority == 0) return 0.0;

  double urgency = 0.0;
  for (const auto& job : jobs) {
    const double priority_norm = static_cast<double>(job.priority) / static_cast<double>(max_priority);
    double pressure = 0.5;
    if (job.deadline) {
      const double remaining_h = std::chrono::duration<double, std::ratio<3600>>(*job.deadline - now).count();
      pressure = std::clamp(1.0 - remaining_h / 24.0, 0.0, 1.0);
    }
    urgency = std::max(urgency, priority_norm * pressure);
  }
  return urgency;
}

/// Min-max normalisation onto [0, 1]; a degenerate range maps to zeros.
inline std::vector<double> normalize(std::span<const double> values) {
  if (values.empty()) fail(ErrorKind::InvalidArgument, "normalize needs at least one value");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  std::vector<double> out(values.size(), 0.0);
  if (range > 0.0)
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - lo) / range;
  return out;
}

/// Raw, unnormalised inputs for one candidate node.
struct RankingTerms {
  std::string node_id;
  double cfp = 0.0;
  double fcfp = 0.0;
  double cp_ratio = 0.0;
  double schedule = 0.0;
};

struct NodeScore {
  std::string node_id;
  double cfp_norm = 0.0;
  double fcfp_norm = 0.0;
  double cp_ratio_norm = 0.0;
  double schedule_norm = 0.0;
  double score = 0.0;

  double recompute(const RankingWeights& w) const {
    return w.cfp() * cfp_norm + w.fcfp() * fcfp_norm + w.cp_ratio() * cp_ratio_norm + w.schedule() * schedule_norm;
  }

  friend bool operator==(const NodeScore&, const NodeScore&) = default;
};

/// Scores and orders candidate nodes, best (lowest score) first. Ties are
/// broken by node id.
inline std::vector<NodeScore> maiz_ranking(std::span<const RankingTerms> terms, const RankingWeights& weights) {
  if (terms.empty()) fail(ErrorKind::EmptyCluster, "cannot rank an empty node set");
  const auto column = [&](auto member) {
    std::vector<double> raw;
    raw.reserve(terms.size());
    for (const auto& t : terms) raw.push_back(t.*member);
    return normalize(raw);
  };
  const auto cfp = column(&RankingTerms::cfp);
  const auto fc = column(&RankingTerms::fcfp);
  const auto cp = column(&RankingTerms::cp_ratio);
  const auto sched = column(&RankingTerms::schedule);

  std::vector<NodeScore> scores;
  scores.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    NodeScore s{terms[i].node_id, cfp[i], fc[i], cp[i], sched[i], 0.0};
    s.score = s.recompute(weights);
    scores.push_back(std::move(s));
  }
  std::sort(scores.begin(), scores.end(), [](const NodeScore& a, const NodeScore& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.node_id < b.node_id;
  });
  return scores;
}

/// Convenience form taking per-node term vectors aligned with `nodes`;
/// CP_RATIO is derived from the node itself.
inline std::vector<NodeScore> maiz_ranking(std::span<const Node> nodes, std::span<const double> cfp,
                                           std::span<const double> fcfp, std::span<const double> schedule,
                                           const RankingWeights& weights) {
  if (nodes.empty()) fail(ErrorKind::EmptyCluster, "cannot rank an empty node set");
  if (cfp.size() != nodes.size() || fcfp.size() != nodes.size() || schedule.size() != nodes.size())
    fail(ErrorKind::LengthMismatch, "ranking inputs must cover the same node set");
  std::vector<RankingTerms> terms;
  terms.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    terms.push_back({nodes[i].id(), cfp[i], fcfp[i], cp_ratio(nodes[i]), schedule[i]});
  return maiz_ranking(terms, weights);
}

}  // namespace maizx
