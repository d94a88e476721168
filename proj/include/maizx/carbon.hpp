#pragma once

#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "maizx/error.hpp"
#include "maizx/model.hpp"

namespace maizx {

/// Carbon footprint in grams: energy (kWh) x PUE x carbon intensity (g/kWh).
inline double compute_cf(double ec_kwh, double pue, double ci_g_per_kwh) {
  if (!(ec_kwh >= 0.0) || !(ci_g_per_kwh >= 0.0) || !(pue >= 1.0))
    fail(ErrorKind::DomainError, "compute_cf requires energy >= 0, pue >= 1 and intensity >= 0");
  return ec_kwh * pue * ci_g_per_kwh;
}

struct FootprintSeries {
  std::string node_id;
  std::vector<double> values;  // gCO2 per hour

  double total() const { return std::accumulate(values.begin(), values.end(), 0.0); }
  friend bool operator==(const FootprintSeries&, const FootprintSeries&) = default;
};

inline FootprintSeries node_footprint(const Node& node, std::span<const double> energy_kwh,
                                      const CarbonIntensitySeries& ci) {
  if (ci.zone() != node.zone())
    fail(ErrorKind::ZoneMismatch, "node " + node.id() + " is in zone " + node.zone().id() +
                                      " but the series is for " + ci.zone().id());
  if (energy_kwh.size() != ci.size())
    fail(ErrorKind::LengthMismatch, "node " + node.id() + ": " + std::to_string(energy_kwh.size()) +
                                        " energy values vs " + std::to_string(ci.size()) + " intensity values");
  FootprintSeries out{node.id(), {}};
  out.values.reserve(energy_kwh.size());
  for (std::size_t h = 0; h < energy_kwh.size(); ++h)
    out.values.push_back(compute_cf(energy_kwh[h], node.pue(), ci[h]));
  return out;
}

}  // namespace maizx
