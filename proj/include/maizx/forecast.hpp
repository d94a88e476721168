#pragma once

#include <charconv>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maizx/carbon.hpp"
#include "maizx/error.hpp"
#include "maizx/model.hpp"

namespace maizx {

inline constexpr std::size_t kDayHours = 24;

/// Forecasters for hourly carbon intensity. All of them are plain
/// functions of the trailing history, so they never produce negative values
/// from non-negative input.
class ForecastMethod {
 public:
  enum class Kind { Persistence, SeasonalNaive24h, MovingAverage };

  static ForecastMethod persistence() { return ForecastMethod(Kind::Persistence, 1); }
  static ForecastMethod seasonal_naive_24h() { return ForecastMethod(Kind::SeasonalNaive24h, kDayHours); }
  static ForecastMethod moving_average(std::size_t window_hours) {
    if (window_hours < 1) fail(ErrorKind::DomainError, "moving average window must be >= 1 hour");
    return ForecastMethod(Kind::MovingAverage, window_hours);
  }

  Kind kind() const noexcept { return kind_; }
  std::size_t window_hours() const noexcept { return window_; }

  /// History length the method needs.
  std::size_t min_history() const noexcept { return kind_ == Kind::Persistence ? 1 : window_; }

  std::string name() const {
    switch (kind_) {
      case Kind::Persistence: return "persistence";
      case Kind::SeasonalNaive24h: return "seasonal_naive_24h";
      case Kind::MovingAverage: return "moving_average:" + std::to_string(window_);
    }
    return "persistence";
  }

  /// Accepts the names produced by name(); "seasonal" and "ma:N" are short forms.
  static std::optional<ForecastMethod> parse(std::string_view s) {
    if (s == "persistence") return persistence();
    if (s == "seasonal_naive_24h" || s == "seasonal") return seasonal_naive_24h();
    for (std::string_view prefix : {std::string_view("moving_average:"), std::string_view("ma:")}) {
      if (s.starts_with(prefix)) {
        const auto digits = s.substr(prefix.size());
        std::size_t window = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), window);
        if (ec != std::errc{} || ptr != digits.data() + digits.size() || window < 1) return std::nullopt;
        return moving_average(window);
      }
    }
    return std::nullopt;
  }

  friend bool operator==(const ForecastMethod&, const ForecastMethod&) = default;

 private:
  ForecastMethod(Kind kind, std::size_t window) : kind_(kind), window_(window) {}
  Kind kind_;
  std::size_t window_;
};

/// Forecasts the `horizon_h` hours that follow `history`.
inline std::vector<double> forecast_ci(std::span<const double> history, const ForecastMethod& method,
                                       std::size_t horizon_h) {
  if (history.size() < method.min_history())
    fail(ErrorKind::InsufficientHistory, method.name() + " needs " + std::to_string(method.min_history()) +
                                             " h of history, got " + std::to_string(history.size()));
  std::vector<double> out(horizon_h);
  const std::size_t n = history.size();
  switch (method.kind()) {
    case ForecastMethod::Kind::Persistence:
      std::fill(out.begin(), out.end(), history.back());
      break;
    case ForecastMethod::Kind::SeasonalNaive24h:
      // Beyond one day the forecast feeds on itself, which for a pure
      // seasonal-naive model is the last observed day repeated.
      for (std::size_t k = 0; k < horizon_h; ++k) out[k] = history[n - kDayHours + (k % kDayHours)];
      break;
    case ForecastMethod::Kind::MovingAverage: {
      double sum = 0.0;
      for (std::size_t i = n - method.window_hours(); i < n; ++i) sum += history[i];
      std::fill(out.begin(), out.end(), sum / static_cast<double>(method.window_hours()));
      break;
    }
  }
  return out;
}

inline std::vector<double> forecast_ci(const CarbonIntensitySeries& history, const ForecastMethod& method,
                                       std::size_t horizon_h) {
  return forecast_ci(history.values(), method, horizon_h);
}

/// The configured method, or persistence when the history is too short for
/// it. Used by the scenario engine early in a run.
inline ForecastMethod method_for_history(const ForecastMethod& preferred, std::size_t history_len) {
  return history_len >= preferred.min_history() ? preferred : ForecastMethod::persistence();
}

/// Forecasted carbon footprint (g) of running `planned_energy` on `node`.
inline double fcfp(const Node& node, std::span<const double> planned_energy_kwh, std::span<const double> forecast) {
  if (planned_energy_kwh.size() != forecast.size())
    fail(ErrorKind::LengthMismatch, "fcfp: " + std::to_string(planned_energy_kwh.size()) + " energy values vs " +
                                        std::to_string(forecast.size()) + " forecast values");
  double total = 0.0;
  for (std::size_t h = 0; h < forecast.size(); ++h) total += compute_cf(planned_energy_kwh[h], node.pue(), forecast[h]);
  return total;
}

}  // namespace maizx
