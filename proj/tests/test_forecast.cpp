#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

namespace maizx {
namespace {

using testing::kind_of;

const ForecastMethod kMethods[] = {ForecastMethod::persistence(), ForecastMethod::seasonal_naive_24h(),
                                   ForecastMethod::moving_average(3), ForecastMethod::moving_average(48)};

TEST(ForecastCi, ConstantHistory) {
  const std::vector<double> history(48, 250.0);
  for (const auto& m : kMethods) EXPECT_EQ(forecast_ci(history, m, 24), std::vector<double>(24, 250.0)) << m.name();
}

TEST(ForecastCi, SeasonalNaiveReproducesPeriod) {
  std::vector<double> history;
  for (int d = 0; d < 3; ++d)
    for (int h = 0; h < 24; ++h) history.push_back(100.0 + 10.0 * h);
  const auto f = forecast_ci(history, ForecastMethod::seasonal_naive_24h(), 24);
  for (int h = 0; h < 24; ++h) EXPECT_EQ(f[h], 100.0 + 10.0 * h);
}

TEST(ForecastCi, MovingAverageTrailingMean) {
  const std::vector<double> history{999, 5, 100, 200, 300};
  EXPECT_EQ(forecast_ci(history, ForecastMethod::moving_average(3), 2), (std::vector<double>{200, 200}));
}

TEST(ForecastCi, PersistenceRepeatsLast) {
  EXPECT_EQ(forecast_ci(std::vector<double>{1, 2, 7}, ForecastMethod::persistence(), 3), (std::vector<double>{7, 7, 7}));
}

TEST(ForecastCi, InsufficientHistory) {
  EXPECT_EQ(kind_of([] { forecast_ci(std::vector<double>(23, 1.0), ForecastMethod::seasonal_naive_24h(), 1); }),
            ErrorKind::InsufficientHistory);
  EXPECT_EQ(kind_of([] { forecast_ci(std::vector<double>(2, 1.0), ForecastMethod::moving_average(3), 1); }),
            ErrorKind::InsufficientHistory);
  EXPECT_EQ(kind_of([] { forecast_ci(std::vector<double>{}, ForecastMethod::persistence(), 1); }),
            ErrorKind::InsufficientHistory);
  EXPECT_EQ(method_for_history(ForecastMethod::seasonal_naive_24h(), 10), ForecastMethod::persistence());
  EXPECT_EQ(method_for_history(ForecastMethod::seasonal_naive_24h(), 24), ForecastMethod::seasonal_naive_24h());
}

TEST(ForecastCi, Properties) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> len(48, 400), horizon(1, 100);
  for (int trial = 0; trial < 200; ++trial) {
    const auto day = testing::random_trace(rng, 24, 0.0, 700.0);
    std::vector<double> history;
    const int n = len(rng);
    for (int h = 0; h < n; ++h) history.push_back(day[static_cast<std::size_t>(h) % 24]);
    const int H = horizon(rng);
    const auto f = forecast_ci(history, ForecastMethod::seasonal_naive_24h(), static_cast<std::size_t>(H));
    double mae = 0.0;
    for (int k = 0; k < H; ++k) mae += std::abs(f[static_cast<std::size_t>(k)] - day[static_cast<std::size_t>(n + k) % 24]);
    EXPECT_EQ(mae, 0.0);

    const auto noisy = testing::random_trace(rng, static_cast<std::size_t>(n), 0.0, 700.0);
    for (const auto& m : kMethods)
      for (double v : forecast_ci(noisy, m, static_cast<std::size_t>(H))) EXPECT_GE(v, 0.0);
  }
}

TEST(Fcfp, Examples) {
  const Node node("n", Zone("ES"), 1.5, 0, 300, 1);
  EXPECT_EQ(fcfp(node, std::vector<double>{0, 0, 0}, std::vector<double>{100, 200, 300}), 0.0);
  EXPECT_NEAR(fcfp(node, std::vector<double>{0.3, 0.3}, std::vector<double>{100, 200}), 45.0 + 90.0, 1e-9);
  const std::vector<double> energy{0.2, 0.7, 1.1};
  EXPECT_NEAR(fcfp(node, energy, std::vector<double>{220, 220, 220}), 2.0 * 1.5 * 220, 1e-9);
  EXPECT_EQ(kind_of([&] { fcfp(node, std::vector<double>{1}, std::vector<double>{1, 2}); }), ErrorKind::LengthMismatch);
}

TEST(Fcfp, LinearInPlannedEnergy) {
  std::mt19937_64 rng(23);
  const Node node("n", Zone("ES"), 1.3, 0, 300, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const auto energy = testing::random_trace(rng, 24, 0.0, 2.0);
    const auto forecast = testing::random_trace(rng, 24, 0.0, 600.0);
    std::vector<double> scaled = energy;
    for (auto& e : scaled) e *= 3.5;
    EXPECT_LE(testing::rel_err(fcfp(node, scaled, forecast), 3.5 * fcfp(node, energy, forecast)), 1e-12);
  }
}

TEST(ForecastMethod, ParseNames) {
  for (const auto& m : kMethods) EXPECT_EQ(ForecastMethod::parse(m.name()), m);
  EXPECT_EQ(ForecastMethod::parse("ma:6"), ForecastMethod::moving_average(6));
  EXPECT_FALSE(ForecastMethod::parse("ma:0"));
  EXPECT_FALSE(ForecastMethod::parse("arima"));
}

}  // namespace
}  // namespace maizx
