#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "test_support.hpp"

namespace maizx {
namespace {

using testing::kind_of;
using testing::t2022;

std::string ci_csv(const std::vector<std::pair<int, double>>& rows, const std::string& zone = "ES") {
  std::ostringstream out;
  out << "timestamp,zone,carbon_intensity_gco2_per_kwh\n";
  for (auto [hour, value] : rows) out << format_timestamp(t2022() + kHour * hour) << ',' << zone << ',' << value << '\n';
  return out.str();
}

std::string power_csv(const std::vector<std::pair<long, double>>& rows, const std::string& node = "n1") {
  std::ostringstream out;
  out << "timestamp,node_id,power_watts\n";
  for (auto [sec, watts] : rows)
    out << format_timestamp(t2022() + std::chrono::seconds{sec}) << ',' << node << ',' << watts << '\n';
  return out.str();
}

std::vector<std::pair<long, double>> steady(std::size_t n, double watts, long cadence = 20) {
  std::vector<std::pair<long, double>> rows;
  for (std::size_t i = 0; i < n; ++i) rows.emplace_back(static_cast<long>(i) * cadence, watts);
  return rows;
}

TEST(ParseCi, DayOfHours) {
  std::vector<std::pair<int, double>> rows;
  for (int h = 0; h < 24; ++h) rows.emplace_back(h, 100.0 + h);
  const auto series = parse_ci_csv(ci_csv(rows));
  EXPECT_EQ(series.size(), 24u);
  EXPECT_EQ(series.zone().id(), "ES");
  EXPECT_EQ(series.start(), t2022());
  EXPECT_DOUBLE_EQ(series[23], 123.0);
}

TEST(ParseCi, UnsortedRowsAreSorted) {
  const auto series = parse_ci_csv(ci_csv({{2, 30}, {0, 10}, {1, 20}}));
  ASSERT_EQ(series.size(), 3u);
  EXPECT_DOUBLE_EQ(series[0], 10);
  EXPECT_DOUBLE_EQ(series[2], 30);
}

TEST(ParseCi, GapFailsByDefaultNamingTheHour) {
  try {
    parse_ci_csv(ci_csv({{0, 100}, {1, 120}, {3, 200}}));
    FAIL() << "expected GapError";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GapError);
    EXPECT_NE(std::string(e.what()).find("2022-01-01T02:00:00Z"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("ES"), std::string::npos);
  }
}

TEST(ParseCi, LinearGapFill) {
  const double v1 = 120.0, v3 = 200.0;
  const auto series = parse_ci_csv(ci_csv({{0, 100}, {1, v1}, {3, v3}}), {GapFill::Linear});
  ASSERT_EQ(series.size(), 4u);
  EXPECT_DOUBLE_EQ(series[2], (v1 + v3) / 2.0);
}

TEST(ParseCi, Errors) {
  EXPECT_EQ(kind_of([] { parse_ci_csv(ci_csv({{0, 1}, {0, 2}})); }), ErrorKind::DuplicateTimestamp);
  EXPECT_EQ(kind_of([] { parse_ci_csv(std::string_view("time,zone,ci\n2022-01-01T00:00:00Z,ES,1\n")); }),
            ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_ci_csv(std::string_view("timestamp,zone,carbon_intensity_gco2_per_kwh\n")); }),
            ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] {
              parse_ci_csv(std::string_view("timestamp,zone,carbon_intensity_gco2_per_kwh\n2022-01-01T00:00:00Z,ES,abc\n"));
            }),
            ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] {
              parse_ci_csv(std::string_view("timestamp,zone,carbon_intensity_gco2_per_kwh\n2022-01-01T00:30:00Z,ES,5\n"));
            }),
            ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_ci_csv(ci_csv({{0, -3}})); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] {
              parse_ci_csv(std::string_view(
                  "timestamp,zone,carbon_intensity_gco2_per_kwh\n2022-01-01T00:00:00Z,ES,5\n2022-01-01T01:00:00Z,NL,5\n"));
            }),
            ErrorKind::ParseError);
}

TEST(ParseCi, ToleratesBomAndCrlf) {
  const auto series = parse_ci_csv(std::string_view(
      "\xEF\xBB\xBFtimestamp,zone,carbon_intensity_gco2_per_kwh\r\n2022-01-01T00:00:00Z,NL,5.5\r\n\r\n"));
  EXPECT_EQ(series.zone().id(), "NL");
  EXPECT_DOUBLE_EQ(series[0], 5.5);
}

TEST(ParseCi, RoundTripProperty) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const CarbonIntensitySeries original(Zone("DE"), t2022() + kHour * trial, testing::random_trace(rng, 200, 0, 900));
    std::ostringstream out;
    write_ci_csv(out, original);
    EXPECT_EQ(parse_ci_csv(out.str()), original);
  }
}

TEST(ParsePower, OneHourAtTwentySeconds) {
  const auto series = parse_power_csv(power_csv(steady(180, 300)));
  EXPECT_EQ(series.size(), 180u);
  EXPECT_EQ(series.cadence_s(), 20);
  EXPECT_EQ(series.node_id(), "n1");
}

TEST(ParsePower, NegativeSample) {
  auto rows = steady(10, 300);
  rows[4].second = -5;
  EXPECT_EQ(kind_of([&] { parse_power_csv(power_csv(rows)); }), ErrorKind::NegativePower);
}

TEST(ParsePower, CadenceGapNamesTimestamp) {
  auto rows = steady(10, 300);
  rows.erase(rows.begin() + 5);  // 80 s -> 120 s is a 40 s step
  try {
    parse_power_csv(power_csv(rows));
    FAIL() << "expected CadenceError";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CadenceError);
    EXPECT_NE(std::string(e.what()).find("2022-01-01T00:02:00Z"), std::string::npos) << e.what();
  }
}

TEST(ParsePower, JitterWithinOneSecondIsSnapped) {
  auto rows = steady(6, 300);
  rows[2].first += 1;
  rows[4].first -= 1;
  const auto series = parse_power_csv(power_csv(rows));
  EXPECT_EQ(series.size(), 6u);
  std::ostringstream out;
  write_power_csv(out, series);
  EXPECT_NE(out.str().find("2022-01-01T00:00:40Z"), std::string::npos);
  EXPECT_NE(out.str().find("2022-01-01T00:01:20Z"), std::string::npos);

  rows[3].first += 2;
  EXPECT_EQ(kind_of([&] { parse_power_csv(power_csv(rows)); }), ErrorKind::CadenceError);
}

TEST(HourlyEnergy, ConstantAndZero) {
  const auto kwh = hourly_energy(PowerSeries("n", t2022(), 20, std::vector<double>(180, 300.0)));
  ASSERT_EQ(kwh.size(), 1u);
  EXPECT_NEAR(kwh[0], 0.3, 1e-12);
  for (double v : hourly_energy(PowerSeries("n", t2022(), 20, std::vector<double>(360, 0.0)))) EXPECT_EQ(v, 0.0);
}

TEST(HourlyEnergy, AlternatingSamples) {
  std::vector<double> samples(180);
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = i % 2 == 0 ? 100.0 : 500.0;
  // Oracle: mean power (300 W) held for one hour.
  const double expected = (100.0 + 500.0) / 2.0 * 1.0 / 1000.0;
  const auto kwh = hourly_energy(PowerSeries("n", t2022(), 20, samples));
  ASSERT_EQ(kwh.size(), 1u);
  EXPECT_NEAR(kwh[0], expected, 1e-12);
}

TEST(HourlyEnergy, PartialHour) {
  EXPECT_EQ(kind_of([] { hourly_energy(PowerSeries("n", t2022(), 20, std::vector<double>(179, 1.0))); }),
            ErrorKind::PartialHour);
  EXPECT_EQ(kind_of([] { hourly_energy(PowerSeries("n", t2022(), 7, std::vector<double>(1000, 1.0))); }),
            ErrorKind::PartialHour);
  EXPECT_EQ(kind_of([] {
              hourly_energy(PowerSeries("n", t2022() + std::chrono::seconds{20}, 20, std::vector<double>(180, 1.0)));
            }),
            ErrorKind::PartialHour);
}

TEST(HourlyEnergy, ConservationProperty) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> hours(1, 48);
  for (int trial = 0; trial < 100; ++trial) {
    const auto samples = testing::random_trace(rng, 180 * static_cast<std::size_t>(hours(rng)), 0.0, 5000.0);
    const auto kwh = hourly_energy(PowerSeries("n", t2022(), 20, samples));
    double direct = 0.0;
    for (double w : samples) direct += w * 20.0;
    direct /= 3.6e6;
    double bucketed = 0.0;
    for (double v : kwh) bucketed += v;
    EXPECT_LE(testing::rel_err(bucketed, direct), 1e-9);
  }
}

}  // namespace
}  // namespace maizx
