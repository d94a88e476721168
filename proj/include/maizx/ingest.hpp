#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "maizx/error.hpp"
#include "maizx/model.hpp"
#include "maizx/time.hpp"

namespace maizx {

inline constexpr std::string_view kCiCsvHeader = "timestamp,zone,carbon_intensity_gco2_per_kwh";
inline constexpr std::string_view kPowerCsvHeader = "timestamp,node_id,power_watts";

enum class GapFill { Fail, Linear };

struct CiParseOptions {
  GapFill gap_fill = GapFill::Fail;
};

struct PowerParseOptions {
  long jitter_tolerance_s = 1;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv_row(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    fields.push_back(trim(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return fields;
}

inline bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
}

struct CsvRow {
  std::size_t line_no;
  Timestamp ts;
  std::string key;
  double value;
};

/// Reads a three-column CSV with a fixed header; the first line may carry a
/// UTF-8 BOM and blank lines are ignored.
inline std::vector<CsvRow> read_rows(std::istream& in, std::string_view header, std::string_view what) {
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    view = trim(view);
    if (view.empty()) continue;
    if (!saw_header) {
      if (view != header)
        fail(ErrorKind::ParseError, std::string(what) + ": line " + std::to_string(line_no) +
                                        ": expected header '" + std::string(header) + "'");
      saw_header = true;
      continue;
    }
    const auto fields = split_csv_row(view);
    const auto where = std::string(what) + ": line " + std::to_string(line_no);
    if (fields.size() != 3) fail(ErrorKind::ParseError, where + ": expected 3 fields");
    const auto ts = parse_timestamp(fields[0]);
    if (!ts) fail(ErrorKind::ParseError, where + ": bad timestamp '" + std::string(fields[0]) + "'");
    if (fields[1].empty()) fail(ErrorKind::ParseError, where + ": empty identifier");
    double value = 0.0;
    if (!parse_double(fields[2], value))
      fail(ErrorKind::ParseError, where + ": bad number '" + std::string(fields[2]) + "'");
    rows.push_back({line_no, *ts, std::string(fields[1]), value});
  }
  if (!saw_header) fail(ErrorKind::ParseError, std::string(what) + ": missing header");
  if (rows.empty()) fail(ErrorKind::ParseError, std::string(what) + ": no data rows");
  for (const auto& row : rows)
    if (row.key != rows.front().key)
      fail(ErrorKind::ParseError, std::string(what) + ": line " + std::to_string(row.line_no) +
                                      ": mixes '" + row.key + "' with '" + rows.front().key + "'");
  std::stable_sort(rows.begin(), rows.end(), [](const CsvRow& a, const CsvRow& b) { return a.ts < b.ts; });
  return rows;
}

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace detail

/// Parses an hourly carbon intensity CSV. Rows may arrive unsorted; duplicate
/// hours are rejected, and missing hours either fail or are filled linearly
/// between their neighbours.
inline CarbonIntensitySeries parse_ci_csv(std::istream& in, CiParseOptions options = {}) {
  const auto rows = detail::read_rows(in, kCiCsvHeader, "carbon intensity csv");
  const Zone zone{rows.front().key};
  std::vector<double> values;
  values.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const auto where = "zone " + zone.id() + ": " + format_timestamp(row.ts);
    if (!is_hour_aligned(row.ts)) fail(ErrorKind::ParseError, where + " is not on an hour boundary");
    if (row.value < 0.0) fail(ErrorKind::ParseError, where + ": negative carbon intensity");
    if (i > 0) {
      const auto& prev = rows[i - 1];
      if (row.ts == prev.ts) fail(ErrorKind::DuplicateTimestamp, "duplicate timestamp, " + where);
      const auto step = (row.ts - prev.ts) / kHour;
      if (step > 1) {
        if (options.gap_fill == GapFill::Fail)
          fail(ErrorKind::GapError, "zone " + zone.id() + ": missing hour " + format_timestamp(prev.ts + kHour));
        for (long k = 1; k < step; ++k) {
          const double frac = static_cast<double>(k) / static_cast<double>(step);
          values.push_back(prev.value + (row.value - prev.value) * frac);
        }
      }
    }
    values.push_back(row.value);
  }
  return CarbonIntensitySeries(zone, rows.front().ts, std::move(values));
}

inline CarbonIntensitySeries parse_ci_csv(std::string_view text, CiParseOptions options = {}) {
  std::istringstream in{std::string(text)};
  return parse_ci_csv(in, options);
}

/// Parses a power sample CSV. The cadence is the spacing of the first two
/// samples; every later sample must sit within the jitter tolerance of its
/// nominal grid point and is snapped onto it.
inline PowerSeries parse_power_csv(std::istream& in, PowerParseOptions options = {}) {
  const auto rows = detail::read_rows(in, kPowerCsvHeader, "power csv");
  const auto& node_id = rows.front().key;
  for (const auto& row : rows)
    if (row.value < 0.0)
      fail(ErrorKind::NegativePower, "node " + node_id + ": negative power " + detail::format_double(row.value) +
                                         " W at " + format_timestamp(row.ts));

  long cadence = PowerSeries::kDefaultCadenceS;
  if (rows.size() >= 2) cadence = static_cast<long>((rows[1].ts - rows[0].ts).count());
  if (cadence <= 0)
    fail(ErrorKind::DuplicateTimestamp, "node " + node_id + ": duplicate timestamp " + format_timestamp(rows[0].ts));

  const Timestamp start = rows.front().ts;
  std::vector<double> values;
  values.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto nominal = start + std::chrono::seconds{cadence * static_cast<long>(i)};
    const auto drift = (rows[i].ts - nominal).count();
    if (drift > options.jitter_tolerance_s || drift < -options.jitter_tolerance_s)
      fail(ErrorKind::CadenceError, "node " + node_id + ": sample at " + format_timestamp(rows[i].ts) +
                                        " breaks the " + std::to_string(cadence) + " s cadence (expected " +
                                        format_timestamp(nominal) + ")");
    values.push_back(rows[i].value);
  }
  return PowerSeries(node_id, start, cadence, std::move(values));
}

inline PowerSeries parse_power_csv(std::string_view text, PowerParseOptions options = {}) {
  std::istringstream in{std::string(text)};
  return parse_power_csv(in, options);
}

inline void write_ci_csv(std::ostream& out, const CarbonIntensitySeries& series) {
  out << kCiCsvHeader << '\n';
  for (std::size_t h = 0; h < series.size(); ++h)
    out << format_timestamp(series.start() + kHour * static_cast<long>(h)) << ',' << series.zone().id() << ','
        << detail::format_double(series[h]) << '\n';
}

inline void write_power_csv(std::ostream& out, const PowerSeries& series) {
  out << kPowerCsvHeader << '\n';
  const auto values = series.values();
  for (std::size_t i = 0; i < values.size(); ++i)
    out << format_timestamp(series.start() + std::chrono::seconds{series.cadence_s() * static_cast<long>(i)})
        << ',' << series.node_id() << ',' << detail::format_double(values[i]) << '\n';
}

/// Per-hour energy in kWh by left-rectangle integration: each sample holds
/// its value for one cadence interval.
inline std::vector<double> hourly_energy(const PowerSeries& series) {
  const long cadence = series.cadence_s();
  if (!is_hour_aligned(series.start()))
    fail(ErrorKind::PartialHour, "power series " + series.node_id() + " does not start on an hour boundary");
  if (3600 % cadence != 0)
    fail(ErrorKind::PartialHour, "power series " + series.node_id() + ": cadence " + std::to_string(cadence) +
                                     " s does not divide an hour");
  const auto per_hour = static_cast<std::size_t>(3600 / cadence);
  const auto values = series.values();
  if (values.empty() || values.size() % per_hour != 0)
    fail(ErrorKind::PartialHour, "power series " + series.node_id() + ": " + std::to_string(values.size()) +
                                     " samples do not cover whole hours");
  std::vector<double> kwh(values.size() / per_hour, 0.0);
  for (std::size_t h = 0; h < kwh.size(); ++h) {
    double joules = 0.0;
    for (std::size_t k = 0; k < per_hour; ++k) joules += values[h * per_hour + k] * static_cast<double>(cadence);
    kwh[h] = joules / 3.6e6;
  }
  return kwh;
}

inline CarbonIntensitySeries load_ci_csv(const std::string& path, CiParseOptions options = {}) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path);
  return parse_ci_csv(in, options);
}

inline PowerSeries load_power_csv(const std::string& path, PowerParseOptions options = {}) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path);
  return parse_power_csv(in, options);
}

}  // namespace maizx
