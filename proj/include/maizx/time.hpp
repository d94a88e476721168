#pragma once

#include <charconv>
#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace maizx {

/// All timestamps are UTC with one-second resolution.
using Timestamp = std::chrono::sys_seconds;

inline constexpr std::chrono::seconds kHour{3600};

namespace detail {

inline bool read_fixed(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  const char* first = s.data() + pos;
  const char* last = first + len;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace detail

/// Parses `YYYY-MM-DDTHH:MM:SSZ` (a `+00:00` suffix is accepted as well).
inline std::optional<Timestamp> parse_timestamp(std::string_view s) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, se = 0;
  if (s.size() < 20) return std::nullopt;
  if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' ||
      s[16] != ':')
    return std::nullopt;
  if (!detail::read_fixed(s, 0, 4, y) || !detail::read_fixed(s, 5, 2, mo) ||
      !detail::read_fixed(s, 8, 2, d) || !detail::read_fixed(s, 11, 2, h) ||
      !detail::read_fixed(s, 14, 2, mi) || !detail::read_fixed(s, 17, 2, se))
    return std::nullopt;
  const auto suffix = s.substr(19);
  if (suffix != "Z" && suffix != "+00:00") return std::nullopt;
  if (h > 23 || mi > 59 || se > 59) return std::nullopt;

  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{se};
}

inline std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{t - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

inline bool is_hour_aligned(Timestamp t) { return t.time_since_epoch() % kHour == std::chrono::seconds{0}; }

}  // namespace maizx
