#include "newstrend/date.hpp"

#include <cstdio>
#include <stdexcept>

namespace newstrend {

namespace {

bool all_digits(std::string_view s) {
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return !s.empty();
}

int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

}  // namespace

Date::Date(int year, unsigned month, unsigned day)
    : ymd_(std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}) {
  if (!ymd_.ok()) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "invalid calendar date %04d-%02u-%02u", year, month, day);
    throw std::invalid_argument(buf);
  }
}

Date Date::parse(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
      !all_digits(text.substr(0, 4)) || !all_digits(text.substr(5, 2)) ||
      !all_digits(text.substr(8, 2))) {
    throw std::invalid_argument("malformed date '" + std::string(text) +
                                "' (expected YYYY-MM-DD)");
  }
  return Date(to_int(text.substr(0, 4)), static_cast<unsigned>(to_int(text.substr(5, 2))),
              static_cast<unsigned>(to_int(text.substr(8, 2))));
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year(), month(), day());
  return buf;
}

Date Date::add_months(int n) const {
  std::chrono::year_month_day shifted = ymd_ + std::chrono::months{n};
  if (!shifted.ok()) {
    shifted = shifted.year() / shifted.month() / std::chrono::last;
  }
  return Date(shifted);
}

Date Date::add_days(int n) const {
  const std::chrono::sys_days base{ymd_};
  return Date(std::chrono::year_month_day{base + std::chrono::days{n}});
}

}  // namespace newstrend
