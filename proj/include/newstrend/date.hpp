#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace newstrend {

// Calendar date in the Gregorian calendar. Parsing is strict: `YYYY-MM-DD`
// exactly, and the date must exist (no 2015-02-29).
class Date {
 public:
  Date() = default;
  Date(int year, unsigned month, unsigned day);

  static Date parse(std::string_view text);

  int year() const { return static_cast<int>(ymd_.year()); }
  unsigned month() const { return static_cast<unsigned>(ymd_.month()); }
  unsigned day() const { return static_cast<unsigned>(ymd_.day()); }

  std::string to_string() const;

  // Calendar-month arithmetic. A day past the end of the target month clamps
  // to that month's last day (2010-01-31 + 1 month = 2010-02-28).
  Date add_months(int n) const;
  Date add_days(int n) const;

  friend auto operator<=>(const Date&, const Date&) = default;

 private:
  explicit Date(std::chrono::year_month_day ymd) : ymd_(ymd) {}
  std::chrono::year_month_day ymd_{std::chrono::year{1970}, std::chrono::month{1},
                                   std::chrono::day{1}};
};

}  // namespace newstrend
