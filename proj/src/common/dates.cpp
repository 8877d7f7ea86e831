#include "mgrowth/common/dates.hpp"

#include <cstdio>
#include <stdexcept>

namespace mgrowth {

namespace {
constexpr std::int64_t kSecondsPerDay = 86400;
}

Date Date::from_timestamp(std::int64_t utc_seconds) {
    std::int64_t d = utc_seconds / kSecondsPerDay;
    if (utc_seconds < 0 && utc_seconds % kSecondsPerDay != 0) --d;
    return Date(d);
}

Date Date::from_ymd(int year, unsigned month, unsigned day) {
    using namespace std::chrono;
    year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
    if (!ymd.ok()) throw std::invalid_argument("invalid calendar date");
    return Date(sys_days{ymd}.time_since_epoch().count());
}

Date Date::parse(const std::string& iso) {
    int y = 0;
    unsigned m = 0, d = 0;
    char trailing = 0;
    if (std::sscanf(iso.c_str(), "%d-%u-%u%c", &y, &m, &d, &trailing) != 3)
        throw std::invalid_argument("malformed date '" + iso + "', expected YYYY-MM-DD");
    return from_ymd(y, m, d);
}

std::string Date::to_string() const {
    using namespace std::chrono;
    year_month_day ymd{sys_days{days{days_}}};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                  unsigned(ymd.day()));
    return buf;
}

}  // namespace mgrowth
