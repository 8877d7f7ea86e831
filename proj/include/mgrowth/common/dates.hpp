#pragma once

#include <chrono>
#include <cstdint>
#include <string>

namespace mgrowth {

/**
 * Calendar day in UTC, stored as days since 1970-01-01.
 *
 * All timestamp-to-day conversions in the pipeline go through this type so
 * that day boundaries are computed the same way everywhere (UTC, floor
 * division; negative epochs round toward minus infinity).
 */
class Date {
public:
    Date() = default;
    explicit Date(std::int64_t days_since_epoch) : days_(days_since_epoch) {}

    static Date from_timestamp(std::int64_t utc_seconds);
    static Date from_ymd(int year, unsigned month, unsigned day);

    /// Parses an ISO-8601 date ("2016-03-31"). Throws std::invalid_argument on malformed input.
    static Date parse(const std::string& iso);

    std::int64_t days_since_epoch() const { return days_; }

    /// ISO-8601 "YYYY-MM-DD".
    std::string to_string() const;

    Date operator+(std::int64_t days) const { return Date(days_ + days); }
    Date operator-(std::int64_t days) const { return Date(days_ - days); }
    std::int64_t operator-(const Date& other) const { return days_ - other.days_; }

    auto operator<=>(const Date&) const = default;

private:
    std::int64_t days_ = 0;
};

}  // namespace mgrowth
