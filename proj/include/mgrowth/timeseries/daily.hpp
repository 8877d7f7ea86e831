#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mgrowth/common/dates.hpp"

namespace mgrowth::ts {

/**
 * Observations at commit times. Timestamps are strictly increasing; when fed
 * several values with the same timestamp the constructor keeps the last one,
 * matching the later same-day collapse.
 */
class UnevenSeries {
public:
    struct Point {
        std::int64_t timestamp;  // UTC seconds
        double value;
    };

    UnevenSeries() = default;
    explicit UnevenSeries(std::vector<Point> points);

    const std::vector<Point>& points() const { return points_; }
    bool empty() const { return points_.empty(); }
    std::size_t size() const { return points_.size(); }

private:
    std::vector<Point> points_;
};

/// Equidistant daily values; days are implicit from start_day.
struct DailySeries {
    Date start_day;
    std::vector<double> values;

    Date last_day() const { return start_day + (static_cast<std::int64_t>(values.size()) - 1); }
};

struct SplitSeries {
    DailySeries train;
    DailySeries validation;
    DailySeries test;
    Date train_end;       // last day included in train
    Date validation_end;  // last day included in validation
};

/**
 * Step interpolation of commit-time observations onto a daily grid.
 *
 * Every calendar day from the first to the last commit day gets one value:
 * the latest commit of that day if there was one, otherwise the previous
 * day's value carried forward. No blending between observations.
 */
DailySeries to_daily(const UnevenSeries& s);

/**
 * Three-way chronological split: train covers days <= b1, validation covers
 * (b1, b2], test covers days > b2. Throws when a boundary falls outside the
 * series or any segment would be empty.
 */
SplitSeries split_by_dates(const DailySeries& d, Date b1, Date b2);

void write_daily_csv(std::ostream& out, const DailySeries& d);
DailySeries read_daily_csv(std::istream& in);

}  // namespace mgrowth::ts
