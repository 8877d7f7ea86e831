#include "mgrowth/timeseries/daily.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "mgrowth/common/csv.hpp"

namespace mgrowth::ts {

UnevenSeries::UnevenSeries(std::vector<Point> points) {
    points_.reserve(points.size());
    for (const auto& p : points) {
        if (!std::isfinite(p.value))
            throw std::invalid_argument("uneven series value must be finite");
        if (!points_.empty()) {
            if (p.timestamp < points_.back().timestamp)
                throw std::invalid_argument("uneven series timestamps must be non-decreasing");
            if (p.timestamp == points_.back().timestamp) {
                points_.back().value = p.value;  // same instant: last one wins
                continue;
            }
        }
        points_.push_back(p);
    }
}

DailySeries to_daily(const UnevenSeries& s) {
    if (s.empty()) throw std::invalid_argument("empty series");
    const auto& pts = s.points();
    Date first = Date::from_timestamp(pts.front().timestamp);
    Date last = Date::from_timestamp(pts.back().timestamp);

    DailySeries out;
    out.start_day = first;
    out.values.reserve(static_cast<std::size_t>(last - first) + 1);

    std::size_t i = 0;
    double current = pts.front().value;
    for (Date day = first; day <= last; day = day + 1) {
        while (i < pts.size() && Date::from_timestamp(pts[i].timestamp) == day) {
            current = pts[i].value;  // several commits in one day: latest wins
            ++i;
        }
        out.values.push_back(current);
    }
    return out;
}

SplitSeries split_by_dates(const DailySeries& d, Date b1, Date b2) {
    if (d.values.empty()) throw std::invalid_argument("empty series");
    Date first = d.start_day;
    Date last = d.last_day();
    if (b1 < first || b1 > last)
        throw std::invalid_argument("split boundary b1 (" + b1.to_string() +
                                    ") outside series range");
    if (b2 < first || b2 > last)
        throw std::invalid_argument("split boundary b2 (" + b2.to_string() +
                                    ") outside series range");
    if (b1 >= b2) throw std::invalid_argument("split boundaries must satisfy b1 < b2");

    auto n_train = static_cast<std::size_t>(b1 - first + 1);
    auto n_val = static_cast<std::size_t>(b2 - b1);
    auto n_test = static_cast<std::size_t>(last - b2);
    if (n_train == 0 || n_val == 0 || n_test == 0) throw std::invalid_argument("empty segment");

    SplitSeries out;
    out.train_end = b1;
    out.validation_end = b2;
    out.train.start_day = first;
    out.train.values.assign(d.values.begin(), d.values.begin() + n_train);
    out.validation.start_day = b1 + 1;
    out.validation.values.assign(d.values.begin() + n_train, d.values.begin() + n_train + n_val);
    out.test.start_day = b2 + 1;
    out.test.values.assign(d.values.begin() + n_train + n_val, d.values.end());
    return out;
}

void write_daily_csv(std::ostream& out, const DailySeries& d) {
    out << "date,value\n";
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        Date day = d.start_day + static_cast<std::int64_t>(i);
        csv::write_row(out, {day.to_string(), csv::format_double(d.values[i])});
    }
}

DailySeries read_daily_csv(std::istream& in) {
    auto rows = csv::read_all(in);
    if (rows.size() < 2) throw std::runtime_error("daily CSV has no data rows");
    DailySeries d;
    d.start_day = Date::parse(rows[1][0]);
    Date expected = d.start_day;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 2) throw std::runtime_error("daily CSV row must have two fields");
        if (Date::parse(rows[i][0]) != expected)
            throw std::runtime_error("daily CSV days are not consecutive");
        d.values.push_back(std::stod(rows[i][1]));
        expected = expected + 1;
    }
    return d;
}

}  // namespace mgrowth::ts
