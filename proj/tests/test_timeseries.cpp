#include <sstream>

#include "doctest.h"
#include "mgrowth/common/rng.hpp"
#include "mgrowth/timeseries/daily.hpp"
#include "mgrowth/timeseries/transforms.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace mgrowth;
using namespace mgrowth::ts;

namespace {
constexpr std::int64_t kDay = 86400;
}

TEST_CASE("to_daily applies step interpolation") {
    UnevenSeries s({{0 * kDay + 10, 10.0}, {2 * kDay + 99, 20.0}});
    auto d = to_daily(s);
    CHECK(d.start_day == Date(0));
    CHECK(d.values == std::vector<double>{10.0, 10.0, 20.0});
}

TEST_CASE("to_daily keeps the latest commit of a day") {
    UnevenSeries s({{100, 7.0}, {200, 9.0}});
    auto d = to_daily(s);
    CHECK(d.values == std::vector<double>{9.0});
}

TEST_CASE("to_daily rejects empty input") {
    CHECK_THROWS_WITH_AS(to_daily(UnevenSeries{}), "empty series", std::invalid_argument);
}

TEST_CASE("to_daily equals the brute-force day scan on random schedules") {
    Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        auto commits = synthetic::commit_schedule(rng, 60, 15000, 1 + static_cast<int>(rng.below(40)));
        std::vector<UnevenSeries::Point> points;
        for (auto [ts_, v] : commits) points.push_back({ts_, v});
        UnevenSeries s(points);
        auto d = to_daily(s);
        // Collapse same-timestamp duplicates the same way the series does.
        std::vector<std::pair<std::int64_t, double>> collapsed;
        for (const auto& p : s.points()) collapsed.emplace_back(p.timestamp, p.value);
        CHECK(d.values == oracles::naive_daily(collapsed));
        auto expected_len = Date::from_timestamp(collapsed.back().first) -
                            Date::from_timestamp(collapsed.front().first) + 1;
        CHECK(static_cast<std::int64_t>(d.values.size()) == expected_len);
        // Forward fill never invents values.
        for (double v : d.values) {
            bool found = false;
            for (const auto& [ts_, cv] : collapsed)
                if (cv == v) found = true;
            CHECK(found);
        }
    }
}

TEST_CASE("split_by_dates produces contiguous segments") {
    DailySeries d;
    d.start_day = Date(1000);
    for (int i = 0; i < 10; ++i) d.values.push_back(i);
    auto split = split_by_dates(d, Date(1005), Date(1007));
    CHECK(split.train.values == std::vector<double>{0, 1, 2, 3, 4, 5});
    CHECK(split.validation.values == std::vector<double>{6, 7});
    CHECK(split.test.values == std::vector<double>{8, 9});
    CHECK(split.train.start_day == Date(1000));
    CHECK(split.validation.start_day == Date(1006));
    CHECK(split.test.start_day == Date(1008));
}

TEST_CASE("split_by_dates rejects bad boundaries") {
    DailySeries d;
    d.start_day = Date(0);
    for (int i = 0; i < 10; ++i) d.values.push_back(i);
    CHECK_THROWS_WITH_AS(split_by_dates(d, Date(-1), Date(5)),
                         doctest::Contains("boundary b1"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(split_by_dates(d, Date(2), Date(50)),
                         doctest::Contains("boundary b2"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(split_by_dates(d, Date(5), Date(9)), "empty segment",
                         std::invalid_argument);
    CHECK_THROWS_AS(split_by_dates(d, Date(7), Date(5)), std::invalid_argument);
}

TEST_CASE("multi-year three-way split by calendar dates") {
    // Daily series spanning 2013-01-01 .. 2016-06-30, split at the end of
    // 2015 and the end of 2016 Q1.
    Date first = Date::from_ymd(2013, 1, 1);
    Date last = Date::from_ymd(2016, 6, 30);
    DailySeries d;
    d.start_day = first;
    for (Date day = first; day <= last; day = day + 1)
        d.values.push_back(static_cast<double>(day - first));
    auto split = split_by_dates(d, Date::from_ymd(2015, 12, 31), Date::from_ymd(2016, 3, 31));

    CHECK(split.train.start_day == first);
    CHECK(split.train.last_day() == Date::from_ymd(2015, 12, 31));
    CHECK(split.validation.start_day == Date::from_ymd(2016, 1, 1));
    CHECK(split.validation.last_day() == Date::from_ymd(2016, 3, 31));
    CHECK(split.test.start_day == Date::from_ymd(2016, 4, 1));
    CHECK(split.test.last_day() == last);
    CHECK(split.validation.values.size() == 91);  // Jan + Feb (leap) + Mar
    CHECK(split.test.values.size() == 91);        // Apr + May + Jun

    // Concatenation reproduces the source series.
    std::vector<double> joined = split.train.values;
    joined.insert(joined.end(), split.validation.values.begin(), split.validation.values.end());
    joined.insert(joined.end(), split.test.values.begin(), split.test.values.end());
    CHECK(joined == d.values);
}

TEST_CASE("difference examples and round trip") {
    auto d1 = difference({1, 2, 3, 4}, 1);
    CHECK(d1.values == std::vector<double>{1, 1, 1});
    CHECK(difference({5, 1, 9}, 0).values == std::vector<double>{5, 1, 9});
    CHECK_THROWS_AS(difference({1.0, 2.0}, 2), std::invalid_argument);

    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 3 + static_cast<int>(rng.below(40));
        std::vector<double> x;
        for (int i = 0; i < n; ++i) x.push_back(rng.uniform(-100.0, 100.0));
        for (int order = 0; order <= 2; ++order) {
            auto diff = difference(x, order);
            auto restored = invert_difference(diff);
            REQUIRE(restored.size() == x.size());
            for (std::size_t i = 0; i < x.size(); ++i)
                CHECK(restored[i] == doctest::Approx(x[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("normalization examples and round trip") {
    auto n = normalize({0, 5, 10});
    CHECK(n.values == std::vector<double>{0.0, 0.5, 1.0});

    auto constant = normalize({4, 4, 4});
    CHECK(constant.values == std::vector<double>{0.0, 0.0, 0.0});
    CHECK(constant.params.min == 4.0);
    CHECK(constant.params.max == 4.0);
    CHECK(denormalize(constant.values, constant.params) == std::vector<double>{4.0, 4.0, 4.0});

    Rng rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x;
        int len = 2 + static_cast<int>(rng.below(30));
        for (int i = 0; i < len; ++i) x.push_back(rng.uniform(-1000.0, 1000.0));
        auto norm = normalize(x);
        auto back = denormalize(norm.values, norm.params);
        for (std::size_t i = 0; i < x.size(); ++i)
            CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12));
        for (double v : norm.values) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("make_lagged windows and reassembly") {
    auto lagged = make_lagged({1, 2, 3, 4}, 2);
    REQUIRE(lagged.windows.size() == 2);
    CHECK(lagged.windows[0] == std::vector<double>{1, 2});
    CHECK(lagged.targets[0] == 3);
    CHECK(lagged.windows[1] == std::vector<double>{2, 3});
    CHECK(lagged.targets[1] == 4);

    auto one_row = make_lagged({1, 2, 3, 4}, 3);
    CHECK(one_row.windows.size() == 1);

    CHECK_THROWS_AS(make_lagged({1, 2}, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_lagged({1, 2, 3}, 0), std::invalid_argument);

    Rng rng(7);
    std::vector<double> x;
    for (int i = 0; i < 40; ++i) x.push_back(rng.uniform(0.0, 1.0));
    auto big = make_lagged(x, 5);
    CHECK(big.windows.size() == x.size() - 5);
    for (std::size_t r = 0; r < big.targets.size(); ++r) {
        CHECK(big.targets[r] == x[r + 5]);
        CHECK(big.windows[r] == std::vector<double>(x.begin() + r, x.begin() + r + 5));
    }
}

TEST_CASE("daily csv round trip") {
    DailySeries d;
    d.start_day = Date::from_ymd(2016, 1, 1);
    d.values = {1.5, 2.25, 3.0};
    std::ostringstream out;
    write_daily_csv(out, d);
    std::istringstream in(out.str());
    auto back = read_daily_csv(in);
    CHECK(back.start_day == d.start_day);
    CHECK(back.values == d.values);
}
