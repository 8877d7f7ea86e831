#include "mgrowth/evaluation/compare.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mgrowth::eval {

namespace {

std::vector<std::string> approaches_in_order(const std::vector<EvaluationRecord>& records) {
    std::vector<std::string> order;
    for (const auto& r : records)
        if (std::find(order.begin(), order.end(), r.approach) == order.end())
            order.push_back(r.approach);
    return order;
}

// Error sample of one approach for one (horizon, metric) data set.
std::vector<double> collect(const std::vector<EvaluationRecord>& records,
                            const std::string& approach, const std::string& metric,
                            bool long_horizon) {
    std::vector<double> out;
    for (const auto& r : records) {
        if (r.approach != approach || r.metric != metric) continue;
        if (long_horizon) {
            if (r.rmse_long) out.push_back(*r.rmse_long);
        } else {
            out.push_back(r.rmse_short);
        }
    }
    return out;
}

double central_moment(const std::vector<double>& sample, int k) {
    double mean = 0.0;
    for (double v : sample) mean += v;
    mean /= static_cast<double>(sample.size());
    double m = 0.0;
    for (double v : sample) m += std::pow(v - mean, k);
    return m / static_cast<double>(sample.size());
}

}  // namespace

double skewness(const std::vector<double>& sample) {
    if (sample.size() < 2) return 0.0;
    double m2 = central_moment(sample, 2);
    if (m2 < 1e-300) return 0.0;
    return central_moment(sample, 3) / std::pow(m2, 1.5);
}

double excess_kurtosis(const std::vector<double>& sample) {
    if (sample.size() < 2) return 0.0;
    double m2 = central_moment(sample, 2);
    if (m2 < 1e-300) return 0.0;
    return central_moment(sample, 4) / (m2 * m2) - 3.0;
}

ComparisonReport compare_approaches(const std::vector<EvaluationRecord>& records,
                                    const ThresholdPolicy& policy, bool exact_permutation) {
    auto order = approaches_in_order(records);
    std::size_t with_enough = 0;
    for (const auto& a : order) {
        std::size_t count = 0;
        for (const auto& r : records)
            if (r.approach == a) ++count;
        if (count >= 2) ++with_enough;
    }
    if (with_enough < 2)
        throw std::invalid_argument(
            "comparison needs at least two approaches with two or more records each");

    ComparisonReport report;
    report.alpha = policy.alpha;
    for (bool long_horizon : {false, true}) {
        for (const std::string metric : {"LOC", "BC"}) {
            ComparisonTest test;
            test.horizon = long_horizon ? "long" : "short";
            test.metric = metric;

            std::vector<std::vector<double>> groups;
            std::vector<std::string> labels;
            for (const auto& a : order) {
                auto sample = collect(records, a, metric, long_horizon);
                if (sample.size() >= 2) {
                    groups.push_back(std::move(sample));
                    labels.push_back(a);
                }
            }
            if (groups.size() < 2) {
                test.skip_reason = "fewer than two approaches with enough records";
                report.tests.push_back(std::move(test));
                continue;
            }
            test.kw = kruskal_wallis(groups, labels);
            test.computed = true;
            test.reject_h0 = test.kw.p_value < policy.alpha;
            for (std::size_t g = 0; g < groups.size(); ++g)
                test.shapes.push_back({labels[g], skewness(groups[g]), excess_kurtosis(groups[g])});
            if (exact_permutation) {
                std::size_t pooled = 0;
                for (const auto& g : groups) pooled += g.size();
                if (pooled <= 12) test.exact_p_value = kruskal_wallis_permutation_p(groups);
            }
            report.tests.push_back(std::move(test));
        }
    }
    return report;
}

std::vector<PairwiseResult> pairwise_comparisons(const std::vector<EvaluationRecord>& records,
                                                 const ThresholdPolicy& policy) {
    auto order = approaches_in_order(records);
    std::vector<PairwiseResult> out;
    for (bool long_horizon : {false, true}) {
        for (const std::string metric : {"LOC", "BC"}) {
            for (std::size_t i = 0; i < order.size(); ++i) {
                for (std::size_t j = i + 1; j < order.size(); ++j) {
                    auto a = collect(records, order[i], metric, long_horizon);
                    auto b = collect(records, order[j], metric, long_horizon);
                    if (a.size() < 2 || b.size() < 2) continue;
                    PairwiseResult r;
                    r.approach_a = order[i];
                    r.approach_b = order[j];
                    r.horizon = long_horizon ? "long" : "short";
                    r.metric = metric;
                    r.kw = kruskal_wallis({a, b}, {order[i], order[j]});
                    r.reject_h0 = r.kw.p_value < policy.alpha;
                    out.push_back(std::move(r));
                }
            }
        }
    }
    return out;
}

namespace {

nlohmann::json kw_to_json(const KWTestResult& kw) {
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& g : kw.groups)
        groups.push_back({{"approach", g.label},
                          {"n", g.n},
                          {"rank_sum", g.rank_sum},
                          {"mean_rank", g.mean_rank}});
    return {{"groups", groups},
            {"h", kw.h},
            {"tie_correction", kw.tie_correction},
            {"df", kw.df},
            {"p_value", kw.p_value}};
}

}  // namespace

nlohmann::json to_json(const ComparisonReport& report) {
    nlohmann::json tests = nlohmann::json::array();
    for (const auto& t : report.tests) {
        nlohmann::json jt{{"horizon", t.horizon}, {"metric", t.metric}, {"computed", t.computed}};
        if (!t.computed) {
            jt["skip_reason"] = t.skip_reason;
        } else {
            jt.update(kw_to_json(t.kw));
            jt["reject_h0"] = t.reject_h0;
            if (t.exact_p_value) jt["exact_p_value"] = *t.exact_p_value;
            nlohmann::json shapes = nlohmann::json::array();
            for (const auto& s : t.shapes)
                shapes.push_back({{"approach", s.approach},
                                  {"skewness", s.skewness},
                                  {"excess_kurtosis", s.excess_kurtosis}});
            jt["normality_advisory"] = shapes;
        }
        tests.push_back(std::move(jt));
    }
    return {{"alpha", report.alpha}, {"tests", tests}};
}

nlohmann::json to_json(const std::vector<PairwiseResult>& results) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : results) {
        nlohmann::json jr{{"approach_a", r.approach_a},
                          {"approach_b", r.approach_b},
                          {"horizon", r.horizon},
                          {"metric", r.metric},
                          {"reject_h0", r.reject_h0}};
        jr.update(kw_to_json(r.kw));
        out.push_back(std::move(jr));
    }
    return out;
}

}  // namespace mgrowth::eval
