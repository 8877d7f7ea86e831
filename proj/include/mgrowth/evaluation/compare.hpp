#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mgrowth/evaluation/kruskal_wallis.hpp"
#include "mgrowth/evaluation/scores.hpp"

namespace mgrowth::eval {

/// Advisory distribution snapshot for one error sample.
struct GroupShape {
    std::string approach;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};

struct ComparisonTest {
    std::string horizon;  // "short" or "long"
    std::string metric;   // "LOC" or "BC"
    bool computed = false;
    std::string skip_reason;
    KWTestResult kw;
    bool reject_h0 = false;
    std::vector<GroupShape> shapes;
    std::optional<double> exact_p_value;  // only on request, for tiny pooled samples
};

struct ComparisonReport {
    double alpha = 0.05;
    std::vector<ComparisonTest> tests;  // short-LOC, short-BC, long-LOC, long-BC
};

struct PairwiseResult {
    std::string approach_a;
    std::string approach_b;
    std::string horizon;
    std::string metric;
    KWTestResult kw;
    bool reject_h0 = false;
};

/**
 * The four Kruskal-Wallis tests over per-approach RMSE samples: short and
 * long horizon, each for LOC and BC. Long-horizon tests only see records
 * that carry a long RMSE. Throws unless at least two approaches contribute
 * two or more records. With `exact_permutation` set, tests whose pooled
 * sample has at most twelve observations also carry the exact p-value.
 */
ComparisonReport compare_approaches(const std::vector<EvaluationRecord>& records,
                                    const ThresholdPolicy& policy,
                                    bool exact_permutation = false);

/// Two-group tests for every approach pair, for each computable data set.
std::vector<PairwiseResult> pairwise_comparisons(const std::vector<EvaluationRecord>& records,
                                                 const ThresholdPolicy& policy);

nlohmann::json to_json(const ComparisonReport& report);
nlohmann::json to_json(const std::vector<PairwiseResult>& results);

/// Sample skewness (m3 / m2^1.5); 0 for degenerate samples.
double skewness(const std::vector<double>& sample);
/// Sample excess kurtosis (m4 / m2^2 - 3); 0 for degenerate samples.
double excess_kurtosis(const std::vector<double>& sample);

}  // namespace mgrowth::eval
