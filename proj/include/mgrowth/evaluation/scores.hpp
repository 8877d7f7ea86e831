#pragma once

#include <optional>
#include <string>
#include <vector>

namespace mgrowth::eval {

/**
 * Practitioner-derived acceptability constants: the tolerated mean deviation
 * in percent, the horizon the prediction should stay accurate for, the
 * significance level for the approach comparison, and the number of steps
 * that count as the short term.
 */
struct ThresholdPolicy {
    double max_error_pct = 8.3;
    int horizon_days = 28;
    double alpha = 0.05;
    int short_steps = 4;
};

/// Scores of one approach's forecast on one (model, metric) series.
struct EvaluationRecord {
    std::string model_id;
    std::string metric;    // "LOC" or "BC"
    std::string approach;  // "HOLT", "ARIMA", "SVR", "ANN", "LSTM"
    double rmse_short = 0.0;
    std::optional<double> rmse_long;  // only when test length > short_steps
    double mean_pct_dev = 0.0;
    bool above_threshold = false;
};

/// sqrt(sum((pred - truth)^2) / n). Equal non-empty lengths required.
double rmse(const std::vector<double>& pred, const std::vector<double>& truth);

/// Mean of |pred - truth| / truth * 100 over all steps. Truth must be positive.
double mean_pct_deviation(const std::vector<double>& pred, const std::vector<double>& truth);

struct ModelEvaluation {
    std::vector<EvaluationRecord> records;
    // Set instead of records when the test segment is shorter than the
    // short-term horizon; the caller logs it and drops the model.
    std::optional<std::string> exclusion_reason;
};

/**
 * Scores every approach's forecast against the test segment: RMSE over the
 * first short_steps values, RMSE over the whole segment when it is longer
 * than that, mean percent deviation over the whole segment, and the
 * threshold flag (mean deviation strictly above policy.max_error_pct).
 */
ModelEvaluation evaluate_model(
    const std::string& model_id, const std::string& metric,
    const std::vector<std::pair<std::string, std::vector<double>>>& forecasts_by_approach,
    const std::vector<double>& test, const ThresholdPolicy& policy);

}  // namespace mgrowth::eval
