#include "mgrowth/evaluation/scores.hpp"

#include <cmath>
#include <stdexcept>

namespace mgrowth::eval {

double rmse(const std::vector<double>& pred, const std::vector<double>& truth) {
    if (pred.size() != truth.size())
        throw std::invalid_argument("rmse: prediction and truth lengths differ");
    if (pred.empty()) throw std::invalid_argument("rmse: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        double d = pred[i] - truth[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(pred.size()));
}

double mean_pct_deviation(const std::vector<double>& pred, const std::vector<double>& truth) {
    if (pred.size() != truth.size())
        throw std::invalid_argument("mean_pct_deviation: prediction and truth lengths differ");
    if (pred.empty()) throw std::invalid_argument("mean_pct_deviation: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (truth[i] <= 0.0)
            throw std::invalid_argument("mean_pct_deviation: ground truth must be positive");
        sum += std::fabs(pred[i] - truth[i]) / truth[i] * 100.0;
    }
    return sum / static_cast<double>(pred.size());
}

ModelEvaluation evaluate_model(
    const std::string& model_id, const std::string& metric,
    const std::vector<std::pair<std::string, std::vector<double>>>& forecasts_by_approach,
    const std::vector<double>& test, const ThresholdPolicy& policy) {
    ModelEvaluation out;
    auto short_steps = static_cast<std::size_t>(policy.short_steps);
    if (test.size() < short_steps) {
        out.exclusion_reason = "test segment has " + std::to_string(test.size()) +
                               " steps, shorter than short-term horizon " +
                               std::to_string(policy.short_steps);
        return out;
    }

    std::vector<double> truth_short(test.begin(), test.begin() + short_steps);
    for (const auto& [approach, forecast] : forecasts_by_approach) {
        if (forecast.size() != test.size())
            throw std::invalid_argument("forecast length differs from test length for " +
                                        approach);
        EvaluationRecord rec;
        rec.model_id = model_id;
        rec.metric = metric;
        rec.approach = approach;
        std::vector<double> pred_short(forecast.begin(), forecast.begin() + short_steps);
        rec.rmse_short = rmse(pred_short, truth_short);
        if (test.size() > short_steps) rec.rmse_long = rmse(forecast, test);
        rec.mean_pct_dev = mean_pct_deviation(forecast, test);
        rec.above_threshold = rec.mean_pct_dev > policy.max_error_pct;
        out.records.push_back(std::move(rec));
    }
    return out;
}

}  // namespace mgrowth::eval
