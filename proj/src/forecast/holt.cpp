#include "mgrowth/forecast/holt.hpp"

#include <algorithm>
#include <stdexcept>

namespace mgrowth::forecast {

namespace {

constexpr double kParamFloor = 1e-4;
constexpr double kParamCeil = 1.0 - 1e-4;

class HoltModel final : public FittedModel {
public:
    HoltModel(HoltParams params, HoltFitState state) : params_(params), state_(state) {}

    Approach approach() const override { return Approach::Holt; }

    std::vector<double> forecast(int horizon) const override {
        require_horizon(horizon);
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(horizon));
        for (int h = 1; h <= horizon; ++h) out.push_back(state_.level + h * state_.trend);
        return out;
    }

    nlohmann::json summary() const override {
        return {{"kind", "HOLT"},
                {"alpha", params_.alpha},
                {"beta", params_.beta},
                {"level", state_.level},
                {"trend", state_.trend},
                {"sse", state_.sse}};
    }

private:
    HoltParams params_;
    HoltFitState state_;
};

}  // namespace

HoltFitState holt_recursion(const std::vector<double>& y, double alpha, double beta) {
    if (y.size() < 2) throw std::invalid_argument("Holt recursion needs at least two values");
    HoltFitState s;
    s.level = y[0];
    s.trend = y[1] - y[0];
    for (std::size_t t = 1; t < y.size(); ++t) {
        double predicted = s.level + s.trend;
        double error = y[t] - predicted;
        s.sse += error * error;
        double previous_level = s.level;
        s.level = alpha * y[t] + (1.0 - alpha) * predicted;
        s.trend = beta * (s.level - previous_level) + (1.0 - beta) * s.trend;
    }
    return s;
}

FittedPtr fit_holt(const std::vector<double>& train) {
    if (train.size() < 3) throw std::invalid_argument("Holt fit needs at least three values");

    double best_alpha = kParamFloor;
    double best_beta = kParamFloor;
    double best_sse = holt_recursion(train, best_alpha, best_beta).sse;
    auto consider = [&](double alpha, double beta) {
        alpha = std::clamp(alpha, kParamFloor, kParamCeil);
        beta = std::clamp(beta, kParamFloor, kParamCeil);
        double sse = holt_recursion(train, alpha, beta).sse;
        if (sse < best_sse) {
            best_sse = sse;
            best_alpha = alpha;
            best_beta = beta;
        }
    };

    for (int i = 1; i <= 19; ++i)
        for (int j = 1; j <= 19; ++j) consider(0.05 * i, 0.05 * j);

    // Shrinking 3x3 neighborhood around the incumbent.
    double step = 0.025;
    for (int round = 0; round < 20; ++round) {
        double a = best_alpha;
        double b = best_beta;
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
                if (di == 0 && dj == 0) continue;
                consider(a + di * step, b + dj * step);
            }
        step *= 0.5;
    }

    HoltParams params{best_alpha, best_beta};
    return std::make_unique<HoltModel>(params, holt_recursion(train, best_alpha, best_beta));
}

}  // namespace mgrowth::forecast
