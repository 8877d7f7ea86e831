#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mgrowth/common/rng.hpp"
#include "mgrowth/forecast/forecaster.hpp"
#include "mgrowth/timeseries/transforms.hpp"

namespace mgrowth::forecast {

struct AnnGrid {
    std::vector<int> lags{3, 5, 10};
    std::vector<int> hidden{2, 4, 8};
    double learning_rate = 0.1;
    int epochs = 200;
};

/**
 * Single-hidden-layer network (sigmoid hidden units, linear output) over a
 * lag window. Parameters live in one flat vector (W1 row-major, b1, w2, b2)
 * so gradients can be checked against finite differences directly.
 */
class AnnNetwork {
public:
    AnnNetwork(int input_size, int hidden_size, Rng& rng);

    double predict(std::span<const double> window) const;

    /// Mean squared error over the dataset, halved.
    double loss(const ts::LaggedDataset& data) const;

    /// Analytic gradient of loss() with respect to parameters().
    std::vector<double> gradient(const ts::LaggedDataset& data) const;

    /**
     * Mini-batch gradient descent (batch size 16, deterministic reshuffle
     * per epoch from `rng`). Returns the full-data SSE after each epoch.
     */
    std::vector<double> train(const ts::LaggedDataset& data, double learning_rate, int epochs,
                              Rng& rng);

    std::vector<double>& parameters() { return theta_; }
    const std::vector<double>& parameters() const { return theta_; }
    int input_size() const { return input_; }
    int hidden_size() const { return hidden_; }

private:
    int input_;
    int hidden_;
    std::vector<double> theta_;

    void accumulate(std::span<const double> window, double target, double scale,
                    std::vector<double>& grad, double& loss_sum) const;
};

/**
 * Grid-searched feed-forward forecaster. Candidates are (lag, hidden) pairs;
 * each trains `run_seeds.size()` independently initialized networks on the
 * normalized training segment and is scored by the validation RMSE of its
 * averaged recursive forecasts. A NaN loss triggers one retry at half the
 * learning rate. Forecasts continue past the validation segment, averaging
 * the runs' independent recursions.
 */
FittedPtr fit_ann(const std::vector<double>& train, const std::vector<double>& validation,
                  const AnnGrid& grid, const std::vector<std::uint64_t>& run_seeds);

}  // namespace mgrowth::forecast
