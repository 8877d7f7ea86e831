#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mgrowth/common/rng.hpp"
#include "mgrowth/forecast/forecaster.hpp"
#include "mgrowth/timeseries/transforms.hpp"

namespace mgrowth::forecast {

struct LstmGrid {
    std::vector<int> lags{3, 5, 10};
    std::vector<int> hidden{4, 8};
    std::vector<int> epochs{50, 200};
    std::vector<std::string> optimizers{"sgd", "adam"};
    double learning_rate = 0.05;
};

struct LstmState {
    std::vector<double> h;
    std::vector<double> c;
};

/**
 * One LSTM cell layer (input, forget and output gates with sigmoid
 * activation, tanh candidate) over a scalar input sequence, plus a linear
 * readout of the final hidden state. Each lag window is processed with a
 * fresh zero state; backpropagation through time runs over the window.
 * Parameters are one flat vector (Wx, Wh, b, w_out, b_out with gate blocks
 * ordered input/forget/candidate/output) for direct finite-difference
 * checking. The forget-gate biases start at one.
 */
class LstmNetwork {
public:
    LstmNetwork(int hidden_size, Rng& rng);

    double predict(std::span<const double> window) const;

    /// One cell update from `prev`; exposed so gate behavior is testable.
    LstmState step(double x, const LstmState& prev) const;

    /// Mean over rows of half the squared prediction error.
    double loss(const ts::LaggedDataset& data) const;

    /// Analytic gradient of loss() with respect to parameters().
    std::vector<double> gradient(const ts::LaggedDataset& data) const;

    /**
     * Mini-batch training (batch size 16) with either plain SGD or Adam.
     * Returns the full-data SSE after each epoch.
     */
    std::vector<double> train(const ts::LaggedDataset& data, double learning_rate, int epochs,
                              const std::string& optimizer, Rng& rng);

    std::vector<double>& parameters() { return theta_; }
    const std::vector<double>& parameters() const { return theta_; }
    int hidden_size() const { return hidden_; }

private:
    int hidden_;
    std::vector<double> theta_;

    struct Cache;
    double forward(std::span<const double> window, std::vector<Cache>* caches) const;
    void backward(std::span<const double> window, const std::vector<Cache>& caches, double dy,
                  std::vector<double>& grad) const;
};

/**
 * Grid-searched LSTM forecaster over (lag, hidden, epochs, optimizer), the
 * same selection and averaging scheme as the feed-forward variant: every
 * candidate trains one network per run seed on the normalized training
 * segment, validation RMSE of the averaged recursive forecasts picks the
 * winner, and a NaN loss triggers one retry at half the learning rate.
 */
FittedPtr fit_lstm(const std::vector<double>& train, const std::vector<double>& validation,
                   const LstmGrid& grid, const std::vector<std::uint64_t>& run_seeds);

}  // namespace mgrowth::forecast
