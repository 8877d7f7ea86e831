#include "mgrowth/forecast/ann.hpp"

#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "mgrowth/evaluation/scores.hpp"
#include "mgrowth/forecast/recursive.hpp"

namespace mgrowth::forecast {

namespace {

constexpr int kBatchSize = 16;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

class AnnModel final : public FittedModel {
public:
    AnnModel(int lag, int hidden, double learning_rate, int epochs, std::vector<AnnNetwork> nets,
             ts::NormalizationParams norm, std::vector<double> seed_window, double validation_rmse,
             std::vector<double> final_sse)
        : lag_(lag),
          hidden_(hidden),
          learning_rate_(learning_rate),
          epochs_(epochs),
          nets_(std::move(nets)),
          norm_(norm),
          seed_window_(std::move(seed_window)),
          validation_rmse_(validation_rmse),
          final_sse_(std::move(final_sse)) {}

    Approach approach() const override { return Approach::Ann; }

    std::vector<double> forecast(int horizon) const override {
        require_horizon(horizon);
        auto scaled = ensemble_recursive_forecast(nets_, seed_window_, horizon);
        return ts::denormalize(scaled, norm_);
    }

    nlohmann::json summary() const override {
        return {{"kind", "ANN"},
                {"lag", lag_},
                {"hidden", hidden_},
                {"learning_rate", learning_rate_},
                {"epochs", epochs_},
                {"runs", nets_.size()},
                {"validation_rmse", validation_rmse_},
                {"final_sse", final_sse_}};
    }

private:
    int lag_;
    int hidden_;
    double learning_rate_;
    int epochs_;
    std::vector<AnnNetwork> nets_;
    ts::NormalizationParams norm_;
    std::vector<double> seed_window_;
    double validation_rmse_;
    std::vector<double> final_sse_;
};

}  // namespace

AnnNetwork::AnnNetwork(int input_size, int hidden_size, Rng& rng)
    : input_(input_size), hidden_(hidden_size) {
    if (input_ < 1 || hidden_ < 1) throw std::invalid_argument("ANN sizes must be positive");
    theta_.assign(static_cast<std::size_t>(hidden_ * input_ + hidden_ + hidden_ + 1), 0.0);
    double r1 = 1.0 / std::sqrt(static_cast<double>(input_));
    double r2 = 1.0 / std::sqrt(static_cast<double>(hidden_));
    for (int j = 0; j < hidden_ * input_; ++j) theta_[static_cast<std::size_t>(j)] = rng.uniform(-r1, r1);
    // b1 stays zero
    std::size_t w2_offset = static_cast<std::size_t>(hidden_ * input_ + hidden_);
    for (int j = 0; j < hidden_; ++j) theta_[w2_offset + static_cast<std::size_t>(j)] = rng.uniform(-r2, r2);
    // b2 stays zero
}

double AnnNetwork::predict(std::span<const double> window) const {
    const double* w1 = theta_.data();
    const double* b1 = w1 + hidden_ * input_;
    const double* w2 = b1 + hidden_;
    double b2 = w2[hidden_];
    double out = b2;
    for (int j = 0; j < hidden_; ++j) {
        double z = b1[j];
        for (int i = 0; i < input_; ++i) z += w1[j * input_ + i] * window[static_cast<std::size_t>(i)];
        out += w2[j] * sigmoid(z);
    }
    return out;
}

void AnnNetwork::accumulate(std::span<const double> window, double target, double scale,
                            std::vector<double>& grad, double& loss_sum) const {
    const double* w1 = theta_.data();
    const double* b1 = w1 + hidden_ * input_;
    const double* w2 = b1 + hidden_;
    double b2 = w2[hidden_];

    std::vector<double> h(static_cast<std::size_t>(hidden_));
    double out = b2;
    for (int j = 0; j < hidden_; ++j) {
        double z = b1[j];
        for (int i = 0; i < input_; ++i) z += w1[j * input_ + i] * window[static_cast<std::size_t>(i)];
        h[static_cast<std::size_t>(j)] = sigmoid(z);
        out += w2[j] * h[static_cast<std::size_t>(j)];
    }
    double err = out - target;
    loss_sum += 0.5 * err * err;

    double* g_w1 = grad.data();
    double* g_b1 = g_w1 + hidden_ * input_;
    double* g_w2 = g_b1 + hidden_;
    double* g_b2 = g_w2 + hidden_;
    *g_b2 += scale * err;
    for (int j = 0; j < hidden_; ++j) {
        double hj = h[static_cast<std::size_t>(j)];
        g_w2[j] += scale * err * hj;
        double dz = err * w2[j] * hj * (1.0 - hj);
        g_b1[j] += scale * dz;
        for (int i = 0; i < input_; ++i)
            g_w1[j * input_ + i] += scale * dz * window[static_cast<std::size_t>(i)];
    }
}

double AnnNetwork::loss(const ts::LaggedDataset& data) const {
    double sum = 0.0;
    for (std::size_t r = 0; r < data.windows.size(); ++r) {
        double err = predict(data.windows[r]) - data.targets[r];
        sum += 0.5 * err * err;
    }
    return sum / static_cast<double>(data.windows.size());
}

std::vector<double> AnnNetwork::gradient(const ts::LaggedDataset& data) const {
    std::vector<double> grad(theta_.size(), 0.0);
    double loss_sum = 0.0;
    double scale = 1.0 / static_cast<double>(data.windows.size());
    for (std::size_t r = 0; r < data.windows.size(); ++r)
        accumulate(data.windows[r], data.targets[r], scale, grad, loss_sum);
    return grad;
}

std::vector<double> AnnNetwork::train(const ts::LaggedDataset& data, double learning_rate,
                                      int epochs, Rng& rng) {
    auto rows = data.windows.size();
    std::vector<std::size_t> order(rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> sse_curve;
    sse_curve.reserve(static_cast<std::size_t>(epochs));
    std::vector<double> grad(theta_.size());

    for (int epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(order.begin(), order.end());
        for (std::size_t start = 0; start < rows; start += kBatchSize) {
            std::size_t end = std::min(rows, start + kBatchSize);
            std::fill(grad.begin(), grad.end(), 0.0);
            double unused = 0.0;
            double scale = 1.0 / static_cast<double>(end - start);
            for (std::size_t r = start; r < end; ++r)
                accumulate(data.windows[order[r]], data.targets[order[r]], scale, grad, unused);
            for (std::size_t k = 0; k < theta_.size(); ++k) theta_[k] -= learning_rate * grad[k];
        }
        double sse = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            double err = predict(data.windows[r]) - data.targets[r];
            sse += err * err;
        }
        sse_curve.push_back(sse);
    }
    return sse_curve;
}

FittedPtr fit_ann(const std::vector<double>& train, const std::vector<double>& validation,
                  const AnnGrid& grid, const std::vector<std::uint64_t>& run_seeds) {
    if (validation.empty())
        throw std::invalid_argument("ANN grid selection needs a validation segment");
    if (grid.lags.empty() || grid.hidden.empty())
        throw std::invalid_argument("ANN grid lists must be non-empty");
    if (run_seeds.empty()) throw std::invalid_argument("ANN needs at least one run seed");

    auto normalized = ts::normalize(train);
    const auto& z = normalized.values;

    struct Candidate {
        int lag;
        int hidden;
        std::vector<AnnNetwork> nets;
        std::vector<double> final_sse;
        double validation_rmse;
    };
    std::optional<Candidate> best;

    for (int lag : grid.lags) {
        if (train.size() < static_cast<std::size_t>(lag) + 2) continue;
        auto data = ts::make_lagged(z, lag);
        for (int hidden : grid.hidden) {
            Candidate cand;
            cand.lag = lag;
            cand.hidden = hidden;
            for (auto seed : run_seeds) {
                // One retry at half the learning rate if the loss blows up.
                std::optional<AnnNetwork> net;
                std::vector<double> curve;
                for (double lr : {grid.learning_rate, grid.learning_rate * 0.5}) {
                    Rng rng(seed);
                    AnnNetwork attempt(lag, hidden, rng);
                    curve = attempt.train(data, lr, grid.epochs, rng);
                    bool diverged = !curve.empty() && !std::isfinite(curve.back());
                    if (!diverged) {
                        net = std::move(attempt);
                        break;
                    }
                }
                if (!net) throw std::runtime_error("ANN training diverged even after halving the learning rate");
                cand.nets.push_back(std::move(*net));
                cand.final_sse.push_back(curve.empty() ? 0.0 : curve.back());
            }
            std::vector<double> seed_window(z.end() - cand.lag, z.end());
            auto scaled = ensemble_recursive_forecast(cand.nets, seed_window,
                                                      static_cast<int>(validation.size()));
            cand.validation_rmse = eval::rmse(ts::denormalize(scaled, normalized.params), validation);
            if (!best || cand.validation_rmse < best->validation_rmse) best = std::move(cand);
        }
    }
    if (!best) throw std::runtime_error("no ANN grid candidate could be trained");

    std::vector<double> history = z;
    for (double v : validation) history.push_back(ts::normalize_one(v, normalized.params));
    std::vector<double> seed_window(history.end() - best->lag, history.end());

    return std::make_unique<AnnModel>(best->lag, best->hidden, grid.learning_rate, grid.epochs,
                                      std::move(best->nets), normalized.params,
                                      std::move(seed_window), best->validation_rmse,
                                      std::move(best->final_sse));
}

}  // namespace mgrowth::forecast
