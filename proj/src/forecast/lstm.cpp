#include "mgrowth/forecast/lstm.hpp"

#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "mgrowth/evaluation/scores.hpp"
#include "mgrowth/forecast/recursive.hpp"

namespace mgrowth::forecast {

namespace {

constexpr int kBatchSize = 16;
// Gate block order within the stacked pre-activation vector.
constexpr int kInput = 0;
constexpr int kForget = 1;
constexpr int kCandidate = 2;
constexpr int kOutput = 3;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

class LstmModel final : public FittedModel {
public:
    LstmModel(int lag, int hidden, int epochs, std::string optimizer, double learning_rate,
              std::vector<LstmNetwork> nets, ts::NormalizationParams norm,
              std::vector<double> seed_window, double validation_rmse,
              std::vector<double> final_sse)
        : lag_(lag),
          hidden_(hidden),
          epochs_(epochs),
          optimizer_(std::move(optimizer)),
          learning_rate_(learning_rate),
          nets_(std::move(nets)),
          norm_(norm),
          seed_window_(std::move(seed_window)),
          validation_rmse_(validation_rmse),
          final_sse_(std::move(final_sse)) {}

    Approach approach() const override { return Approach::Lstm; }

    std::vector<double> forecast(int horizon) const override {
        require_horizon(horizon);
        auto scaled = ensemble_recursive_forecast(nets_, seed_window_, horizon);
        return ts::denormalize(scaled, norm_);
    }

    nlohmann::json summary() const override {
        return {{"kind", "LSTM"},
                {"lag", lag_},
                {"hidden", hidden_},
                {"epochs", epochs_},
                {"optimizer", optimizer_},
                {"learning_rate", learning_rate_},
                {"runs", nets_.size()},
                {"validation_rmse", validation_rmse_},
                {"final_sse", final_sse_}};
    }

private:
    int lag_;
    int hidden_;
    int epochs_;
    std::string optimizer_;
    double learning_rate_;
    std::vector<LstmNetwork> nets_;
    ts::NormalizationParams norm_;
    std::vector<double> seed_window_;
    double validation_rmse_;
    std::vector<double> final_sse_;
};

}  // namespace

struct LstmNetwork::Cache {
    double x = 0.0;
    std::vector<double> h_prev, c_prev;
    std::vector<double> i, f, g, o, c, tanh_c;
};

LstmNetwork::LstmNetwork(int hidden_size, Rng& rng) : hidden_(hidden_size) {
    if (hidden_ < 1) throw std::invalid_argument("LSTM hidden size must be positive");
    auto h = static_cast<std::size_t>(hidden_);
    theta_.assign(4 * h + 4 * h * h + 4 * h + h + 1, 0.0);
    double r = 1.0 / std::sqrt(static_cast<double>(hidden_));
    std::size_t pos = 0;
    for (std::size_t k = 0; k < 4 * h; ++k) theta_[pos++] = rng.uniform(-r, r);          // Wx
    for (std::size_t k = 0; k < 4 * h * h; ++k) theta_[pos++] = rng.uniform(-r, r);      // Wh
    for (std::size_t u = 0; u < h; ++u) theta_[pos + kForget * h + u] = 1.0;             // b
    pos += 4 * h;
    for (std::size_t k = 0; k < h; ++k) theta_[pos++] = rng.uniform(-r, r);              // w_out
    // b_out stays zero
}

double LstmNetwork::forward(std::span<const double> window, std::vector<Cache>* caches) const {
    auto h_n = static_cast<std::size_t>(hidden_);
    const double* wx = theta_.data();
    const double* wh = wx + 4 * h_n;
    const double* b = wh + 4 * h_n * h_n;
    const double* w_out = b + 4 * h_n;
    double b_out = w_out[h_n];

    std::vector<double> h(h_n, 0.0), c(h_n, 0.0);
    for (double x : window) {
        Cache cache;
        cache.x = x;
        cache.h_prev = h;
        cache.c_prev = c;
        cache.i.resize(h_n);
        cache.f.resize(h_n);
        cache.g.resize(h_n);
        cache.o.resize(h_n);
        cache.c.resize(h_n);
        cache.tanh_c.resize(h_n);
        for (std::size_t u = 0; u < h_n; ++u) {
            double z[4];
            for (int gate = 0; gate < 4; ++gate) {
                std::size_t row = static_cast<std::size_t>(gate) * h_n + u;
                double acc = b[row] + wx[row] * x;
                const double* wh_row = wh + row * h_n;
                for (std::size_t v = 0; v < h_n; ++v) acc += wh_row[v] * cache.h_prev[v];
                z[gate] = acc;
            }
            cache.i[u] = sigmoid(z[kInput]);
            cache.f[u] = sigmoid(z[kForget]);
            cache.g[u] = std::tanh(z[kCandidate]);
            cache.o[u] = sigmoid(z[kOutput]);
            cache.c[u] = cache.f[u] * cache.c_prev[u] + cache.i[u] * cache.g[u];
            cache.tanh_c[u] = std::tanh(cache.c[u]);
            c[u] = cache.c[u];
            h[u] = cache.o[u] * cache.tanh_c[u];
        }
        if (caches) caches->push_back(std::move(cache));
    }
    double y = b_out;
    for (std::size_t u = 0; u < h_n; ++u) y += w_out[u] * h[u];
    return y;
}

LstmState LstmNetwork::step(double x, const LstmState& prev) const {
    auto h_n = static_cast<std::size_t>(hidden_);
    if (prev.h.size() != h_n || prev.c.size() != h_n)
        throw std::invalid_argument("LSTM state size mismatch");
    const double* wx = theta_.data();
    const double* wh = wx + 4 * h_n;
    const double* b = wh + 4 * h_n * h_n;

    LstmState next;
    next.h.resize(h_n);
    next.c.resize(h_n);
    for (std::size_t u = 0; u < h_n; ++u) {
        double z[4];
        for (int gate = 0; gate < 4; ++gate) {
            std::size_t row = static_cast<std::size_t>(gate) * h_n + u;
            double acc = b[row] + wx[row] * x;
            const double* wh_row = wh + row * h_n;
            for (std::size_t v = 0; v < h_n; ++v) acc += wh_row[v] * prev.h[v];
            z[gate] = acc;
        }
        double i = sigmoid(z[kInput]);
        double f = sigmoid(z[kForget]);
        double g = std::tanh(z[kCandidate]);
        double o = sigmoid(z[kOutput]);
        next.c[u] = f * prev.c[u] + i * g;
        next.h[u] = o * std::tanh(next.c[u]);
    }
    return next;
}

double LstmNetwork::predict(std::span<const double> window) const {
    return forward(window, nullptr);
}

void LstmNetwork::backward(std::span<const double> window, const std::vector<Cache>& caches,
                           double dy, std::vector<double>& grad) const {
    auto h_n = static_cast<std::size_t>(hidden_);
    const double* wh = theta_.data() + 4 * h_n;
    const double* w_out = theta_.data() + 4 * h_n + 4 * h_n * h_n + 4 * h_n;

    double* g_wx = grad.data();
    double* g_wh = g_wx + 4 * h_n;
    double* g_b = g_wh + 4 * h_n * h_n;
    double* g_wout = g_b + 4 * h_n;
    double* g_bout = g_wout + h_n;

    const auto& last = caches.back();
    *g_bout += dy;
    std::vector<double> dh(h_n), dc(h_n, 0.0);
    for (std::size_t u = 0; u < h_n; ++u) {
        g_wout[u] += dy * last.o[u] * last.tanh_c[u];
        dh[u] = dy * w_out[u];
    }

    std::vector<double> dz(4 * h_n);
    std::vector<double> dh_prev(h_n);
    for (std::size_t t = window.size(); t-- > 0;) {
        const Cache& cache = caches[t];
        for (std::size_t u = 0; u < h_n; ++u) {
            dc[u] += dh[u] * cache.o[u] * (1.0 - cache.tanh_c[u] * cache.tanh_c[u]);
            double d_o = dh[u] * cache.tanh_c[u];
            double d_f = dc[u] * cache.c_prev[u];
            double d_i = dc[u] * cache.g[u];
            double d_g = dc[u] * cache.i[u];
            dz[kInput * h_n + u] = d_i * cache.i[u] * (1.0 - cache.i[u]);
            dz[kForget * h_n + u] = d_f * cache.f[u] * (1.0 - cache.f[u]);
            dz[kCandidate * h_n + u] = d_g * (1.0 - cache.g[u] * cache.g[u]);
            dz[kOutput * h_n + u] = d_o * cache.o[u] * (1.0 - cache.o[u]);
        }
        std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
        for (std::size_t row = 0; row < 4 * h_n; ++row) {
            double d = dz[row];
            if (d == 0.0) continue;
            g_b[row] += d;
            g_wx[row] += d * cache.x;
            const double* wh_row = wh + row * h_n;
            double* g_wh_row = g_wh + row * h_n;
            for (std::size_t v = 0; v < h_n; ++v) {
                g_wh_row[v] += d * cache.h_prev[v];
                dh_prev[v] += wh_row[v] * d;
            }
        }
        for (std::size_t u = 0; u < h_n; ++u) {
            dc[u] *= cache.f[u];
            dh[u] = dh_prev[u];
        }
    }
}

double LstmNetwork::loss(const ts::LaggedDataset& data) const {
    double sum = 0.0;
    for (std::size_t r = 0; r < data.windows.size(); ++r) {
        double err = predict(data.windows[r]) - data.targets[r];
        sum += 0.5 * err * err;
    }
    return sum / static_cast<double>(data.windows.size());
}

std::vector<double> LstmNetwork::gradient(const ts::LaggedDataset& data) const {
    std::vector<double> grad(theta_.size(), 0.0);
    double scale = 1.0 / static_cast<double>(data.windows.size());
    std::vector<Cache> caches;
    for (std::size_t r = 0; r < data.windows.size(); ++r) {
        caches.clear();
        double pred = forward(data.windows[r], &caches);
        backward(data.windows[r], caches, scale * (pred - data.targets[r]), grad);
    }
    return grad;
}

std::vector<double> LstmNetwork::train(const ts::LaggedDataset& data, double learning_rate,
                                       int epochs, const std::string& optimizer, Rng& rng) {
    bool use_adam = optimizer == "adam";
    if (!use_adam && optimizer != "sgd")
        throw std::invalid_argument("unknown LSTM optimizer: " + optimizer);

    auto rows = data.windows.size();
    std::vector<std::size_t> order(rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> grad(theta_.size());
    std::vector<double> m(theta_.size(), 0.0), v(theta_.size(), 0.0);
    long adam_t = 0;
    std::vector<double> sse_curve;
    sse_curve.reserve(static_cast<std::size_t>(epochs));
    std::vector<Cache> caches;

    for (int epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(order.begin(), order.end());
        for (std::size_t start = 0; start < rows; start += kBatchSize) {
            std::size_t end = std::min(rows, start + kBatchSize);
            std::fill(grad.begin(), grad.end(), 0.0);
            double scale = 1.0 / static_cast<double>(end - start);
            for (std::size_t r = start; r < end; ++r) {
                caches.clear();
                const auto& window = data.windows[order[r]];
                double pred = forward(window, &caches);
                backward(window, caches, scale * (pred - data.targets[order[r]]), grad);
            }
            if (use_adam) {
                ++adam_t;
                constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
                double bc1 = 1.0 - std::pow(beta1, static_cast<double>(adam_t));
                double bc2 = 1.0 - std::pow(beta2, static_cast<double>(adam_t));
                for (std::size_t k = 0; k < theta_.size(); ++k) {
                    m[k] = beta1 * m[k] + (1.0 - beta1) * grad[k];
                    v[k] = beta2 * v[k] + (1.0 - beta2) * grad[k] * grad[k];
                    theta_[k] -= learning_rate * (m[k] / bc1) / (std::sqrt(v[k] / bc2) + eps);
                }
            } else {
                for (std::size_t k = 0; k < theta_.size(); ++k)
                    theta_[k] -= learning_rate * grad[k];
            }
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

FittedPtr fit_lstm(const std::vector<double>& train, const std::vector<double>& validation,
                   const LstmGrid& grid, const std::vector<std::uint64_t>& run_seeds) {
    if (validation.empty())
        throw std::invalid_argument("LSTM grid selection needs a validation segment");
    if (grid.lags.empty() || grid.hidden.empty() || grid.epochs.empty() ||
        grid.optimizers.empty())
        throw std::invalid_argument("LSTM grid lists must be non-empty");
    if (run_seeds.empty()) throw std::invalid_argument("LSTM needs at least one run seed");

    auto normalized = ts::normalize(train);
    const auto& z = normalized.values;

    struct Candidate {
        int lag, hidden, epochs;
        std::string optimizer;
        std::vector<LstmNetwork> nets;
        std::vector<double> final_sse;
        double validation_rmse;
    };
    std::optional<Candidate> best;

    for (int lag : grid.lags) {
        if (train.size() < static_cast<std::size_t>(lag) + 2) continue;
        auto data = ts::make_lagged(z, lag);
        for (int hidden : grid.hidden) {
            for (int epochs : grid.epochs) {
                for (const auto& optimizer : grid.optimizers) {
                    Candidate cand;
                    cand.lag = lag;
                    cand.hidden = hidden;
                    cand.epochs = epochs;
                    cand.optimizer = optimizer;
                    for (auto seed : run_seeds) {
                        std::optional<LstmNetwork> net;
                        std::vector<double> curve;
                        for (double lr : {grid.learning_rate, grid.learning_rate * 0.5}) {
                            Rng rng(seed);
                            LstmNetwork attempt(hidden, rng);
                            curve = attempt.train(data, lr, epochs, optimizer, rng);
                            bool diverged = !curve.empty() && !std::isfinite(curve.back());
                            if (!diverged) {
                                net = std::move(attempt);
                                break;
                            }
                        }
                        if (!net)
                            throw std::runtime_error(
                                "LSTM training diverged even after halving the learning rate");
                        cand.nets.push_back(std::move(*net));
                        cand.final_sse.push_back(curve.empty() ? 0.0 : curve.back());
                    }
                    std::vector<double> seed_window(z.end() - lag, z.end());
                    auto scaled = ensemble_recursive_forecast(cand.nets, seed_window,
                                                              static_cast<int>(validation.size()));
                    cand.validation_rmse =
                        eval::rmse(ts::denormalize(scaled, normalized.params), validation);
                    if (!best || cand.validation_rmse < best->validation_rmse)
                        best = std::move(cand);
                }
            }
        }
    }
    if (!best) throw std::runtime_error("no LSTM grid candidate could be trained");

    std::vector<double> history = z;
    for (double v : validation) history.push_back(ts::normalize_one(v, normalized.params));
    std::vector<double> seed_window(history.end() - best->lag, history.end());

    return std::make_unique<LstmModel>(best->lag, best->hidden, best->epochs, best->optimizer,
                                       grid.learning_rate, std::move(best->nets),
                                       normalized.params, std::move(seed_window),
                                       best->validation_rmse, std::move(best->final_sse));
}

}  // namespace mgrowth::forecast
