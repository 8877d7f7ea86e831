#include "mgrowth/forecast/svr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>

#include "mgrowth/evaluation/scores.hpp"

namespace mgrowth::forecast {

namespace {

std::vector<std::vector<double>> kernel_matrix(const SvrParams& params,
                                               const std::vector<std::vector<double>>& rows) {
    auto n = rows.size();
    std::vector<std::vector<double>> k(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double v = kernel_eval(params, rows[i], rows[j]);
            k[i][j] = v;
            k[j][i] = v;
        }
    return k;
}

class SvrModel final : public FittedModel {
public:
    SvrModel(SvrParams params, ts::NormalizationParams norm,
             std::vector<std::vector<double>> support_rows, std::vector<double> beta, double bias,
             std::vector<double> seed_window, double validation_rmse, double in_sample_sse,
             int iterations)
        : params_(std::move(params)),
          norm_(norm),
          support_rows_(std::move(support_rows)),
          beta_(std::move(beta)),
          bias_(bias),
          seed_window_(std::move(seed_window)),
          validation_rmse_(validation_rmse),
          in_sample_sse_(in_sample_sse),
          iterations_(iterations) {}

    Approach approach() const override { return Approach::Svr; }

    std::vector<double> forecast(int horizon) const override {
        require_horizon(horizon);
        std::vector<double> window = seed_window_;
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(horizon));
        for (int h = 0; h < horizon; ++h) {
            double scaled = predict_window(window);
            out.push_back(ts::denormalize_one(scaled, norm_));
            window.erase(window.begin());
            window.push_back(scaled);
        }
        return out;
    }

    double predict_window(std::span<const double> window) const {
        double f = bias_;
        for (std::size_t k = 0; k < support_rows_.size(); ++k)
            f += beta_[k] * kernel_eval(params_, support_rows_[k], window);
        return f;
    }

    nlohmann::json summary() const override {
        return {{"kind", "SVR"},
                {"kernel", params_.kernel},
                {"c", params_.c},
                {"gamma", params_.gamma},
                {"epsilon", params_.epsilon},
                {"lag", params_.lag},
                {"support_vectors", support_rows_.size()},
                {"solver_iterations", iterations_},
                {"validation_rmse", validation_rmse_},
                {"sse", in_sample_sse_}};
    }

private:
    SvrParams params_;
    ts::NormalizationParams norm_;
    std::vector<std::vector<double>> support_rows_;
    std::vector<double> beta_;
    double bias_;
    std::vector<double> seed_window_;
    double validation_rmse_;
    double in_sample_sse_;
    int iterations_;
};

}  // namespace

double kernel_eval(const SvrParams& params, std::span<const double> a, std::span<const double> b) {
    if (params.kernel == "linear") {
        double dot = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
        return dot;
    }
    if (params.kernel == "rbf") {
        double dist2 = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            double d = a[i] - b[i];
            dist2 += d * d;
        }
        return std::exp(-params.gamma * dist2);
    }
    throw std::invalid_argument("unknown SVR kernel: " + params.kernel);
}

SvrDualSolution solve_svr_dual(const std::vector<std::vector<double>>& rows,
                               const std::vector<double>& targets, const SvrParams& params,
                               double tol, int max_iterations) {
    auto n = rows.size();
    if (n == 0 || targets.size() != n)
        throw std::invalid_argument("SVR dual needs matching non-empty rows and targets");
    const double c_bound = params.c;
    auto k = kernel_matrix(params, rows);

    SvrDualSolution sol;
    sol.alpha_up.assign(n, 0.0);
    sol.alpha_down.assign(n, 0.0);
    sol.beta.assign(n, 0.0);
    std::vector<double> f(n, 0.0);  // sum_k beta_k K(k, t)

    // Variable v in [0, 2n): v < n are the +epsilon multipliers (label +1),
    // v >= n the -epsilon multipliers (label -1).
    auto label = [&](std::size_t v) { return v < n ? 1.0 : -1.0; };
    auto base = [&](std::size_t v) { return v < n ? v : v - n; };
    auto alpha_of = [&](std::size_t v) -> double& {
        return v < n ? sol.alpha_up[v] : sol.alpha_down[v - n];
    };
    auto gradient = [&](std::size_t v) {
        std::size_t t = base(v);
        return v < n ? f[t] + params.epsilon - targets[t]
                     : -f[t] + params.epsilon + targets[t];
    };
    auto score = [&](std::size_t v) { return -label(v) * gradient(v); };
    auto in_up = [&](std::size_t v) {
        return v < n ? alpha_of(v) < c_bound : alpha_of(v) > 0.0;
    };
    auto in_low = [&](std::size_t v) {
        return v < n ? alpha_of(v) > 0.0 : alpha_of(v) < c_bound;
    };

    int iter = 0;
    for (; iter < max_iterations; ++iter) {
        double up_score = -std::numeric_limits<double>::infinity();
        double low_score = std::numeric_limits<double>::infinity();
        std::size_t i = 0, j = 0;
        bool have_i = false, have_j = false;
        for (std::size_t v = 0; v < 2 * n; ++v) {
            if (in_up(v) && score(v) > up_score) {
                up_score = score(v);
                i = v;
                have_i = true;
            }
            if (in_low(v) && score(v) < low_score) {
                low_score = score(v);
                j = v;
                have_j = true;
            }
        }
        if (!have_i || !have_j || up_score - low_score < tol) {
            sol.converged = true;
            break;
        }

        std::size_t bi = base(i), bj = base(j);
        double eta = k[bi][bi] + k[bj][bj] - 2.0 * k[bi][bj];
        eta = std::max(eta, 1e-12);
        double lambda = (up_score - low_score) / eta;
        // Box caps in the feasible direction of each endpoint.
        double cap_i = label(i) > 0 ? c_bound - alpha_of(i) : alpha_of(i);
        double cap_j = label(j) > 0 ? alpha_of(j) : c_bound - alpha_of(j);
        lambda = std::min(lambda, std::min(cap_i, cap_j));
        if (lambda <= 0.0) {
            sol.converged = true;  // numerically stuck at a boundary
            break;
        }

        alpha_of(i) += label(i) * lambda;
        alpha_of(j) -= label(j) * lambda;
        sol.beta[bi] += lambda;
        sol.beta[bj] -= lambda;
        for (std::size_t t = 0; t < n; ++t) f[t] += lambda * (k[bi][t] - k[bj][t]);
    }
    sol.iterations = iter;

    // Bias from the free multipliers, midpoint of the bounds otherwise.
    double sum = 0.0;
    int free_count = 0;
    for (std::size_t v = 0; v < 2 * n; ++v) {
        double a = alpha_of(v);
        if (a > 0.0 && a < c_bound) {
            sum += score(v);
            ++free_count;
        }
    }
    if (free_count > 0) {
        sol.bias = sum / free_count;
    } else {
        double up_best = -std::numeric_limits<double>::infinity();
        double low_best = std::numeric_limits<double>::infinity();
        for (std::size_t v = 0; v < 2 * n; ++v) {
            if (in_up(v)) up_best = std::max(up_best, score(v));
            if (in_low(v)) low_best = std::min(low_best, score(v));
        }
        sol.bias = (up_best + low_best) / 2.0;
    }
    return sol;
}

FittedPtr fit_svr(const std::vector<double>& train, const std::vector<double>& validation,
                  const SvrGrid& grid) {
    if (validation.empty())
        throw std::invalid_argument("SVR grid selection needs a validation segment");
    if (grid.kernels.empty() || grid.c_values.empty() || grid.gamma_values.empty() ||
        grid.epsilon_values.empty() || grid.lags.empty())
        throw std::invalid_argument("SVR grid lists must be non-empty");

    auto normalized = ts::normalize(train);
    const auto& z = normalized.values;

    struct Candidate {
        SvrParams params;
        SvrDualSolution solution;
        double validation_rmse = 0.0;
        const ts::LaggedDataset* data = nullptr;
    };
    std::optional<Candidate> best;

    // One lagged dataset per lag value; grid points share them.
    std::vector<std::pair<int, std::unique_ptr<ts::LaggedDataset>>> lagged_cache;
    auto lagged_for = [&](int lag) -> const ts::LaggedDataset* {
        for (auto& [l, d] : lagged_cache)
            if (l == lag) return d.get();
        if (train.size() < static_cast<std::size_t>(lag) + 2) return nullptr;
        lagged_cache.emplace_back(lag, std::make_unique<ts::LaggedDataset>(ts::make_lagged(z, lag)));
        return lagged_cache.back().second.get();
    };

    for (const auto& kernel : grid.kernels) {
        for (int lag : grid.lags) {
            const auto* data = lagged_for(lag);
            if (!data) continue;
            for (double c : grid.c_values) {
                for (double gamma : grid.gamma_values) {
                    for (double eps : grid.epsilon_values) {
                        SvrParams params{kernel, c, gamma, eps, lag};
                        auto solution = solve_svr_dual(data->windows, data->targets, params);

                        // Recursive forecast across the validation segment.
                        std::vector<double> window(z.end() - lag, z.end());
                        std::vector<double> preds;
                        preds.reserve(validation.size());
                        for (std::size_t h = 0; h < validation.size(); ++h) {
                            double scaled = 0.0;
                            {
                                double acc = solution.bias;
                                for (std::size_t r = 0; r < data->windows.size(); ++r)
                                    acc += solution.beta[r] *
                                           kernel_eval(params, data->windows[r], window);
                                scaled = acc;
                            }
                            preds.push_back(ts::denormalize_one(scaled, normalized.params));
                            window.erase(window.begin());
                            window.push_back(scaled);
                        }
                        double score = eval::rmse(preds, validation);
                        if (!best || score < best->validation_rmse) {
                            best = Candidate{params, std::move(solution), score, data};
                        }
                    }
                }
            }
        }
    }
    if (!best) throw std::runtime_error("no SVR grid candidate could be trained");

    // Keep only rows with nonzero weight; they fully determine predictions.
    std::vector<std::vector<double>> support;
    std::vector<double> beta;
    double in_sample_sse = 0.0;
    {
        const auto& data = *best->data;
        for (std::size_t r = 0; r < data.windows.size(); ++r) {
            if (best->solution.beta[r] != 0.0) {
                support.push_back(data.windows[r]);
                beta.push_back(best->solution.beta[r]);
            }
        }
        for (std::size_t r = 0; r < data.windows.size(); ++r) {
            double pred = best->solution.bias;
            for (std::size_t s = 0; s < support.size(); ++s)
                pred += beta[s] * kernel_eval(best->params, support[s], data.windows[r]);
            double err = pred - data.targets[r];
            in_sample_sse += err * err;
        }
    }

    // Forecast origin: the end of the observed data (train + validation).
    std::vector<double> history = z;
    for (double v : validation) history.push_back(ts::normalize_one(v, normalized.params));
    std::vector<double> seed(history.end() - best->params.lag, history.end());

    return std::make_unique<SvrModel>(best->params, normalized.params, std::move(support),
                                      std::move(beta), best->solution.bias, std::move(seed),
                                      best->validation_rmse, in_sample_sse,
                                      best->solution.iterations);
}

}  // namespace mgrowth::forecast
