#include "mgrowth/forecast/arima.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mgrowth/forecast/nelder_mead.hpp"
#include "mgrowth/timeseries/transforms.hpp"

namespace mgrowth::forecast {

namespace {

// Durbin-Levinson map from partial autocorrelations in (-1,1) to AR
// coefficients of a stationary polynomial.
std::vector<double> pacf_to_coeffs(const std::vector<double>& partials) {
    std::vector<double> phi;
    for (std::size_t k = 0; k < partials.size(); ++k) {
        std::vector<double> next(k + 1);
        next[k] = partials[k];
        for (std::size_t i = 0; i < k; ++i) next[i] = phi[i] - partials[k] * phi[k - 1 - i];
        phi = std::move(next);
    }
    return phi;
}

struct CssWorkspace {
    std::vector<double> residuals;
};

// Conditional sum of squares of w under the ARMA recursion with
// zero-initialized presample shocks. Residuals start at index p.
double css(const std::vector<double>& w, const std::vector<double>& ar,
           const std::vector<double>& ma, double intercept, CssWorkspace& ws) {
    auto m = w.size();
    auto p = ar.size();
    auto q = ma.size();
    ws.residuals.assign(m, 0.0);
    double sse = 0.0;
    for (std::size_t t = p; t < m; ++t) {
        double pred = intercept;
        for (std::size_t i = 0; i < p; ++i) pred += ar[i] * w[t - 1 - i];
        for (std::size_t j = 0; j < q; ++j) {
            if (t >= j + 1 && t - 1 - j >= p) pred += ma[j] * ws.residuals[t - 1 - j];
        }
        double e = w[t] - pred;
        ws.residuals[t] = e;
        sse += e * e;
    }
    return sse;
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

class ArimaModel final : public FittedModel {
public:
    ArimaModel(ArimaOrder order, bool with_intercept, ArimaCoefficients coeffs,
               ts::Differenced diff, std::vector<double> residuals, double sse, double aic,
               bool fallback)
        : order_(order),
          with_intercept_(with_intercept),
          coeffs_(std::move(coeffs)),
          diff_(std::move(diff)),
          residuals_(std::move(residuals)),
          sse_(sse),
          aic_(aic),
          fallback_(fallback) {}

    Approach approach() const override { return Approach::Arima; }

    std::vector<double> forecast(int horizon) const override {
        require_horizon(horizon);
        auto w = diff_.values;
        auto e = residuals_;
        auto m = w.size();
        auto p = coeffs_.ar.size();
        auto q = coeffs_.ma.size();
        for (int step = 0; step < horizon; ++step) {
            std::size_t t = w.size();
            double pred = coeffs_.intercept;
            for (std::size_t i = 0; i < p; ++i) {
                if (t >= i + 1) pred += coeffs_.ar[i] * w[t - 1 - i];
            }
            for (std::size_t j = 0; j < q; ++j) {
                // Future shocks enter at their expectation of zero.
                if (t >= j + 1 && t - 1 - j >= p && t - 1 - j < m)
                    pred += coeffs_.ma[j] * e[t - 1 - j];
            }
            w.push_back(pred);
            e.push_back(0.0);
        }
        ts::Differenced extended = diff_;
        extended.values = std::move(w);
        auto restored = ts::invert_difference(extended);
        return {restored.end() - horizon, restored.end()};
    }

    nlohmann::json summary() const override {
        nlohmann::json j{{"kind", "ARIMA"},
                         {"p", order_.p},
                         {"d", order_.d},
                         {"q", order_.q},
                         {"ar", coeffs_.ar},
                         {"ma", coeffs_.ma},
                         {"with_intercept", with_intercept_},
                         {"intercept", coeffs_.intercept},
                         {"sigma2", coeffs_.sigma2},
                         {"sse", sse_},
                         {"aic", aic_}};
        if (fallback_) j["fallback"] = true;
        return j;
    }

    double aic() const { return aic_; }

private:
    ArimaOrder order_;
    bool with_intercept_;
    ArimaCoefficients coeffs_;
    ts::Differenced diff_;       // differenced training series plus inversion state
    std::vector<double> residuals_;
    double sse_;
    double aic_;
    bool fallback_;
};

FittedPtr fit_arima_impl(const std::vector<double>& train, ArimaOrder order, bool with_intercept,
                         bool fallback_flag) {
    if (order.p < 0 || order.q < 0 || order.d < 0 || order.d > 2)
        throw std::invalid_argument("invalid ARIMA order");
    auto n = static_cast<long>(train.size());
    if (n <= order.p + order.q + order.d + 1)
        throw std::invalid_argument("series too short for ARIMA(" + std::to_string(order.p) +
                                    "," + std::to_string(order.d) + "," + std::to_string(order.q) +
                                    ")");

    auto diff = ts::difference(train, order.d);
    const auto& w = diff.values;
    if (static_cast<long>(w.size()) - order.p < 2)
        throw std::invalid_argument("not enough residual terms for ARIMA order");

    auto p = static_cast<std::size_t>(order.p);
    auto q = static_cast<std::size_t>(order.q);
    double w_mean = mean_of(w);
    double w_scale = std::max(stddev_of(w), 1e-8);

    std::size_t dims = p + q + (with_intercept ? 1 : 0);
    ArimaCoefficients coeffs;
    double sse = 0.0;
    CssWorkspace ws;

    auto unpack = [&](const std::vector<double>& u, ArimaCoefficients& out) {
        std::vector<double> ar_partials(p), ma_partials(q);
        for (std::size_t i = 0; i < p; ++i) ar_partials[i] = std::tanh(u[i]);
        for (std::size_t j = 0; j < q; ++j) ma_partials[j] = std::tanh(u[p + j]);
        out.ar = pacf_to_coeffs(ar_partials);
        out.ma = pacf_to_coeffs(ma_partials);
        // The transform yields a stable 1 - sum(a_j z^j); negating gives an
        // invertible 1 + sum(theta_j z^j).
        for (auto& v : out.ma) v = -v;
        out.intercept = with_intercept ? w_mean + u[p + q] * w_scale : 0.0;
    };

    if (dims == 0) {
        sse = css(w, {}, {}, 0.0, ws);
    } else {
        auto objective = [&](const std::vector<double>& u) {
            ArimaCoefficients c;
            unpack(u, c);
            double value = css(w, c.ar, c.ma, c.intercept, ws);
            return std::isfinite(value) ? value : 1e300;
        };
        NelderMeadOptions options;
        options.max_evaluations = 300 * static_cast<int>(dims) + 100;
        auto result = nelder_mead(objective, std::vector<double>(dims, 0.0), 0.4, options);
        if (!result.converged && result.fx >= 1e300)
            throw std::runtime_error("ARIMA optimizer did not converge after " +
                                     std::to_string(result.evaluations) + " evaluations");
        unpack(result.x, coeffs);
        sse = css(w, coeffs.ar, coeffs.ma, coeffs.intercept, ws);
    }

    if (!roots_outside_unit_circle(coeffs.ar)) throw std::runtime_error("unstable fit");
    std::vector<double> ma_negated = coeffs.ma;
    for (auto& v : ma_negated) v = -v;
    if (!roots_outside_unit_circle(ma_negated)) throw std::runtime_error("unstable fit");

    auto n_resid = static_cast<double>(w.size() - p);
    coeffs.sigma2 = sse / n_resid;
    double k = static_cast<double>(order.p + order.q + 1);
    double aic = static_cast<double>(n) * std::log(std::max(sse, 1e-300) / static_cast<double>(n)) +
                 2.0 * k;

    return std::make_unique<ArimaModel>(order, with_intercept, std::move(coeffs), std::move(diff),
                                        std::move(ws.residuals), sse, aic, fallback_flag);
}

}  // namespace

bool roots_outside_unit_circle(const std::vector<double>& coeffs, double margin) {
    std::vector<double> significant;
    for (double c : coeffs) significant.push_back(c);
    while (!significant.empty() && std::fabs(significant.back()) < 1e-10) significant.pop_back();
    if (significant.empty()) return true;

    auto m = static_cast<Eigen::Index>(significant.size());
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) companion(0, i) = significant[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 1; i < m; ++i) companion(i, i - 1) = 1.0;

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success) return false;
    // Eigenvalues are reciprocals of the polynomial roots.
    double max_abs = 0.0;
    for (Eigen::Index i = 0; i < m; ++i)
        max_abs = std::max(max_abs, std::abs(solver.eigenvalues()(i)));
    return max_abs < 1.0 / margin;
}

FittedPtr fit_arima(const std::vector<double>& train, ArimaOrder order, bool with_intercept) {
    return fit_arima_impl(train, order, with_intercept, false);
}

FittedPtr auto_arima(const std::vector<double>& train, const AutoArimaOptions& options) {
    if (train.size() < 10) throw std::invalid_argument("auto ARIMA needs at least ten values");

    FittedPtr best;
    double best_aic = 0.0;
    int best_pq = 0;
    int best_d = 0;
    for (int d = 0; d <= options.max_d; ++d) {
        for (int p = 0; p <= options.max_p; ++p) {
            for (int q = 0; q <= options.max_q; ++q) {
                if (static_cast<long>(train.size()) <= p + q + d + 1) continue;
                FittedPtr candidate;
                try {
                    candidate = fit_arima_impl(train, {p, d, q}, true, false);
                } catch (const std::exception&) {
                    continue;  // unstable or unfittable order
                }
                double aic = static_cast<ArimaModel*>(candidate.get())->aic();
                int pq = p + q;
                bool better = !best || aic < best_aic ||
                              (aic == best_aic &&
                               (pq < best_pq || (pq == best_pq && d < best_d)));
                if (better) {
                    best = std::move(candidate);
                    best_aic = aic;
                    best_pq = pq;
                    best_d = d;
                }
            }
        }
    }
    if (best) return best;
    return fit_arima_impl(train, {0, 1, 0}, false, true);
}

}  // namespace mgrowth::forecast
