#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace mgrowth::forecast {

enum class Approach { Holt, Arima, Svr, Ann, Lstm };

inline std::string approach_name(Approach a) {
    switch (a) {
        case Approach::Holt: return "HOLT";
        case Approach::Arima: return "ARIMA";
        case Approach::Svr: return "SVR";
        case Approach::Ann: return "ANN";
        case Approach::Lstm: return "LSTM";
    }
    throw std::logic_error("unknown approach");
}

inline Approach approach_from_name(const std::string& name) {
    if (name == "HOLT") return Approach::Holt;
    if (name == "ARIMA") return Approach::Arima;
    if (name == "SVR") return Approach::Svr;
    if (name == "ANN") return Approach::Ann;
    if (name == "LSTM") return Approach::Lstm;
    throw std::invalid_argument("unknown approach name: " + name);
}

/**
 * A trained forecaster. Immutable after fitting; forecast() is read-only
 * and deterministic, so one instance may serve several threads.
 */
class FittedModel {
public:
    virtual ~FittedModel() = default;

    virtual Approach approach() const = 0;

    /**
     * The next `horizon` values in the original scale of the training data.
     * Forecasts are generated recursively, so forecast(h1) is always a
     * prefix of forecast(h2) for h1 < h2.
     */
    virtual std::vector<double> forecast(int horizon) const = 0;

    /// Chosen hyperparameters and fit diagnostics.
    virtual nlohmann::json summary() const = 0;
};

using FittedPtr = std::unique_ptr<FittedModel>;

inline void require_horizon(int horizon) {
    if (horizon < 1) throw std::invalid_argument("forecast horizon must be at least 1");
}

}  // namespace mgrowth::forecast
