#pragma once

#include <vector>

namespace mgrowth::forecast {

/**
 * Recursive multi-step forecast for an ensemble of one-step predictors.
 * Each network feeds its own predictions back into its own lag window; the
 * per-step mean over networks is returned (normalized scale).
 */
template <typename Net>
std::vector<double> ensemble_recursive_forecast(const std::vector<Net>& nets,
                                                const std::vector<double>& seed_window,
                                                int horizon) {
    std::vector<double> totals(static_cast<std::size_t>(horizon), 0.0);
    for (const auto& net : nets) {
        std::vector<double> window = seed_window;
        for (int h = 0; h < horizon; ++h) {
            double pred = net.predict(window);
            totals[static_cast<std::size_t>(h)] += pred;
            window.erase(window.begin());
            window.push_back(pred);
        }
    }
    for (auto& v : totals) v /= static_cast<double>(nets.size());
    return totals;
}

}  // namespace mgrowth::forecast
