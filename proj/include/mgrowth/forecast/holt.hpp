#pragma once

#include <vector>

#include "mgrowth/forecast/forecaster.hpp"

namespace mgrowth::forecast {

struct HoltParams {
    double alpha = 0.0;  // level smoothing, in (0, 1)
    double beta = 0.0;   // trend smoothing, in (0, 1)
};

/// Final state of the level/trend recursion plus the one-step-ahead SSE
/// accumulated while running it.
struct HoltFitState {
    double level = 0.0;
    double trend = 0.0;
    double sse = 0.0;
};

/**
 * Runs Holt's recursion l_t = a*y_t + (1-a)(l_{t-1}+b_{t-1}),
 * b_t = b*(l_t-l_{t-1}) + (1-b)*b_{t-1} with l_1 = y_1, b_1 = y_2 - y_1,
 * accumulating the one-step-ahead squared errors from t = 2 on.
 */
HoltFitState holt_recursion(const std::vector<double>& y, double alpha, double beta);

/**
 * Fits Holt's linear trend method. The smoothing pair is chosen by
 * minimizing the one-step-ahead SSE over a 0.05-step grid followed by a
 * shrinking neighborhood search; forecasts extend the final level by the
 * final trend. Needs at least three observations.
 */
FittedPtr fit_holt(const std::vector<double>& train);

}  // namespace mgrowth::forecast
