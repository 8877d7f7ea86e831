#pragma once

#include <span>
#include <string>
#include <vector>

#include "mgrowth/forecast/forecaster.hpp"
#include "mgrowth/timeseries/transforms.hpp"

namespace mgrowth::forecast {

struct SvrParams {
    std::string kernel = "rbf";  // "rbf" or "linear"
    double c = 1.0;
    double gamma = 0.1;
    double epsilon = 0.01;
    int lag = 5;
};

struct SvrGrid {
    std::vector<std::string> kernels{"rbf"};
    std::vector<double> c_values{0.1, 1.0, 10.0, 100.0};
    std::vector<double> gamma_values{0.01, 0.1, 1.0};
    std::vector<double> epsilon_values{0.001, 0.01};
    std::vector<int> lags{3, 5, 10};
};

double kernel_eval(const SvrParams& params, std::span<const double> a, std::span<const double> b);

/**
 * Solution of the epsilon-insensitive SVR dual, found by sequential minimal
 * optimization on the 2n-variable box problem (maximal violating pair
 * selection, analytic two-variable updates) down to KKT violation `tol`.
 */
struct SvrDualSolution {
    std::vector<double> alpha_up;    // multipliers of the +epsilon constraints
    std::vector<double> alpha_down;  // multipliers of the -epsilon constraints
    std::vector<double> beta;        // alpha_up - alpha_down
    double bias = 0.0;
    int iterations = 0;
    bool converged = false;
};

SvrDualSolution solve_svr_dual(const std::vector<std::vector<double>>& rows,
                               const std::vector<double>& targets, const SvrParams& params,
                               double tol = 1e-3, int max_iterations = 200000);

/**
 * Grid-searched SVR forecaster. Lagged windows are built on the min-max
 * normalized training segment; each grid point is solved on the training
 * rows and scored by the RMSE of its recursive forecasts over the
 * validation segment (original scale); the winner is kept. Forecasts
 * continue past the validation segment by feeding predictions back into
 * the lag window.
 */
FittedPtr fit_svr(const std::vector<double>& train, const std::vector<double>& validation,
                  const SvrGrid& grid);

}  // namespace mgrowth::forecast
