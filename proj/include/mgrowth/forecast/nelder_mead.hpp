#pragma once

#include <functional>
#include <vector>

namespace mgrowth::forecast {

struct NelderMeadOptions {
    int max_evaluations = 4000;
    double f_tolerance = 1e-12;  // relative spread of simplex values
    double x_tolerance = 1e-9;   // simplex diameter
};

struct NelderMeadResult {
    std::vector<double> x;
    double fx = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/**
 * Derivative-free simplex minimization (reflection 1, expansion 2,
 * contraction 0.5, shrink 0.5) with one restart from the incumbent to
 * polish. Deterministic for identical inputs.
 */
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, double initial_step,
                             const NelderMeadOptions& options = {});

}  // namespace mgrowth::forecast
