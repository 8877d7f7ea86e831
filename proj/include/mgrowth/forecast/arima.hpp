#pragma once

#include <vector>

#include "mgrowth/forecast/forecaster.hpp"

namespace mgrowth::forecast {

struct ArimaOrder {
    int p = 0;  // autoregressive terms
    int d = 0;  // differencing passes
    int q = 0;  // moving-average terms
};

/// Coefficients of a fitted ARIMA(p,d,q) on the differenced scale.
struct ArimaCoefficients {
    std::vector<double> ar;
    std::vector<double> ma;
    double intercept = 0.0;
    double sigma2 = 0.0;
};

/**
 * True when the polynomial 1 - c1*z - c2*z^2 - ... has all roots strictly
 * outside the unit circle with the given margin. Checks AR stationarity
 * directly; for MA invertibility pass the negated coefficients.
 */
bool roots_outside_unit_circle(const std::vector<double>& coeffs, double margin = 1.01);

/**
 * Fits ARIMA(p,d,q) by conditional sum of squares: the series is differenced
 * d times, AR/MA coefficients and the intercept are found with a
 * derivative-free search over a stationarity-preserving parameterization,
 * and candidates whose fitted polynomials come too close to the unit circle
 * are rejected ("unstable fit"). Forecasts iterate the recursion with future
 * shocks at zero, then integrate the differencing back out.
 */
FittedPtr fit_arima(const std::vector<double>& train, ArimaOrder order,
                    bool with_intercept = true);

struct AutoArimaOptions {
    int max_p = 5;
    int max_d = 2;
    int max_q = 5;
};

/**
 * Exhaustive order search: every (p,d,q) in the grid is fitted and scored
 * with AIC = n*ln(SSE/n) + 2k, k = p+q+1, n the training length (shared by
 * every candidate so differences are scale-free). Ties prefer smaller p+q,
 * then smaller d. Unstable candidates are skipped; if nothing survives the
 * search falls back to a plain random walk, ARIMA(0,1,0), flagged in the
 * summary. Needs at least ten observations.
 */
FittedPtr auto_arima(const std::vector<double>& train, const AutoArimaOptions& options = {});

}  // namespace mgrowth::forecast
