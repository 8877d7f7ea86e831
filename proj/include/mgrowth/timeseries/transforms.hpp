#pragma once

#include <cstdint>
#include <vector>

namespace mgrowth::ts {

/// d-fold first differences plus the initial values needed to invert exactly.
struct Differenced {
    int order = 0;
    std::vector<double> initial_values;  // one value dropped per differencing pass
    std::vector<double> values;
};

/**
 * Applies first differencing `order` times (order 0, 1 or 2). The result
 * carries enough state for invert_difference to reconstruct the input.
 */
Differenced difference(const std::vector<double>& values, int order);

/// Exact inverse of difference(). Also extends: forecasts appended to
/// d.values before calling are integrated the same way.
std::vector<double> invert_difference(const Differenced& d);

struct NormalizationParams {
    double min = 0.0;
    double max = 0.0;
};

struct Normalized {
    std::vector<double> values;  // in [0, 1]; all zeros for a constant input
    NormalizationParams params;
};

/// Min-max scaling to [0, 1]. A constant series maps to all zeros with
/// max == min recorded so denormalize still restores it.
Normalized normalize(const std::vector<double>& values);

std::vector<double> denormalize(const std::vector<double>& scaled, NormalizationParams params);
double denormalize_one(double scaled, NormalizationParams params);
double normalize_one(double raw, NormalizationParams params);

/// Sliding windows of `lag` consecutive values, each paired with the value
/// that immediately follows. Row count is values.size() - lag.
struct LaggedDataset {
    int lag = 0;
    std::vector<std::vector<double>> windows;
    std::vector<double> targets;
};

LaggedDataset make_lagged(const std::vector<double>& values, int lag);

}  // namespace mgrowth::ts
