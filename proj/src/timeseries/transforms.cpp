#include "mgrowth/timeseries/transforms.hpp"

#include <algorithm>
#include <stdexcept>

namespace mgrowth::ts {

Differenced difference(const std::vector<double>& values, int order) {
    if (order < 0 || order > 2) throw std::invalid_argument("differencing order must be 0, 1 or 2");
    if (static_cast<int>(values.size()) <= order)
        throw std::invalid_argument("series too short to difference");

    Differenced out;
    out.order = order;
    out.values = values;
    for (int pass = 0; pass < order; ++pass) {
        out.initial_values.push_back(out.values.front());
        for (std::size_t i = 0; i + 1 < out.values.size(); ++i)
            out.values[i] = out.values[i + 1] - out.values[i];
        out.values.pop_back();
    }
    return out;
}

std::vector<double> invert_difference(const Differenced& d) {
    std::vector<double> values = d.values;
    for (int pass = d.order - 1; pass >= 0; --pass) {
        double acc = d.initial_values[static_cast<std::size_t>(pass)];
        std::vector<double> restored;
        restored.reserve(values.size() + 1);
        restored.push_back(acc);
        for (double delta : values) {
            acc += delta;
            restored.push_back(acc);
        }
        values = std::move(restored);
    }
    return values;
}

Normalized normalize(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("cannot normalize an empty series");
    auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    Normalized out;
    out.params = {*mn, *mx};
    out.values.reserve(values.size());
    for (double v : values) out.values.push_back(normalize_one(v, out.params));
    return out;
}

double normalize_one(double raw, NormalizationParams p) {
    if (p.max == p.min) return 0.0;
    return (raw - p.min) / (p.max - p.min);
}

double denormalize_one(double scaled, NormalizationParams p) {
    return scaled * (p.max - p.min) + p.min;
}

std::vector<double> denormalize(const std::vector<double>& scaled, NormalizationParams p) {
    std::vector<double> out;
    out.reserve(scaled.size());
    for (double v : scaled) out.push_back(denormalize_one(v, p));
    return out;
}

LaggedDataset make_lagged(const std::vector<double>& values, int lag) {
    if (lag < 1) throw std::invalid_argument("lag must be positive");
    if (values.size() <= static_cast<std::size_t>(lag))
        throw std::invalid_argument("series too short for lag " + std::to_string(lag));

    LaggedDataset out;
    out.lag = lag;
    std::size_t rows = values.size() - static_cast<std::size_t>(lag);
    out.windows.reserve(rows);
    out.targets.reserve(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        out.windows.emplace_back(values.begin() + i, values.begin() + i + lag);
        out.targets.push_back(values[i + static_cast<std::size_t>(lag)]);
    }
    return out;
}

}  // namespace mgrowth::ts
