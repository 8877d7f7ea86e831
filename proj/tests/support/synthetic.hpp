#pragma once

// Seeded data generators shared by the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mgrowth/common/rng.hpp"
#include "mgrowth/metrics/model_doc.hpp"

namespace synthetic {

inline std::vector<double> line(double intercept, double slope, int n) {
    std::vector<double> out;
    for (int t = 1; t <= n; ++t) out.push_back(intercept + slope * t);
    return out;
}

inline std::vector<double> white_noise(mgrowth::Rng& rng, int n, double sigma = 1.0) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(rng.normal(0.0, sigma));
    return out;
}

inline std::vector<double> ar1(mgrowth::Rng& rng, int n, double phi, double sigma = 1.0) {
    std::vector<double> out;
    double prev = rng.normal(0.0, sigma / std::sqrt(1.0 - phi * phi));
    for (int i = 0; i < n; ++i) {
        prev = phi * prev + rng.normal(0.0, sigma);
        out.push_back(prev);
    }
    return out;
}

inline std::vector<double> trend_plus_noise(mgrowth::Rng& rng, int n, double slope,
                                            double sigma) {
    std::vector<double> out;
    for (int t = 1; t <= n; ++t) out.push_back(slope * t + rng.normal(0.0, sigma));
    return out;
}

inline std::vector<double> random_walk_with_drift(mgrowth::Rng& rng, int n, double drift,
                                                  double sigma, double start = 100.0) {
    std::vector<double> out;
    double value = start;
    for (int i = 0; i < n; ++i) {
        value += drift + rng.normal(0.0, sigma);
        out.push_back(value);
    }
    return out;
}

// Commit schedule over `span_days` days starting at `start_day` (days since
// epoch): commits at random seconds, values following an upward step path.
inline std::vector<std::pair<std::int64_t, double>> commit_schedule(mgrowth::Rng& rng,
                                                                    int span_days,
                                                                    std::int64_t start_day,
                                                                    int commits) {
    std::vector<std::int64_t> seconds;
    for (int i = 0; i < commits; ++i) {
        std::int64_t day = start_day + static_cast<std::int64_t>(rng.below(
                                           static_cast<std::uint64_t>(span_days)));
        seconds.push_back(day * 86400 + static_cast<std::int64_t>(rng.below(86400)));
    }
    std::sort(seconds.begin(), seconds.end());
    std::vector<std::pair<std::int64_t, double>> out;
    double value = 100.0 + rng.uniform(0.0, 50.0);
    for (auto s : seconds) {
        value += rng.uniform(0.0, 10.0);
        out.emplace_back(s, value);
    }
    return out;
}

// Random section tree with a known number of Block nodes.
inline mgrowth::metrics::Section random_section(mgrowth::Rng& rng, int depth, int& blocks_left,
                                                int& counter) {
    mgrowth::metrics::Section s;
    bool is_block = blocks_left > 0 && rng.uniform() < 0.4;
    if (is_block) {
        s.name = "Block";
        --blocks_left;
    } else {
        const char* names[] = {"System", "Model", "Port", "Line", "Annotation"};
        s.name = names[rng.below(5)];
    }
    int attrs = static_cast<int>(rng.below(3));
    for (int a = 0; a < attrs; ++a)
        s.attributes.push_back("attr" + std::to_string(counter++) + " \"v" +
                               std::to_string(rng.below(100)) + "\"");
    if (depth < 4) {
        int children = static_cast<int>(rng.below(3));
        for (int c = 0; c < children; ++c)
            s.children.push_back(random_section(rng, depth + 1, blocks_left, counter));
    }
    return s;
}

inline mgrowth::metrics::ModelDocument random_document(mgrowth::Rng& rng, int target_blocks,
                                                       int& placed) {
    mgrowth::metrics::ModelDocument doc;
    int blocks_left = target_blocks;
    int counter = 0;
    while (blocks_left > 0 || doc.roots.empty()) {
        doc.roots.push_back(random_section(rng, 0, blocks_left, counter));
        if (doc.roots.size() > 50) break;
    }
    placed = target_blocks - blocks_left;
    return doc;
}

}  // namespace synthetic
