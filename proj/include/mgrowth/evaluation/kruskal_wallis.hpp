#pragma once

#include <string>
#include <vector>

namespace mgrowth::eval {

struct KWGroup {
    std::string label;
    std::size_t n = 0;
    double rank_sum = 0.0;
    double mean_rank = 0.0;
};

struct KWTestResult {
    std::vector<KWGroup> groups;
    double h = 0.0;               // tie-corrected statistic
    double tie_correction = 1.0;  // 1 - sum(t^3 - t) / (N^3 - N)
    int df = 0;
    double p_value = 1.0;
};

/**
 * Kruskal-Wallis rank test over k independent samples.
 *
 * Ties receive midranks; H is divided by the tie correction factor and the
 * p-value comes from the chi-square approximation with k-1 degrees of
 * freedom. A pooled sample where every observation is identical yields
 * H = 0, p = 1 by convention.
 */
KWTestResult kruskal_wallis(const std::vector<std::vector<double>>& groups,
                            const std::vector<std::string>& labels = {});

/**
 * Exact permutation p-value: the share of all distinct assignments of the
 * pooled observations to groups of the observed sizes whose H reaches the
 * observed one. Intended as an oracle for small samples; refuses N > 12.
 */
double kruskal_wallis_permutation_p(const std::vector<std::vector<double>>& groups);

/// Midranks of a sample (average rank for ties), 1-based.
std::vector<double> midranks(const std::vector<double>& pooled);

}  // namespace mgrowth::eval
