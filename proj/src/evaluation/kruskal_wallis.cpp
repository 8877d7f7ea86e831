#include "mgrowth/evaluation/kruskal_wallis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "mgrowth/evaluation/chi_square.hpp"

namespace mgrowth::eval {

namespace {

// H before tie correction, from per-group rank sums.
double h_statistic(const std::vector<double>& rank_sums, const std::vector<std::size_t>& sizes,
                   std::size_t total) {
    double n = static_cast<double>(total);
    double sum = 0.0;
    for (std::size_t g = 0; g < rank_sums.size(); ++g)
        sum += rank_sums[g] * rank_sums[g] / static_cast<double>(sizes[g]);
    double h = 12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0);
    return std::max(h, 0.0);
}

double tie_correction_factor(const std::vector<double>& pooled) {
    std::map<double, std::size_t> counts;
    for (double v : pooled) ++counts[v];
    double n = static_cast<double>(pooled.size());
    double tie_sum = 0.0;
    for (const auto& [value, t] : counts) {
        auto td = static_cast<double>(t);
        tie_sum += td * td * td - td;
    }
    return 1.0 - tie_sum / (n * n * n - n);
}

void validate_groups(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) throw std::invalid_argument("Kruskal-Wallis needs at least two groups");
    std::size_t total = 0;
    for (const auto& g : groups) {
        if (g.empty()) throw std::invalid_argument("Kruskal-Wallis group must be non-empty");
        total += g.size();
    }
    if (total < 3) throw std::invalid_argument("Kruskal-Wallis needs at least three observations");
}

}  // namespace

std::vector<double> midranks(const std::vector<double>& pooled) {
    std::size_t n = pooled.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
        double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

KWTestResult kruskal_wallis(const std::vector<std::vector<double>>& groups,
                            const std::vector<std::string>& labels) {
    validate_groups(groups);

    std::vector<double> pooled;
    std::vector<std::size_t> group_of;
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (double v : groups[g]) {
            pooled.push_back(v);
            group_of.push_back(g);
        }

    auto ranks = midranks(pooled);
    std::vector<double> rank_sums(groups.size(), 0.0);
    std::vector<std::size_t> sizes(groups.size(), 0);
    for (std::size_t i = 0; i < pooled.size(); ++i) {
        rank_sums[group_of[i]] += ranks[i];
        ++sizes[group_of[i]];
    }

    KWTestResult result;
    result.df = static_cast<int>(groups.size()) - 1;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        KWGroup kg;
        kg.label = g < labels.size() ? labels[g] : "group" + std::to_string(g + 1);
        kg.n = sizes[g];
        kg.rank_sum = rank_sums[g];
        kg.mean_rank = rank_sums[g] / static_cast<double>(sizes[g]);
        result.groups.push_back(std::move(kg));
    }

    result.tie_correction = tie_correction_factor(pooled);
    if (result.tie_correction <= 0.0) {
        // Every pooled observation identical: no evidence of any difference.
        result.tie_correction = 0.0;
        result.h = 0.0;
        result.p_value = 1.0;
        return result;
    }
    result.h = h_statistic(rank_sums, sizes, pooled.size()) / result.tie_correction;
    result.p_value = chi_square_upper_tail(result.h, result.df);
    return result;
}

double kruskal_wallis_permutation_p(const std::vector<std::vector<double>>& groups) {
    validate_groups(groups);

    std::vector<double> pooled;
    std::vector<std::size_t> sizes;
    std::vector<int> assignment;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        sizes.push_back(groups[g].size());
        for (double v : groups[g]) {
            pooled.push_back(v);
            assignment.push_back(static_cast<int>(g));
        }
    }
    std::size_t n = pooled.size();
    if (n > 12) throw std::invalid_argument("permutation p-value limited to N <= 12");

    auto ranks = midranks(pooled);
    double correction = tie_correction_factor(pooled);
    if (correction <= 0.0) return 1.0;  // all identical: every permutation ties

    auto h_of = [&](const std::vector<int>& assign) {
        std::vector<double> rank_sums(sizes.size(), 0.0);
        for (std::size_t i = 0; i < n; ++i) rank_sums[static_cast<std::size_t>(assign[i])] += ranks[i];
        return h_statistic(rank_sums, sizes, n) / correction;
    };

    double h_observed = h_of(assignment);

    // std::next_permutation over the sorted label vector walks every
    // distinct assignment of observations to groups exactly once.
    std::vector<int> labels = assignment;
    std::sort(labels.begin(), labels.end());
    std::size_t total = 0;
    std::size_t at_least = 0;
    do {
        ++total;
        if (h_of(labels) >= h_observed - 1e-12) ++at_least;
    } while (std::next_permutation(labels.begin(), labels.end()));

    return static_cast<double>(at_least) / static_cast<double>(total);
}

}  // namespace mgrowth::eval
