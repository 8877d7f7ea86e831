#include "mgrowth/forecast/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mgrowth::forecast {

namespace {

struct Simplex {
    std::vector<std::vector<double>> points;
    std::vector<double> values;

    void sort() {
        std::vector<std::size_t> order(points.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        std::vector<std::vector<double>> p;
        std::vector<double> v;
        for (auto i : order) {
            p.push_back(std::move(points[i]));
            v.push_back(values[i]);
        }
        points = std::move(p);
        values = std::move(v);
    }

    double diameter() const {
        double d = 0.0;
        for (std::size_t i = 1; i < points.size(); ++i)
            for (std::size_t k = 0; k < points[0].size(); ++k)
                d = std::max(d, std::fabs(points[i][k] - points[0][k]));
        return d;
    }
};

NelderMeadResult minimize_once(const std::function<double(const std::vector<double>&)>& f,
                               const std::vector<double>& start, double step,
                               const NelderMeadOptions& opt, int& evals) {
    std::size_t dim = start.size();
    Simplex s;
    s.points.push_back(start);
    s.values.push_back(f(start));
    ++evals;
    for (std::size_t i = 0; i < dim; ++i) {
        auto p = start;
        p[i] += step;
        s.points.push_back(p);
        s.values.push_back(f(p));
        ++evals;
    }

    auto centroid_except_worst = [&]() {
        std::vector<double> c(dim, 0.0);
        for (std::size_t i = 0; i + 1 < s.points.size(); ++i)
            for (std::size_t k = 0; k < dim; ++k) c[k] += s.points[i][k];
        for (auto& v : c) v /= static_cast<double>(dim);
        return c;
    };
    auto blend = [&](const std::vector<double>& c, const std::vector<double>& p, double coef) {
        std::vector<double> out(dim);
        for (std::size_t k = 0; k < dim; ++k) out[k] = c[k] + coef * (p[k] - c[k]);
        return out;
    };

    NelderMeadResult result;
    while (evals < opt.max_evaluations) {
        s.sort();
        double spread = std::fabs(s.values.back() - s.values.front());
        double scale = std::max(1.0, std::fabs(s.values.front()));
        if (spread <= opt.f_tolerance * scale && s.diameter() <= opt.x_tolerance) {
            result.converged = true;
            break;
        }

        auto c = centroid_except_worst();
        const auto& worst = s.points.back();
        auto reflected = blend(c, worst, -1.0);
        double fr = f(reflected);
        ++evals;
        if (fr < s.values.front()) {
            auto expanded = blend(c, worst, -2.0);
            double fe = f(expanded);
            ++evals;
            if (fe < fr) {
                s.points.back() = std::move(expanded);
                s.values.back() = fe;
            } else {
                s.points.back() = std::move(reflected);
                s.values.back() = fr;
            }
            continue;
        }
        if (fr < s.values[s.values.size() - 2]) {
            s.points.back() = std::move(reflected);
            s.values.back() = fr;
            continue;
        }
        auto contracted = blend(c, worst, 0.5);
        double fc = f(contracted);
        ++evals;
        if (fc < s.values.back()) {
            s.points.back() = std::move(contracted);
            s.values.back() = fc;
            continue;
        }
        // Shrink toward the best point.
        for (std::size_t i = 1; i < s.points.size(); ++i) {
            for (std::size_t k = 0; k < dim; ++k)
                s.points[i][k] = s.points[0][k] + 0.5 * (s.points[i][k] - s.points[0][k]);
            s.values[i] = f(s.points[i]);
            ++evals;
        }
    }

    s.sort();
    result.x = s.points.front();
    result.fx = s.values.front();
    result.evaluations = evals;
    return result;
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, double initial_step,
                             const NelderMeadOptions& options) {
    if (start.empty()) {
        NelderMeadResult r;
        r.fx = f(start);
        r.evaluations = 1;
        r.converged = true;
        return r;
    }
    int evals = 0;
    auto first = minimize_once(f, start, initial_step, options, evals);
    auto second = minimize_once(f, first.x, initial_step * 0.1, options, evals);
    auto& best = second.fx <= first.fx ? second : first;
    best.evaluations = evals;
    best.converged = first.converged || second.converged;
    return best;
}

}  // namespace mgrowth::forecast
