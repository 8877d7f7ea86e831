#include <cmath>

#include "doctest.h"
#include "mgrowth/common/rng.hpp"
#include "mgrowth/forecast/svr.hpp"
#include "mgrowth/timeseries/transforms.hpp"
#include "support/synthetic.hpp"

using namespace mgrowth;
using namespace mgrowth::forecast;

namespace {

double dual_predict(const SvrDualSolution& sol, const SvrParams& params,
                    const std::vector<std::vector<double>>& rows,
                    const std::vector<double>& x) {
    double f = sol.bias;
    for (std::size_t k = 0; k < rows.size(); ++k)
        f += sol.beta[k] * kernel_eval(params, rows[k], x);
    return f;
}

}  // namespace

TEST_CASE("constant series predicts the constant within epsilon") {
    std::vector<double> train(30, 42.0);
    std::vector<double> validation(5, 42.0);
    SvrGrid grid;
    grid.lags = {3};
    auto model = fit_svr(train, validation, grid);
    for (double v : model->forecast(6)) CHECK(std::fabs(v - 42.0) <= 0.05);
}

TEST_CASE("linear kernel reproduces a noiseless line one step ahead") {
    auto raw = synthetic::line(5.0, 1.0, 40);
    auto normalized = ts::normalize(raw);
    auto data = ts::make_lagged(normalized.values, 3);

    SvrParams params{"linear", 100.0, 0.1, 1e-4, 3};
    auto sol = solve_svr_dual(data.windows, data.targets, params);
    CHECK(sol.converged);
    for (std::size_t r = 0; r < data.windows.size(); ++r) {
        double pred = ts::denormalize_one(dual_predict(sol, params, data.windows, data.windows[r]),
                                          normalized.params);
        double truth = ts::denormalize_one(data.targets[r], normalized.params);
        CHECK(std::fabs(pred - truth) / truth < 0.02);
    }
}

TEST_CASE("dual solution satisfies the KKT conditions") {
    Rng rng(71);
    std::vector<std::vector<double>> rows;
    std::vector<double> targets;
    for (int r = 0; r < 6; ++r) {
        std::vector<double> row;
        for (int i = 0; i < 3; ++i) row.push_back(rng.uniform(0.0, 1.0));
        rows.push_back(row);
        targets.push_back(rng.uniform(0.0, 1.0));
    }
    SvrParams params{"rbf", 10.0, 0.5, 0.01, 3};
    auto sol = solve_svr_dual(rows, targets, params, 1e-3);
    REQUIRE(sol.converged);

    const double tol = 1e-3;
    double balance = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(sol.alpha_up[i] >= -1e-12);
        CHECK(sol.alpha_up[i] <= params.c + 1e-12);
        CHECK(sol.alpha_down[i] >= -1e-12);
        CHECK(sol.alpha_down[i] <= params.c + 1e-12);
        balance += sol.alpha_up[i] - sol.alpha_down[i];

        double f = dual_predict(sol, params, rows, rows[i]);
        double upper_violation = targets[i] - f - params.epsilon;  // > 0 wants alpha_up at C
        double lower_violation = f - targets[i] - params.epsilon;

        // Complementary slackness: a strictly interior multiplier pins the
        // point onto its epsilon boundary; an inactive constraint keeps the
        // multiplier at zero.
        if (sol.alpha_up[i] > tol && sol.alpha_up[i] < params.c - tol)
            CHECK(std::fabs(upper_violation) < tol);
        if (sol.alpha_up[i] < tol) CHECK(upper_violation < tol);
        if (sol.alpha_down[i] > tol && sol.alpha_down[i] < params.c - tol)
            CHECK(std::fabs(lower_violation) < tol);
        if (sol.alpha_down[i] < tol) CHECK(lower_violation < tol);
    }
    CHECK(std::fabs(balance) < 1e-9);
}

TEST_CASE("degenerate grids are rejected") {
    std::vector<double> train{1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<double> validation{9, 10};
    SvrGrid grid;
    grid.lags = {50};  // no lag fits the training length
    CHECK_THROWS_AS(fit_svr(train, validation, grid), std::runtime_error);
    SvrGrid empty;
    empty.c_values = {};
    CHECK_THROWS_AS(fit_svr(train, validation, empty), std::invalid_argument);
}

TEST_CASE("grid selection prefers candidates that track the validation segment") {
    Rng rng(72);
    auto train = synthetic::random_walk_with_drift(rng, 80, 2.0, 0.5);
    std::vector<double> validation;
    double last = train.back();
    for (int i = 0; i < 10; ++i) validation.push_back(last += 2.0);
    SvrGrid grid;
    grid.kernels = {"rbf", "linear"};
    grid.lags = {3, 5};
    grid.c_values = {1.0, 100.0};
    grid.gamma_values = {0.1};
    grid.epsilon_values = {0.001};
    auto model = fit_svr(train, validation, grid);
    auto chosen = model->summary();
    // The drift continues; the linear kernel extrapolates and must win.
    CHECK(chosen.at("kernel").get<std::string>() == "linear");
}
