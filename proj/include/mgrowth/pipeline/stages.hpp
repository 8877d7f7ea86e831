#pragma once

#include <stdexcept>
#include <string>

#include "mgrowth/pipeline/config.hpp"

namespace mgrowth::pipeline {

inline constexpr const char* kToolVersion = "0.1.0";

/// Unrecoverable pipeline failure; maps to exit code 2.
class FatalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CompareOptions {
    bool pairwise = false;           // also emit two-group tests
    bool exact_permutation = false;  // add exact p-values for tiny samples
};

/**
 * Pipeline stages. Each one reads the previous stage's files from the
 * configured output directory, writes its own, and updates manifest.json.
 * A missing upstream file raises FatalError naming the expected path.
 *
 *   mine      repository walk -> contents/ store + mined_index.csv
 *   measure   size metrics    -> revisions.csv
 *   forecast  fit + predict   -> forecasts.csv, fitted_models.json, daily/
 *   evaluate  scoring         -> evaluation.csv, plot_rmse.csv
 *   compare   statistics      -> comparison.json
 */
void run_mine(const PipelineConfig& config);
void run_measure(const PipelineConfig& config);
void run_forecast(const PipelineConfig& config);

/// Returns the number of threshold violations found.
int run_evaluate(const PipelineConfig& config);

void run_compare(const PipelineConfig& config, const CompareOptions& options = {});

/**
 * All five stages in order. Returns the process exit code: 0 clean,
 * 1 when evaluation flagged threshold violations, 2 on fatal errors
 * (partial outputs are left in place and the manifest marks the failed
 * stage).
 */
int run_pipeline(const PipelineConfig& config, const CompareOptions& options = {});

}  // namespace mgrowth::pipeline
