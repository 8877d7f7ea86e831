#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "mgrowth/common/dates.hpp"
#include "mgrowth/evaluation/scores.hpp"
#include "mgrowth/forecast/ann.hpp"
#include "mgrowth/forecast/lstm.hpp"
#include "mgrowth/forecast/svr.hpp"
#include "mgrowth/mining/repo.hpp"

namespace mgrowth::pipeline {

/**
 * Everything a pipeline run depends on. Loadable from TOML or JSON (the two
 * carry the same tree), overridable by CLI flags, and hashable so reruns are
 * auditable.
 */
struct PipelineConfig {
    mining::RepoSource repo{"", {"**/*.mdl"}, {}, {}};
    Date train_end = Date::from_ymd(2015, 12, 31);       // end of the learning period
    Date validation_end = Date::from_ymd(2016, 3, 31);   // end of the validation period
    eval::ThresholdPolicy policy;
    std::vector<std::string> approaches{"HOLT", "ARIMA", "SVR", "ANN", "LSTM"};
    forecast::SvrGrid svr;
    forecast::AnnGrid ann;
    forecast::LstmGrid lstm;
    int runs = 5;  // averaged runs for ANN and LSTM
    std::string index_mode = "daily";  // "daily" or "commits"
    std::string out_dir = "out";
    std::uint64_t seed = 42;
    int jobs = 1;
    int min_revisions = 20;
};

PipelineConfig default_config();

/// Reads a .toml or .json config file; content decides when the extension is ambiguous.
PipelineConfig load_config(const std::string& path);

PipelineConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PipelineConfig& config);
std::string to_toml(const PipelineConfig& config);

/// Throws std::invalid_argument when a field is out of range.
void validate(const PipelineConfig& config);

/// FNV-1a over the canonical JSON dump, as a fixed-width hex string.
std::string config_hash(const PipelineConfig& config);

}  // namespace mgrowth::pipeline
