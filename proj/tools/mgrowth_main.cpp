#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mgrowth/pipeline/config.hpp"
#include "mgrowth/pipeline/stages.hpp"

namespace {

using mgrowth::pipeline::CompareOptions;
using mgrowth::pipeline::PipelineConfig;

struct Overrides {
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    std::optional<std::string> index_mode;
    std::optional<int> min_revisions;
    std::optional<std::string> repo_root;
    std::optional<double> max_error_pct;
    std::optional<double> alpha;
    std::optional<int> short_steps;
    std::optional<int> horizon_days;
};

void add_common_options(CLI::App* cmd, std::string& config_path, Overrides& ov) {
    cmd->add_option("--config", config_path, "TOML or JSON configuration file");
    cmd->add_option("--out", ov.out_dir, "output directory");
    cmd->add_option("--seed", ov.seed, "global random seed");
    cmd->add_option("--jobs", ov.jobs, "worker threads for fitting");
    cmd->add_option("--index", ov.index_mode, "series index: daily or commits")
        ->check(CLI::IsMember({"daily", "commits"}));
    cmd->add_option("--min-revisions", ov.min_revisions, "minimum revisions per model");
    cmd->add_option("--repo", ov.repo_root, "repository root to mine");
    cmd->add_option("--policy.max_error_pct", ov.max_error_pct,
                    "acceptable mean deviation in percent");
    cmd->add_option("--policy.alpha", ov.alpha, "significance level for the comparison");
    cmd->add_option("--policy.short_steps", ov.short_steps, "short-term horizon in steps");
    cmd->add_option("--policy.horizon_days", ov.horizon_days, "target horizon in days");
}

PipelineConfig resolve_config(const std::string& config_path, const Overrides& ov) {
    PipelineConfig cfg = config_path.empty() ? mgrowth::pipeline::default_config()
                                             : mgrowth::pipeline::load_config(config_path);
    if (ov.out_dir) cfg.out_dir = *ov.out_dir;
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.jobs) cfg.jobs = *ov.jobs;
    if (ov.index_mode) cfg.index_mode = *ov.index_mode;
    if (ov.min_revisions) cfg.min_revisions = *ov.min_revisions;
    if (ov.repo_root) cfg.repo.root_path = *ov.repo_root;
    if (ov.max_error_pct) cfg.policy.max_error_pct = *ov.max_error_pct;
    if (ov.alpha) cfg.policy.alpha = *ov.alpha;
    if (ov.short_steps) cfg.policy.short_steps = *ov.short_steps;
    if (ov.horizon_days) cfg.policy.horizon_days = *ov.horizon_days;
    mgrowth::pipeline::validate(cfg);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mine model repositories, measure size, forecast growth, compare approaches"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides ov;
    CompareOptions compare_options;

    auto* mine = app.add_subcommand("mine", "walk the repository history into a content store");
    auto* measure = app.add_subcommand("measure", "apply the size metrics, write revisions.csv");
    auto* fc = app.add_subcommand("forecast", "fit the approaches and write forecasts.csv");
    auto* evaluate = app.add_subcommand("evaluate", "score forecasts against the test segment");
    auto* compare = app.add_subcommand("compare", "run the Kruskal-Wallis comparisons");
    auto* run = app.add_subcommand("run", "all stages in order");
    auto* print_config = app.add_subcommand("print-config", "print the effective configuration");

    for (auto* cmd : {mine, measure, fc, evaluate, compare, run, print_config})
        add_common_options(cmd, config_path, ov);
    for (auto* cmd : {compare, run}) {
        cmd->add_flag("--pairwise", compare_options.pairwise,
                      "also run two-group tests per approach pair");
        cmd->add_flag("--exact-p", compare_options.exact_permutation,
                      "exact permutation p-values for tiny samples");
    }
    std::string print_format = "toml";
    print_config->add_option("--format", print_format, "toml or json")
        ->check(CLI::IsMember({"toml", "json"}));

    CLI11_PARSE(app, argc, argv);

    try {
        PipelineConfig cfg = resolve_config(config_path, ov);
        if (print_config->parsed()) {
            if (print_format == "json")
                std::cout << mgrowth::pipeline::to_json(cfg).dump(2) << "\n";
            else
                std::cout << mgrowth::pipeline::to_toml(cfg);
            return 0;
        }
        if (run->parsed()) return mgrowth::pipeline::run_pipeline(cfg, compare_options);
        if (mine->parsed()) mgrowth::pipeline::run_mine(cfg);
        if (measure->parsed()) mgrowth::pipeline::run_measure(cfg);
        if (fc->parsed()) mgrowth::pipeline::run_forecast(cfg);
        if (evaluate->parsed()) return mgrowth::pipeline::run_evaluate(cfg) > 0 ? 1 : 0;
        if (compare->parsed()) mgrowth::pipeline::run_compare(cfg, compare_options);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
