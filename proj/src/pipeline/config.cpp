#include "mgrowth/pipeline/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mgrowth/common/hash.hpp"
#include "mgrowth/forecast/forecaster.hpp"
#include "mgrowth/pipeline/toml_lite.hpp"

namespace mgrowth::pipeline {

namespace {

void check_keys(const nlohmann::json& obj, const std::string& table,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end())
            throw std::invalid_argument("unknown config key '" + key + "' in [" + table + "]");
    }
}

std::vector<std::string> string_list(const nlohmann::json& j) {
    std::vector<std::string> out;
    for (const auto& v : j) out.push_back(v.get<std::string>());
    return out;
}

std::vector<double> double_list(const nlohmann::json& j) {
    std::vector<double> out;
    for (const auto& v : j) out.push_back(v.get<double>());
    return out;
}

std::vector<int> int_list(const nlohmann::json& j) {
    std::vector<int> out;
    for (const auto& v : j) out.push_back(v.get<int>());
    return out;
}

std::string toml_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

template <typename T, typename Fmt>
std::string toml_array(const std::vector<T>& values, Fmt fmt) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += fmt(values[i]);
    }
    out += "]";
    return out;
}

std::string fmt_number(double v) { return nlohmann::json(v).dump(); }

}  // namespace

PipelineConfig default_config() { return {}; }

PipelineConfig config_from_json(const nlohmann::json& j) {
    PipelineConfig cfg;
    check_keys(j, "", {"repo", "split", "policy", "run", "forecasters"});

    if (j.contains("repo")) {
        const auto& repo = j.at("repo");
        check_keys(repo, "repo", {"root", "include", "since", "until"});
        if (repo.contains("root")) cfg.repo.root_path = repo.at("root").get<std::string>();
        if (repo.contains("include")) cfg.repo.include_patterns = string_list(repo.at("include"));
        if (repo.contains("since")) cfg.repo.since = Date::parse(repo.at("since").get<std::string>());
        if (repo.contains("until")) cfg.repo.until = Date::parse(repo.at("until").get<std::string>());
    }
    if (j.contains("split")) {
        const auto& split = j.at("split");
        check_keys(split, "split", {"train_end", "validation_end"});
        if (split.contains("train_end"))
            cfg.train_end = Date::parse(split.at("train_end").get<std::string>());
        if (split.contains("validation_end"))
            cfg.validation_end = Date::parse(split.at("validation_end").get<std::string>());
    }
    if (j.contains("policy")) {
        const auto& policy = j.at("policy");
        check_keys(policy, "policy", {"max_error_pct", "horizon_days", "alpha", "short_steps"});
        if (policy.contains("max_error_pct"))
            cfg.policy.max_error_pct = policy.at("max_error_pct").get<double>();
        if (policy.contains("horizon_days"))
            cfg.policy.horizon_days = policy.at("horizon_days").get<int>();
        if (policy.contains("alpha")) cfg.policy.alpha = policy.at("alpha").get<double>();
        if (policy.contains("short_steps"))
            cfg.policy.short_steps = policy.at("short_steps").get<int>();
    }
    if (j.contains("run")) {
        const auto& run = j.at("run");
        check_keys(run, "run",
                   {"approaches", "index", "out", "seed", "jobs", "min_revisions", "runs"});
        if (run.contains("approaches")) cfg.approaches = string_list(run.at("approaches"));
        if (run.contains("index")) cfg.index_mode = run.at("index").get<std::string>();
        if (run.contains("out")) cfg.out_dir = run.at("out").get<std::string>();
        if (run.contains("seed")) cfg.seed = run.at("seed").get<std::uint64_t>();
        if (run.contains("jobs")) cfg.jobs = run.at("jobs").get<int>();
        if (run.contains("min_revisions")) cfg.min_revisions = run.at("min_revisions").get<int>();
        if (run.contains("runs")) cfg.runs = run.at("runs").get<int>();
    }
    if (j.contains("forecasters")) {
        const auto& fc = j.at("forecasters");
        check_keys(fc, "forecasters", {"svr", "ann", "lstm"});
        if (fc.contains("svr")) {
            const auto& svr = fc.at("svr");
            check_keys(svr, "forecasters.svr", {"kernels", "c", "gamma", "epsilon", "lags"});
            if (svr.contains("kernels")) cfg.svr.kernels = string_list(svr.at("kernels"));
            if (svr.contains("c")) cfg.svr.c_values = double_list(svr.at("c"));
            if (svr.contains("gamma")) cfg.svr.gamma_values = double_list(svr.at("gamma"));
            if (svr.contains("epsilon")) cfg.svr.epsilon_values = double_list(svr.at("epsilon"));
            if (svr.contains("lags")) cfg.svr.lags = int_list(svr.at("lags"));
        }
        if (fc.contains("ann")) {
            const auto& ann = fc.at("ann");
            check_keys(ann, "forecasters.ann", {"lags", "hidden", "learning_rate", "epochs"});
            if (ann.contains("lags")) cfg.ann.lags = int_list(ann.at("lags"));
            if (ann.contains("hidden")) cfg.ann.hidden = int_list(ann.at("hidden"));
            if (ann.contains("learning_rate"))
                cfg.ann.learning_rate = ann.at("learning_rate").get<double>();
            if (ann.contains("epochs")) cfg.ann.epochs = ann.at("epochs").get<int>();
        }
        if (fc.contains("lstm")) {
            const auto& lstm = fc.at("lstm");
            check_keys(lstm, "forecasters.lstm",
                       {"lags", "hidden", "epochs", "optimizers", "learning_rate"});
            if (lstm.contains("lags")) cfg.lstm.lags = int_list(lstm.at("lags"));
            if (lstm.contains("hidden")) cfg.lstm.hidden = int_list(lstm.at("hidden"));
            if (lstm.contains("epochs")) cfg.lstm.epochs = int_list(lstm.at("epochs"));
            if (lstm.contains("optimizers")) cfg.lstm.optimizers = string_list(lstm.at("optimizers"));
            if (lstm.contains("learning_rate"))
                cfg.lstm.learning_rate = lstm.at("learning_rate").get<double>();
        }
    }
    validate(cfg);
    return cfg;
}

nlohmann::json to_json(const PipelineConfig& cfg) {
    nlohmann::json repo{{"root", cfg.repo.root_path}, {"include", cfg.repo.include_patterns}};
    if (cfg.repo.since) repo["since"] = cfg.repo.since->to_string();
    if (cfg.repo.until) repo["until"] = cfg.repo.until->to_string();
    return {
        {"repo", repo},
        {"split",
         {{"train_end", cfg.train_end.to_string()},
          {"validation_end", cfg.validation_end.to_string()}}},
        {"policy",
         {{"max_error_pct", cfg.policy.max_error_pct},
          {"horizon_days", cfg.policy.horizon_days},
          {"alpha", cfg.policy.alpha},
          {"short_steps", cfg.policy.short_steps}}},
        {"run",
         {{"approaches", cfg.approaches},
          {"index", cfg.index_mode},
          {"out", cfg.out_dir},
          {"seed", cfg.seed},
          {"jobs", cfg.jobs},
          {"min_revisions", cfg.min_revisions},
          {"runs", cfg.runs}}},
        {"forecasters",
         {{"svr",
           {{"kernels", cfg.svr.kernels},
            {"c", cfg.svr.c_values},
            {"gamma", cfg.svr.gamma_values},
            {"epsilon", cfg.svr.epsilon_values},
            {"lags", cfg.svr.lags}}},
          {"ann",
           {{"lags", cfg.ann.lags},
            {"hidden", cfg.ann.hidden},
            {"learning_rate", cfg.ann.learning_rate},
            {"epochs", cfg.ann.epochs}}},
          {"lstm",
           {{"lags", cfg.lstm.lags},
            {"hidden", cfg.lstm.hidden},
            {"epochs", cfg.lstm.epochs},
            {"optimizers", cfg.lstm.optimizers},
            {"learning_rate", cfg.lstm.learning_rate}}}}},
    };
}

std::string to_toml(const PipelineConfig& cfg) {
    auto str = [](const std::string& s) { return toml_string(s); };
    std::ostringstream out;
    out << "[repo]\n";
    out << "root = " << str(cfg.repo.root_path) << "\n";
    out << "include = " << toml_array(cfg.repo.include_patterns, str) << "\n";
    if (cfg.repo.since) out << "since = " << str(cfg.repo.since->to_string()) << "\n";
    if (cfg.repo.until) out << "until = " << str(cfg.repo.until->to_string()) << "\n";
    out << "\n[split]\n";
    out << "train_end = " << str(cfg.train_end.to_string()) << "\n";
    out << "validation_end = " << str(cfg.validation_end.to_string()) << "\n";
    out << "\n[policy]\n";
    out << "max_error_pct = " << fmt_number(cfg.policy.max_error_pct) << "\n";
    out << "horizon_days = " << cfg.policy.horizon_days << "\n";
    out << "alpha = " << fmt_number(cfg.policy.alpha) << "\n";
    out << "short_steps = " << cfg.policy.short_steps << "\n";
    out << "\n[run]\n";
    out << "approaches = " << toml_array(cfg.approaches, str) << "\n";
    out << "index = " << str(cfg.index_mode) << "\n";
    out << "out = " << str(cfg.out_dir) << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "jobs = " << cfg.jobs << "\n";
    out << "min_revisions = " << cfg.min_revisions << "\n";
    out << "runs = " << cfg.runs << "\n";
    out << "\n[forecasters.svr]\n";
    out << "kernels = " << toml_array(cfg.svr.kernels, str) << "\n";
    out << "c = " << toml_array(cfg.svr.c_values, fmt_number) << "\n";
    out << "gamma = " << toml_array(cfg.svr.gamma_values, fmt_number) << "\n";
    out << "epsilon = " << toml_array(cfg.svr.epsilon_values, fmt_number) << "\n";
    out << "lags = " << toml_array(cfg.svr.lags, [](int v) { return std::to_string(v); }) << "\n";
    out << "\n[forecasters.ann]\n";
    out << "lags = " << toml_array(cfg.ann.lags, [](int v) { return std::to_string(v); }) << "\n";
    out << "hidden = " << toml_array(cfg.ann.hidden, [](int v) { return std::to_string(v); })
        << "\n";
    out << "learning_rate = " << fmt_number(cfg.ann.learning_rate) << "\n";
    out << "epochs = " << cfg.ann.epochs << "\n";
    out << "\n[forecasters.lstm]\n";
    out << "lags = " << toml_array(cfg.lstm.lags, [](int v) { return std::to_string(v); }) << "\n";
    out << "hidden = " << toml_array(cfg.lstm.hidden, [](int v) { return std::to_string(v); })
        << "\n";
    out << "epochs = " << toml_array(cfg.lstm.epochs, [](int v) { return std::to_string(v); })
        << "\n";
    out << "optimizers = " << toml_array(cfg.lstm.optimizers, str) << "\n";
    out << "learning_rate = " << fmt_number(cfg.lstm.learning_rate) << "\n";
    return out.str();
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();

    bool looks_json = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        looks_json = c == '{';
        break;
    }
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") looks_json = true;

    nlohmann::json j = looks_json ? nlohmann::json::parse(text) : parse_toml(text);
    return config_from_json(j);
}

void validate(const PipelineConfig& cfg) {
    if (cfg.approaches.empty())
        throw std::invalid_argument("config needs at least one approach");
    for (const auto& a : cfg.approaches) forecast::approach_from_name(a);
    if (cfg.repo.include_patterns.empty())
        throw std::invalid_argument("config needs at least one include pattern");
    if (cfg.train_end >= cfg.validation_end)
        throw std::invalid_argument("train_end must precede validation_end");
    if (cfg.index_mode != "daily" && cfg.index_mode != "commits")
        throw std::invalid_argument("index mode must be 'daily' or 'commits'");
    if (cfg.policy.max_error_pct <= 0.0)
        throw std::invalid_argument("max_error_pct must be positive");
    if (cfg.policy.alpha <= 0.0 || cfg.policy.alpha >= 1.0)
        throw std::invalid_argument("alpha must lie in (0, 1)");
    if (cfg.policy.short_steps < 1) throw std::invalid_argument("short_steps must be positive");
    if (cfg.policy.horizon_days < 1) throw std::invalid_argument("horizon_days must be positive");
    if (cfg.jobs < 1) throw std::invalid_argument("jobs must be positive");
    if (cfg.runs < 1) throw std::invalid_argument("runs must be positive");
    if (cfg.min_revisions < 1) throw std::invalid_argument("min_revisions must be positive");
    if (cfg.repo.since && cfg.repo.until && *cfg.repo.since > *cfg.repo.until)
        throw std::invalid_argument("repo.since must not exceed repo.until");
    if (cfg.svr.kernels.empty() || cfg.svr.c_values.empty() || cfg.svr.gamma_values.empty() ||
        cfg.svr.epsilon_values.empty() || cfg.svr.lags.empty())
        throw std::invalid_argument("SVR grid lists must be non-empty");
    if (cfg.ann.lags.empty() || cfg.ann.hidden.empty())
        throw std::invalid_argument("ANN grid lists must be non-empty");
    if (cfg.lstm.lags.empty() || cfg.lstm.hidden.empty() || cfg.lstm.epochs.empty() ||
        cfg.lstm.optimizers.empty())
        throw std::invalid_argument("LSTM grid lists must be non-empty");
    for (double v : cfg.svr.c_values)
        if (v <= 0.0) throw std::invalid_argument("SVR C values must be positive");
    for (double v : cfg.svr.gamma_values)
        if (v <= 0.0) throw std::invalid_argument("SVR gamma values must be positive");
    for (double v : cfg.svr.epsilon_values)
        if (v <= 0.0) throw std::invalid_argument("SVR epsilon values must be positive");
    for (int v : cfg.svr.lags)
        if (v < 1) throw std::invalid_argument("SVR lags must be positive");
    for (int v : cfg.ann.lags)
        if (v < 1) throw std::invalid_argument("ANN lags must be positive");
    for (int v : cfg.ann.hidden)
        if (v < 1) throw std::invalid_argument("ANN hidden sizes must be positive");
    for (int v : cfg.lstm.lags)
        if (v < 1) throw std::invalid_argument("LSTM lags must be positive");
    for (int v : cfg.lstm.hidden)
        if (v < 1) throw std::invalid_argument("LSTM hidden sizes must be positive");
    for (int v : cfg.lstm.epochs)
        if (v < 1) throw std::invalid_argument("LSTM epoch counts must be positive");
    if (cfg.ann.epochs < 1) throw std::invalid_argument("ANN epochs must be positive");
    if (cfg.ann.learning_rate <= 0.0 || cfg.lstm.learning_rate <= 0.0)
        throw std::invalid_argument("learning rates must be positive");
}

std::string config_hash(const PipelineConfig& cfg) {
    auto h = fnv1a64(to_json(cfg).dump());
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace mgrowth::pipeline
