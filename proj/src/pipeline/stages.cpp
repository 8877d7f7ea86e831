#include "mgrowth/pipeline/stages.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include "mgrowth/common/csv.hpp"
#include "mgrowth/common/hash.hpp"
#include "mgrowth/evaluation/compare.hpp"
#include "mgrowth/forecast/arima.hpp"
#include "mgrowth/forecast/holt.hpp"
#include "mgrowth/mining/measure.hpp"
#include "mgrowth/timeseries/daily.hpp"

namespace fs = std::filesystem;

namespace mgrowth::pipeline {

namespace {

using nlohmann::json;

fs::path out_path(const PipelineConfig& cfg, const std::string& name) {
    return fs::path(cfg.out_dir) / name;
}

json load_manifest(const PipelineConfig& cfg) {
    json manifest;
    std::ifstream in(out_path(cfg, "manifest.json"));
    if (in) {
        try {
            in >> manifest;
        } catch (const std::exception&) {
            manifest = json();
        }
    }
    if (!manifest.is_object()) manifest = json::object();
    if (!manifest.contains("stages")) manifest["stages"] = json::object();
    if (!manifest.contains("exclusions")) manifest["exclusions"] = json::array();
    if (!manifest.contains("counts")) manifest["counts"] = json::object();
    manifest["tool_version"] = kToolVersion;
    manifest["config_hash"] = config_hash(cfg);
    return manifest;
}

void save_manifest(const PipelineConfig& cfg, const json& manifest) {
    std::ofstream out(out_path(cfg, "manifest.json"), std::ios::binary);
    out << manifest.dump(2) << '\n';
}

void add_exclusion(json& manifest, json entry) {
    for (const auto& existing : manifest["exclusions"])
        if (existing == entry) return;
    manifest["exclusions"].push_back(std::move(entry));
}

template <typename Body>
void with_stage(const PipelineConfig& cfg, const std::string& name, Body&& body) {
    validate(cfg);
    fs::create_directories(cfg.out_dir);
    json manifest = load_manifest(cfg);
    auto started = std::chrono::steady_clock::now();
    auto elapsed_ms = [&] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         started)
            .count();
    };
    try {
        body(manifest);
        manifest["stages"][name] = {{"status", "ok"}, {"ms", elapsed_ms()}};
        save_manifest(cfg, manifest);
    } catch (const std::exception& e) {
        manifest["stages"][name] = {{"status", "failed"}, {"error", e.what()}, {"ms", elapsed_ms()}};
        save_manifest(cfg, manifest);
        throw;
    }
}

std::string sanitize_component(const std::string& id) {
    std::string out;
    for (char c : id) {
        bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_';
        out += keep ? c : '_';
    }
    return out.empty() ? "_" : out;
}

// Unique on-disk names for model ids (distinct ids may sanitize identically).
std::map<std::string, std::string> disk_names(const std::vector<std::string>& model_ids) {
    std::map<std::string, std::string> names;
    std::map<std::string, int> used;
    for (const auto& id : model_ids) {
        std::string base = sanitize_component(id);
        int n = ++used[base];
        names[id] = n == 1 ? base : base + "_" + std::to_string(n);
    }
    return names;
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FatalError("cannot read file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void require_file(const fs::path& path, const std::string& producer) {
    if (!fs::exists(path))
        throw FatalError(path.filename().string() + " not found (expected at " + path.string() +
                         "); run the " + producer + " stage first");
}

void parallel_for(int jobs, std::size_t count, const std::function<void(std::size_t)>& body) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    };
    std::vector<std::thread> pool;
    auto n_threads = std::min(static_cast<std::size_t>(jobs), count);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

// ---- shared series preparation (forecast + evaluate see the same view) ----

struct PreparedSeries {
    std::string model_id;
    std::string metric;  // "LOC" or "BC"
    std::vector<double> train, validation, test;
    ts::DailySeries daily;  // daily index mode only
    bool has_daily = false;
    std::int64_t revisions_train = 0, revisions_validation = 0, revisions_test = 0;
};

struct SeriesPrep {
    std::vector<PreparedSeries> series;
    std::vector<json> exclusions;
    json counts = json::object();
};

SeriesPrep prepare_series(const PipelineConfig& cfg,
                          const std::vector<mining::RevisionRecord>& records) {
    std::map<std::string, std::vector<mining::RevisionRecord>> by_model;
    for (const auto& r : records) by_model[r.model_id].push_back(r);

    SeriesPrep prep;
    std::vector<std::int64_t> per_model_revisions;
    std::int64_t seg_train = 0, seg_val = 0, seg_test = 0;

    for (const auto& [model_id, model_records] : by_model) {
        bool model_used = false;
        for (const std::string metric : {"LOC", "BC"}) {
            bool bc = metric == "BC";
            std::vector<ts::UnevenSeries::Point> points;
            for (const auto& r : model_records) {
                if (bc && r.block_parse_failed) continue;
                points.push_back({r.timestamp,
                                  static_cast<double>(bc ? r.block_count : r.loc)});
            }
            if (points.size() < static_cast<std::size_t>(cfg.min_revisions)) {
                prep.exclusions.push_back({{"model_id", model_id},
                                           {"metric", metric},
                                           {"stage", "forecast"},
                                           {"reason", "only " + std::to_string(points.size()) +
                                                          " usable revisions, below minimum " +
                                                          std::to_string(cfg.min_revisions)}});
                continue;
            }

            PreparedSeries s;
            s.model_id = model_id;
            s.metric = metric;
            for (const auto& p : points) {
                Date day = Date::from_timestamp(p.timestamp);
                if (day <= cfg.train_end) ++s.revisions_train;
                else if (day <= cfg.validation_end) ++s.revisions_validation;
                else ++s.revisions_test;
            }

            try {
                if (cfg.index_mode == "daily") {
                    ts::UnevenSeries uneven(points);
                    s.daily = ts::to_daily(uneven);
                    s.has_daily = true;
                    auto split = ts::split_by_dates(s.daily, cfg.train_end, cfg.validation_end);
                    s.train = split.train.values;
                    s.validation = split.validation.values;
                    s.test = split.test.values;
                } else {
                    for (const auto& p : points) {
                        Date day = Date::from_timestamp(p.timestamp);
                        if (day <= cfg.train_end) s.train.push_back(p.value);
                        else if (day <= cfg.validation_end) s.validation.push_back(p.value);
                        else s.test.push_back(p.value);
                    }
                    if (s.train.empty() || s.validation.empty() || s.test.empty())
                        throw std::invalid_argument("empty segment");
                }
            } catch (const std::exception& e) {
                prep.exclusions.push_back({{"model_id", model_id},
                                           {"metric", metric},
                                           {"stage", "forecast"},
                                           {"reason", e.what()}});
                continue;
            }
            prep.series.push_back(std::move(s));
            model_used = true;
        }
        if (model_used) {
            per_model_revisions.push_back(static_cast<std::int64_t>(model_records.size()));
            for (const auto& r : model_records) {
                Date day = Date::from_timestamp(r.timestamp);
                if (day <= cfg.train_end) ++seg_train;
                else if (day <= cfg.validation_end) ++seg_val;
                else ++seg_test;
            }
        }
    }

    std::int64_t total = 0, mn = 0, mx = 0;
    for (auto v : per_model_revisions) {
        total += v;
        mn = mn == 0 ? v : std::min(mn, v);
        mx = std::max(mx, v);
    }
    prep.counts["models"] = per_model_revisions.size();
    prep.counts["revisions_total"] = total;
    prep.counts["revisions_train"] = seg_train;
    prep.counts["revisions_validation"] = seg_val;
    prep.counts["revisions_test"] = seg_test;
    prep.counts["revisions_per_model_min"] = mn;
    prep.counts["revisions_per_model_max"] = mx;
    prep.counts["revisions_per_model_avg"] =
        per_model_revisions.empty() ? 0.0
                                    : static_cast<double>(total) /
                                          static_cast<double>(per_model_revisions.size());
    return prep;
}

forecast::FittedPtr fit_one(const PipelineConfig& cfg, const PreparedSeries& s,
                            forecast::Approach approach) {
    using forecast::Approach;
    switch (approach) {
        case Approach::Holt: {
            std::vector<double> history = s.train;
            history.insert(history.end(), s.validation.begin(), s.validation.end());
            return forecast::fit_holt(history);
        }
        case Approach::Arima: {
            std::vector<double> history = s.train;
            history.insert(history.end(), s.validation.begin(), s.validation.end());
            return forecast::auto_arima(history);
        }
        case Approach::Svr:
            return forecast::fit_svr(s.train, s.validation, cfg.svr);
        case Approach::Ann:
        case Approach::Lstm: {
            std::string series_id = s.model_id + "/" + s.metric;
            std::string name = forecast::approach_name(approach);
            std::vector<std::uint64_t> seeds;
            for (int r = 0; r < cfg.runs; ++r)
                seeds.push_back(derive_seed(cfg.seed, series_id, name, static_cast<std::uint64_t>(r)));
            if (approach == Approach::Ann)
                return forecast::fit_ann(s.train, s.validation, cfg.ann, seeds);
            return forecast::fit_lstm(s.train, s.validation, cfg.lstm, seeds);
        }
    }
    throw std::logic_error("unhandled approach");
}

std::vector<eval::EvaluationRecord> read_evaluation_csv(const fs::path& path) {
    auto rows = csv::read_file(path.string());
    std::vector<eval::EvaluationRecord> records;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() != 7) throw FatalError("evaluation.csv row must have seven fields");
        eval::EvaluationRecord rec;
        rec.model_id = row[0];
        rec.metric = row[1];
        rec.approach = row[2];
        rec.rmse_short = std::stod(row[3]);
        if (!row[4].empty()) rec.rmse_long = std::stod(row[4]);
        rec.mean_pct_dev = std::stod(row[5]);
        rec.above_threshold = row[6] == "true";
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace

void run_mine(const PipelineConfig& cfg) {
    with_stage(cfg, "mine", [&](json& manifest) {
        if (cfg.repo.root_path.empty())
            throw FatalError("repo.root is not set; nothing to mine");
        mining::RevisionHistory history;
        try {
            history = mining::list_model_revisions(cfg.repo);
        } catch (const std::exception& e) {
            throw FatalError(e.what());
        }
        if (history.empty()) throw FatalError("no models matched");

        std::vector<std::string> ids;
        for (const auto& [id, revs] : history) ids.push_back(id);
        auto names = disk_names(ids);

        std::ofstream index(out_path(cfg, "mined_index.csv"), std::ios::binary);
        index << "model_id,commit_id,timestamp,content_path\n";
        std::size_t total = 0;
        for (const auto& [id, revisions] : history) {
            fs::path dir = out_path(cfg, "contents") / names[id];
            fs::create_directories(dir);
            for (std::size_t k = 0; k < revisions.size(); ++k) {
                char seq[16];
                std::snprintf(seq, sizeof(seq), "%05zu", k);
                fs::path content_path = dir / (std::string(seq) + ".txt");
                std::ofstream out(content_path, std::ios::binary);
                out << revisions[k].content;
                csv::write_row(index, {id, revisions[k].commit_id,
                                       std::to_string(revisions[k].timestamp),
                                       fs::relative(content_path, cfg.out_dir).generic_string()});
            }
            total += revisions.size();
        }
        manifest["counts"]["mined_models"] = history.size();
        manifest["counts"]["mined_revisions"] = total;
    });
}

void run_measure(const PipelineConfig& cfg) {
    with_stage(cfg, "measure", [&](json& manifest) {
        fs::path index_path = out_path(cfg, "mined_index.csv");
        require_file(index_path, "mine");
        auto rows = csv::read_file(index_path.string());

        std::map<std::string, std::vector<mining::Revision>> by_model;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const auto& row = rows[i];
            if (row.size() != 4) throw FatalError("mined_index.csv row must have four fields");
            by_model[row[0]].push_back(
                {row[1], std::stoll(row[2]), read_text_file(fs::path(cfg.out_dir) / row[3])});
        }

        std::vector<mining::RevisionRecord> all;
        std::size_t flagged = 0;
        for (const auto& [model_id, revisions] : by_model) {
            auto records = mining::measure_revisions(model_id, revisions);
            for (const auto& r : records)
                if (r.block_parse_failed) ++flagged;
            all.insert(all.end(), records.begin(), records.end());
        }
        std::ofstream out(out_path(cfg, "revisions.csv"), std::ios::binary);
        mining::write_revisions_csv(out, all);
        manifest["counts"]["measured_revisions"] = all.size();
        manifest["counts"]["block_parse_failures"] = flagged;
    });
}

void run_forecast(const PipelineConfig& cfg) {
    with_stage(cfg, "forecast", [&](json& manifest) {
        fs::path revisions_path = out_path(cfg, "revisions.csv");
        require_file(revisions_path, "measure");
        std::ifstream in(revisions_path, std::ios::binary);
        auto records = mining::read_revisions_csv(in);

        auto prep = prepare_series(cfg, records);
        for (auto& e : prep.exclusions) add_exclusion(manifest, std::move(e));
        manifest["counts"].update(prep.counts);

        // Daily series exports for inspection.
        if (cfg.index_mode == "daily" && !prep.series.empty()) {
            std::vector<std::string> ids;
            for (const auto& s : prep.series)
                if (std::find(ids.begin(), ids.end(), s.model_id) == ids.end())
                    ids.push_back(s.model_id);
            auto names = disk_names(ids);
            fs::create_directories(out_path(cfg, "daily"));
            for (const auto& s : prep.series) {
                if (!s.has_daily) continue;
                std::ofstream out(out_path(cfg, "daily") /
                                      (names[s.model_id] + "_" + s.metric + ".csv"),
                                  std::ios::binary);
                ts::write_daily_csv(out, s.daily);
            }
        }

        struct Task {
            const PreparedSeries* series;
            forecast::Approach approach;
        };
        std::vector<Task> tasks;
        for (const auto& s : prep.series)
            for (const auto& name : cfg.approaches)
                tasks.push_back({&s, forecast::approach_from_name(name)});

        struct Outcome {
            std::vector<double> values;
            json summary;
            std::string error;
        };
        std::vector<Outcome> outcomes(tasks.size());
        parallel_for(cfg.jobs, tasks.size(), [&](std::size_t i) {
            const auto& task = tasks[i];
            try {
                auto fitted = fit_one(cfg, *task.series, task.approach);
                outcomes[i].values =
                    fitted->forecast(static_cast<int>(task.series->test.size()));
                outcomes[i].summary = fitted->summary();
            } catch (const std::exception& e) {
                outcomes[i].error = e.what();
            }
        });

        std::ofstream fout(out_path(cfg, "forecasts.csv"), std::ios::binary);
        fout << "model_id,metric,approach,step,value\n";
        json fitted_models = json::array();
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            const auto& s = *tasks[i].series;
            std::string approach = forecast::approach_name(tasks[i].approach);
            if (!outcomes[i].error.empty()) {
                add_exclusion(manifest, {{"model_id", s.model_id},
                                         {"metric", s.metric},
                                         {"approach", approach},
                                         {"stage", "forecast"},
                                         {"reason", outcomes[i].error}});
                continue;
            }
            for (std::size_t step = 0; step < outcomes[i].values.size(); ++step)
                csv::write_row(fout, {s.model_id, s.metric, approach, std::to_string(step + 1),
                                      csv::format_double(outcomes[i].values[step])});
            fitted_models.push_back({{"model_id", s.model_id},
                                     {"metric", s.metric},
                                     {"approach", approach},
                                     {"model", outcomes[i].summary}});
        }
        std::ofstream mout(out_path(cfg, "fitted_models.json"), std::ios::binary);
        mout << fitted_models.dump(2) << '\n';
    });
}

int run_evaluate(const PipelineConfig& cfg) {
    int violations = 0;
    with_stage(cfg, "evaluate", [&](json& manifest) {
        fs::path forecasts_path = out_path(cfg, "forecasts.csv");
        require_file(forecasts_path, "forecast");
        fs::path revisions_path = out_path(cfg, "revisions.csv");
        require_file(revisions_path, "measure");

        std::ifstream rin(revisions_path, std::ios::binary);
        auto prep = prepare_series(cfg, mining::read_revisions_csv(rin));

        // (model, metric) -> approach -> step-ordered forecast values
        std::map<std::pair<std::string, std::string>,
                 std::map<std::string, std::vector<std::pair<int, double>>>>
            forecasts;
        auto rows = csv::read_file(forecasts_path.string());
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const auto& row = rows[i];
            if (row.size() != 5) throw FatalError("forecasts.csv row must have five fields");
            forecasts[{row[0], row[1]}][row[2]].emplace_back(std::stoi(row[3]),
                                                             std::stod(row[4]));
        }

        std::vector<eval::EvaluationRecord> all_records;
        for (const auto& s : prep.series) {
            auto it = forecasts.find({s.model_id, s.metric});
            if (it == forecasts.end()) continue;
            std::vector<std::pair<std::string, std::vector<double>>> by_approach;
            for (const auto& name : cfg.approaches) {
                auto ait = it->second.find(name);
                if (ait == it->second.end()) continue;
                auto steps = ait->second;
                std::sort(steps.begin(), steps.end());
                std::vector<double> values;
                for (const auto& [step, value] : steps) values.push_back(value);
                by_approach.emplace_back(name, std::move(values));
            }
            if (by_approach.empty()) continue;
            try {
                auto result =
                    eval::evaluate_model(s.model_id, s.metric, by_approach, s.test, cfg.policy);
                if (result.exclusion_reason) {
                    add_exclusion(manifest, {{"model_id", s.model_id},
                                             {"metric", s.metric},
                                             {"stage", "evaluate"},
                                             {"reason", *result.exclusion_reason}});
                    continue;
                }
                for (auto& rec : result.records) all_records.push_back(std::move(rec));
            } catch (const std::exception& e) {
                add_exclusion(manifest, {{"model_id", s.model_id},
                                         {"metric", s.metric},
                                         {"stage", "evaluate"},
                                         {"reason", e.what()}});
            }
        }

        std::ofstream eout(out_path(cfg, "evaluation.csv"), std::ios::binary);
        eout << "model_id,metric,approach,rmse_short,rmse_long,mean_pct_dev,above_threshold\n";
        for (const auto& r : all_records) {
            csv::write_row(eout,
                           {r.model_id, r.metric, r.approach, csv::format_double(r.rmse_short),
                            r.rmse_long ? csv::format_double(*r.rmse_long) : "",
                            csv::format_double(r.mean_pct_dev),
                            r.above_threshold ? "true" : "false"});
            if (r.above_threshold) ++violations;
        }

        // Wide per-model RMSE layout for plotting, full-test horizon.
        std::ofstream pout(out_path(cfg, "plot_rmse.csv"), std::ios::binary);
        {
            std::vector<std::string> header{"model_id", "metric"};
            for (const auto& a : cfg.approaches) header.push_back(a);
            csv::write_row(pout, header);
            std::map<std::pair<std::string, std::string>, std::map<std::string, double>> wide;
            for (const auto& r : all_records)
                wide[{r.model_id, r.metric}][r.approach] =
                    r.rmse_long ? *r.rmse_long : r.rmse_short;
            for (const auto& [key, by_approach] : wide) {
                std::vector<std::string> row{key.first, key.second};
                for (const auto& a : cfg.approaches) {
                    auto it = by_approach.find(a);
                    row.push_back(it == by_approach.end() ? "" : csv::format_double(it->second));
                }
                csv::write_row(pout, row);
            }
        }

        manifest["counts"]["evaluation_records"] = all_records.size();
        manifest["counts"]["threshold_violations"] = violations;
        // Per-approach flag counts, the summary practitioners compare first.
        json by_approach = json::object();
        for (const auto& a : cfg.approaches) {
            std::size_t flagged = 0;
            for (const auto& r : all_records)
                if (r.approach == a && r.above_threshold) ++flagged;
            by_approach[a] = flagged;
        }
        manifest["counts"]["above_threshold_by_approach"] = by_approach;
    });
    return violations;
}

void run_compare(const PipelineConfig& cfg, const CompareOptions& options) {
    with_stage(cfg, "compare", [&](json& manifest) {
        fs::path evaluation_path = out_path(cfg, "evaluation.csv");
        require_file(evaluation_path, "evaluate");
        auto records = read_evaluation_csv(evaluation_path);
        if (records.empty()) throw FatalError("evaluation.csv has no records to compare");

        auto report = eval::compare_approaches(records, cfg.policy, options.exact_permutation);
        json j = eval::to_json(report);
        if (options.pairwise)
            j["pairwise"] = eval::to_json(eval::pairwise_comparisons(records, cfg.policy));
        std::ofstream out(out_path(cfg, "comparison.json"), std::ios::binary);
        out << j.dump(2) << '\n';

        std::size_t rejected = 0;
        for (const auto& t : report.tests)
            if (t.computed && t.reject_h0) ++rejected;
        manifest["counts"]["comparison_tests_rejecting_h0"] = rejected;
    });
}

int run_pipeline(const PipelineConfig& cfg, const CompareOptions& options) {
    int violations = 0;
    try {
        run_mine(cfg);
        run_measure(cfg);
        run_forecast(cfg);
        violations = run_evaluate(cfg);
        run_compare(cfg, options);
    } catch (const std::exception& e) {
        std::cerr << "pipeline failed: " << e.what() << "\n";
        return 2;
    }
    return violations > 0 ? 1 : 0;
}

}  // namespace mgrowth::pipeline
