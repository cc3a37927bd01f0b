#include "qaml/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>

#include "qaml/errors.hpp"
#include "qaml/metrics.hpp"
#include "qaml/rng.hpp"

namespace qaml::runner {

using models::Task;

namespace {

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& X, const std::vector<Eigen::Index>& idx) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), X.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = X.row(idx[i]);
    return out;
}

Eigen::VectorXd take(const Eigen::VectorXd& y, const std::vector<Eigen::Index>& idx) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) out[static_cast<Eigen::Index>(i)] = y[idx[i]];
    return out;
}

pipeline::DataTraits traits_of(const data::Dataset& d, Task task, int lags) {
    pipeline::DataTraits traits;
    if (task == Task::TS_FORECASTING) {
        traits.n_features = lags;
        traits.categorical.assign(static_cast<std::size_t>(lags), false);
        return traits;
    }
    traits.n_features = static_cast<int>(d.X.cols());
    traits.categorical = d.schema.categorical;
    if (models::is_classification(task)) {
        traits.n_classes = static_cast<int>(models::class_labels(d.y).size());
    }
    return traits;
}

std::string json_dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << text;
}

double quantile_sorted(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    if (v.empty()) return 0.0;
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    return v[lo] + (v[hi] - v[lo]) * (pos - static_cast<double>(lo));
}

}  // namespace

SplitIndices shuffle_split(Eigen::Index n, double val_fraction, std::uint64_t seed) {
    if (n < 2) throw ValueError("split: need at least 2 rows");
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<Eigen::Index>(i);
    Rng rng(derive_seed(seed, 0x5371));
    rng.shuffle(idx);
    auto n_val = static_cast<std::size_t>(std::floor(val_fraction * static_cast<double>(n)));
    n_val = std::clamp<std::size_t>(n_val, 1, static_cast<std::size_t>(n) - 1);
    SplitIndices s;
    s.val.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_val));
    s.fit.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_val), idx.end());
    std::sort(s.val.begin(), s.val.end());
    std::sort(s.fit.begin(), s.fit.end());
    return s;
}

SplitIndices stratified_split(const Eigen::VectorXd& y, double val_fraction,
                              std::uint64_t seed) {
    std::map<double, std::vector<Eigen::Index>> groups;
    for (Eigen::Index i = 0; i < y.size(); ++i) groups[y[i]].push_back(i);
    Rng rng(derive_seed(seed, 0x57A7));
    SplitIndices s;
    for (auto& [label, idx] : groups) {
        rng.shuffle(idx);
        auto n_val = static_cast<std::size_t>(
            std::floor(val_fraction * static_cast<double>(idx.size())));
        if (n_val >= idx.size()) n_val = idx.size() - 1;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            (i < n_val ? s.val : s.fit).push_back(idx[i]);
        }
    }
    if (s.val.empty() || s.fit.empty()) {
        throw ValueError("stratified split: degenerate partition");
    }
    std::sort(s.val.begin(), s.val.end());
    std::sort(s.fit.begin(), s.fit.end());
    return s;
}

RunArtifacts run_search(const RunConfig& config, const data::Dataset& train,
                        const data::Dataset* test) {
    const auto t_start = std::chrono::steady_clock::now();
    config.budget.validate();
    if (!(config.validation_fraction > 0.0) || config.validation_fraction >= 1.0) {
        throw ValueError("validation fraction must be in (0, 1)");
    }

    RunArtifacts art;
    art.metric = config.metric.empty() ? search::default_metric(config.task)
                                       : search::metric_from_name(config.metric);
    if (!search::metric_compatible(art.metric, config.task)) {
        throw ValueError("metric " + search::metric_name(art.metric) +
                         " is incompatible with task " + models::task_name(config.task));
    }
    art.schema = train.schema;

    const int lags = config.tmpl.forecast_lags;
    const pipeline::DataTraits traits = traits_of(train, config.task, lags);
    art.space = pipeline::default_space(config.task, config.preset, traits, config.tmpl);

    // Frozen fit/validation split, shared by every trial.
    Eigen::MatrixXd X_fit, X_val;
    Eigen::VectorXd y_fit, y_val;
    Eigen::VectorXd fit_series, val_context;  // forecasting path
    Eigen::VectorXd scale_series;             // MASE denominator source
    if (config.task == Task::TS_FORECASTING) {
        if (train.X.cols() != 0) {
            throw DataError("forecasting training data must hold only the target column");
        }
        const Eigen::VectorXd& series = train.y;
        const Eigen::Index windows = series.size() - lags;
        if (windows < 8) throw DataError("forecasting series too short");
        auto n_val = static_cast<Eigen::Index>(
            std::floor(config.validation_fraction * static_cast<double>(windows)));
        n_val = std::clamp<Eigen::Index>(n_val, 1, windows - 4);
        fit_series = series.head(series.size() - n_val);
        val_context = series.tail(n_val + lags);
        y_val = series.tail(n_val);
        scale_series = prep::sliding_window(fit_series, lags).y;
    } else if (models::is_classification(config.task)) {
        const SplitIndices split =
            stratified_split(train.y, config.validation_fraction, config.seed);
        X_fit = take_rows(train.X, split.fit);
        y_fit = take(train.y, split.fit);
        X_val = take_rows(train.X, split.val);
        y_val = take(train.y, split.val);
    } else {
        const SplitIndices split =
            shuffle_split(train.X.rows(), config.validation_fraction, config.seed);
        X_fit = take_rows(train.X, split.fit);
        y_fit = take(train.y, split.fit);
        X_val = take_rows(train.X, split.val);
        y_val = take(train.y, split.val);
    }

    const auto objective = [&](const search::Configuration& trial_config,
                               const Deadline& deadline,
                               std::uint64_t trial_seed) -> search::ObjectiveOutcome {
        pipeline::Pipeline p =
            pipeline::instantiate(trial_config, config.task, traits, config.tmpl);
        FitContext ctx{config.workers, trial_seed, deadline};
        Eigen::VectorXd y_hat;
        if (config.task == Task::TS_FORECASTING) {
            p.fit_series(fit_series, ctx);
            y_hat = p.predict_series(val_context, ctx);
        } else {
            p.fit(X_fit, y_fit, ctx);
            y_hat = p.predict(X_val, ctx);
        }
        return {search::metric_loss(art.metric, y_val, y_hat, scale_series),
                search::TrialStatus::OK};
    };

    const auto on_trial = [&](const search::TrialRecord& t) {
        if (!config.verbose) return;
        std::fprintf(stderr, "trial %4zu  %-7s loss=%.6g\n", art.search.history.size(),
                     search::trial_status_name(t.status).c_str(), t.loss);
    };

    art.search = search::optimize(art.space, objective, config.budget, config.seed, on_trial);
    art.validation_loss = art.search.best_loss;

    // Refit the winning configuration on the full training data, seeded by
    // its trial so row subsampling and initialization replay exactly.
    std::uint64_t best_seed = config.seed;
    for (const auto& t : art.search.history) {
        if (t.status == search::TrialStatus::OK && t.loss == art.search.best_loss) {
            best_seed = t.seed;
            break;
        }
    }
    art.best = pipeline::instantiate(art.search.best_config, config.task, traits, config.tmpl);
    art.best.metric = search::metric_name(art.metric);
    FitContext refit_ctx{config.workers, best_seed, Deadline{}};
    if (config.task == Task::TS_FORECASTING) {
        art.best.fit_series(train.y, refit_ctx);
    } else {
        art.best.fit(train.X, train.y, refit_ctx);
    }

    // Held-out scoring happens strictly after the search history is frozen.
    if (test != nullptr) {
        Eigen::VectorXd y_hat;
        Eigen::VectorXd scale;
        if (config.task == Task::TS_FORECASTING) {
            y_hat = art.best.predict_series(test->y, refit_ctx);
            const Eigen::VectorXd y_true = test->y.tail(test->y.size() - lags);
            scale = prep::sliding_window(train.y, lags).y;
            art.test_score = search::metric_score(art.metric, y_true, y_hat, scale);
            art.test_loss = search::metric_loss(art.metric, y_true, y_hat, scale);
        } else {
            y_hat = art.best.predict(test->X, refit_ctx);
            art.test_score = search::metric_score(art.metric, test->y, y_hat, scale);
            art.test_loss = search::metric_loss(art.metric, test->y, y_hat, scale);
        }
    }
    art.total_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return art;
}

namespace {

nlohmann::json report_json(const RunConfig& config, const RunArtifacts& art) {
    int n_ok = 0, n_failed = 0, n_timeout = 0;
    nlohmann::json trial_seconds = nlohmann::json::array();
    for (const auto& t : art.search.history) {
        trial_seconds.push_back(t.seconds);
        switch (t.status) {
            case search::TrialStatus::OK: ++n_ok; break;
            case search::TrialStatus::FAILED: ++n_failed; break;
            case search::TrialStatus::TIMEOUT: ++n_timeout; break;
        }
    }
    nlohmann::json j{
        {"schema_version", 1},
        {"task", models::task_name(config.task)},
        {"preset", config.preset},
        {"metric", search::metric_name(art.metric)},
        {"seed", config.seed},
        {"workers", config.workers},
        {"trials", {{"ok", n_ok}, {"failed", n_failed}, {"timeout", n_timeout}}},
        {"best_validation_loss", art.validation_loss},
        {"best_config", pipeline::configuration_to_json(art.search.best_config)},
        {"total_wall_seconds", art.total_seconds},
        {"trial_wall_seconds", std::move(trial_seconds)},
    };
    if (config.budget.max_trials) j["budget_trials"] = *config.budget.max_trials;
    if (config.budget.max_seconds) j["budget_seconds"] = *config.budget.max_seconds;
    if (art.test_score) {
        j["test_score"] = *art.test_score;
        j["test_loss"] = *art.test_loss;
    }
    return j;
}

}  // namespace

void fit_files(const FitFileRequest& request) {
    if (request.train_path.empty()) throw ValueError("fit: --data is required");
    if (request.model_out.empty()) throw ValueError("fit: --out is required");
    if (request.target.empty()) throw ValueError("fit: --target is required");

    const data::Table table = data::read_csv_file(request.train_path);
    const data::DataSchema schema =
        data::infer_schema(table, request.target, request.categorical);
    data::Dataset train = data::materialize(table, schema, true);
    if (request.run.task == Task::TS_FORECASTING && train.X.cols() != 0) {
        throw DataError("forecasting expects a CSV containing only the target column");
    }

    RunConfig run = request.run;
    RunArtifacts art = run_search(run, train, nullptr);

    if (!request.test_path.empty()) {
        // Read the held-out file only after the search is done.
        const data::Table test_table = data::read_csv_file(request.test_path);
        const data::Dataset test = data::materialize(test_table, schema, true);
        FitContext ctx{run.workers, art.best.seed, Deadline{}};
        Eigen::VectorXd y_hat;
        if (run.task == Task::TS_FORECASTING) {
            y_hat = art.best.predict_series(test.y, ctx);
            const Eigen::VectorXd y_true = test.y.tail(test.y.size() - art.best.lags);
            const Eigen::VectorXd scale = prep::sliding_window(train.y, art.best.lags).y;
            art.test_score = search::metric_score(art.metric, y_true, y_hat, scale);
            art.test_loss = search::metric_loss(art.metric, y_true, y_hat, scale);
        } else {
            y_hat = art.best.predict(test.X, ctx);
            Eigen::VectorXd scale;
            art.test_score = search::metric_score(art.metric, test.y, y_hat, scale);
            art.test_loss = search::metric_loss(art.metric, test.y, y_hat, scale);
        }
    }

    nlohmann::json model = pipeline::serialize(art.best);
    model["data_schema"] = schema.to_json();
    write_text(request.model_out, json_dump(model));

    if (!request.report_out.empty()) {
        write_text(request.report_out, json_dump(report_json(run, art)));
    }
    if (!request.trials_out.empty()) {
        write_text(request.trials_out, search::trials_to_csv(art.space, art.search.history));
    }
}

void predict_files(const std::string& model_path, const std::string& data_path,
                   const std::string& out_path, int workers) {
    std::ifstream in(model_path, std::ios::binary);
    if (!in) throw DataError("cannot open model " + model_path);
    nlohmann::json model_json;
    try {
        model_json = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("model JSON: ") + e.what());
    }
    pipeline::Pipeline p;
    data::DataSchema schema;
    try {
        p = pipeline::deserialize(model_json);
        schema = data::DataSchema::from_json(model_json.at("data_schema"));
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("model JSON: ") + e.what());
    }

    const data::Table table = data::read_csv_file(data_path);
    const bool need_target = p.task == Task::TS_FORECASTING;
    const data::Dataset d = data::materialize(table, schema, need_target);

    data::Table out;
    out.columns = {"prediction"};
    if (table.n_rows() > 0) {
        FitContext ctx{workers, p.seed, Deadline{}};
        Eigen::VectorXd y_hat;
        if (p.task == Task::TS_FORECASTING) {
            if (d.y.size() <= p.lags) {
                throw DataError("forecasting predict: series shorter than the lag window");
            }
            y_hat = p.predict_series(d.y, ctx);
        } else {
            y_hat = p.predict(d.X, ctx);
        }
        for (Eigen::Index i = 0; i < y_hat.size(); ++i) {
            out.cells.push_back({data::format_double(y_hat[i])});
        }
    }
    data::write_csv_file(out_path, out);
}

BenchmarkResult run_benchmark(const BenchmarkConfig& config) {
    if (config.suite != "desk") throw ValueError("unknown benchmark suite: " + config.suite);

    BenchmarkResult result;
    std::string history_csv =
        "generator,budget,seed,trial,status,loss,best_so_far\n";

    for (const auto& name : data::generator_names()) {
        const data::GeneratedDataset gen =
            data::generate(name, config.data_seed, config.fast);
        const data::DataSchema schema =
            data::infer_schema(gen.train, gen.target, gen.categorical);
        const data::Dataset train = data::materialize(gen.train, schema, true);
        const data::Dataset test = data::materialize(gen.test, schema, true);

        for (const int budget : config.budgets) {
            for (int seed = 0; seed < config.n_seeds; ++seed) {
                RunConfig run;
                run.task = gen.task;
                run.preset = gen.quantum_preset;
                run.budget.max_trials = budget;
                run.budget.max_trial_seconds = config.trial_cap_seconds;
                run.seed = static_cast<std::uint64_t>(seed);
                run.workers = config.workers;
                run.tmpl = config.tmpl;

                const RunArtifacts art = run_search(run, train, &test);

                BenchmarkRunRow row;
                row.generator = name;
                row.budget = budget;
                row.seed = seed;
                row.val_loss = art.validation_loss;
                row.test_score = art.test_score.value_or(0.0);
                row.test_loss = art.test_loss.value_or(0.0);
                for (const auto& t : art.search.history) {
                    if (t.status == search::TrialStatus::OK) ++row.ok;
                    else if (t.status == search::TrialStatus::FAILED) ++row.failed;
                    else ++row.timeout;
                }
                row.seconds = art.total_seconds;
                const auto model_it = art.search.best_config.find("model");
                if (model_it != art.search.best_config.end()) {
                    row.best_model = model_it->second.category;
                }
                result.runs.push_back(row);

                double best_so_far = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < art.search.history.size(); ++i) {
                    const auto& t = art.search.history[i];
                    if (t.status == search::TrialStatus::OK) {
                        best_so_far = std::min(best_so_far, t.loss);
                    }
                    history_csv += name + "," + std::to_string(budget) + "," +
                                   std::to_string(seed) + "," + std::to_string(i) + "," +
                                   search::trial_status_name(t.status) + "," +
                                   (std::isfinite(t.loss) ? data::format_double(t.loss)
                                                          : std::string("inf")) +
                                   "," +
                                   (std::isfinite(best_so_far)
                                        ? data::format_double(best_so_far)
                                        : std::string("inf")) +
                                   "\n";
                }
                if (config.verbose) {
                    std::fprintf(stderr,
                                 "[bench] %-6s budget=%-3d seed=%d score=%.4f "
                                 "val_loss=%.4f ok/f/t=%d/%d/%d %.1fs model=%s\n",
                                 name.c_str(), budget, seed, row.test_score, row.val_loss,
                                 row.ok, row.failed, row.timeout, row.seconds,
                                 row.best_model.c_str());
                }
            }
        }

        // Box-plot summary per budget (median, quartiles, 1.5 IQR whiskers).
        for (const int budget : config.budgets) {
            std::vector<double> scores, val_losses;
            for (const auto& r : result.runs) {
                if (r.generator == name && r.budget == budget) {
                    scores.push_back(r.test_score);
                    val_losses.push_back(r.val_loss);
                }
            }
            BenchmarkSummaryRow s;
            s.generator = name;
            s.metric = search::metric_name(search::default_metric(gen.task));
            s.budget = budget;
            s.median_score = quantile_sorted(scores, 0.5);
            s.q1 = quantile_sorted(scores, 0.25);
            s.q3 = quantile_sorted(scores, 0.75);
            const double iqr = s.q3 - s.q1;
            s.whisker_lo = s.q1 - 1.5 * iqr;
            s.whisker_hi = s.q3 + 1.5 * iqr;
            s.median_val_loss = quantile_sorted(val_losses, 0.5);
            result.summary.push_back(s);
        }
    }

    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        std::filesystem::create_directories(config.out_dir + "/data");
        for (const auto& name : data::generator_names()) {
            const data::GeneratedDataset gen =
                data::generate(name, config.data_seed, config.fast);
            data::write_csv_file(config.out_dir + "/data/" + name + "_train.csv", gen.train);
            data::write_csv_file(config.out_dir + "/data/" + name + "_test.csv", gen.test);
        }
        std::string runs_csv =
            "generator,budget,seed,val_loss,test_score,test_loss,ok,failed,timeout,"
            "seconds,best_model\n";
        for (const auto& r : result.runs) {
            runs_csv += r.generator + "," + std::to_string(r.budget) + "," +
                        std::to_string(r.seed) + "," + data::format_double(r.val_loss) +
                        "," + data::format_double(r.test_score) + "," +
                        data::format_double(r.test_loss) + "," + std::to_string(r.ok) +
                        "," + std::to_string(r.failed) + "," + std::to_string(r.timeout) +
                        "," + data::format_double(r.seconds) + "," + r.best_model + "\n";
        }
        write_text(config.out_dir + "/runs.csv", runs_csv);

        std::string summary_csv =
            "generator,metric,budget,median,q1,q3,whisker_lo,whisker_hi,median_val_loss\n";
        for (const auto& s : result.summary) {
            summary_csv += s.generator + "," + s.metric + "," + std::to_string(s.budget) +
                           "," + data::format_double(s.median_score) + "," +
                           data::format_double(s.q1) + "," + data::format_double(s.q3) +
                           "," + data::format_double(s.whisker_lo) + "," +
                           data::format_double(s.whisker_hi) + "," +
                           data::format_double(s.median_val_loss) + "\n";
        }
        write_text(config.out_dir + "/summary.csv", summary_csv);
        write_text(config.out_dir + "/history.csv", history_csv);
    }
    return result;
}

}  // namespace qaml::runner
