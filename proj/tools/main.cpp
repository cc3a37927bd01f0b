// qaml command line: fit, predict, benchmark, trials.
//
// Exit codes: 0 success, 2 bad arguments, 3 data/schema errors,
// 4 optimization produced no result.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qaml/errors.hpp"
#include "qaml/runner.hpp"

namespace {

std::vector<std::string> split_csv_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

int cmd_trials(const std::string& input, int top) {
    const qaml::data::Table t = qaml::data::read_csv_file(input);
    const int loss_col = t.column_index("loss");
    const int status_col = t.column_index("status");
    if (loss_col < 0 || status_col < 0) {
        throw qaml::DataError("trials: file lacks loss/status columns");
    }
    int ok = 0, failed = 0, timeout = 0;
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
        const std::string& status = t.cells[i][static_cast<std::size_t>(status_col)];
        if (status == "OK") {
            ++ok;
            ranked.emplace_back(std::stod(t.cells[i][static_cast<std::size_t>(loss_col)]), i);
        } else if (status == "TIMEOUT") {
            ++timeout;
        } else {
            ++failed;
        }
    }
    std::sort(ranked.begin(), ranked.end());
    std::printf("trials: %zu total, %d ok, %d failed, %d timeout\n", t.cells.size(), ok,
                failed, timeout);
    const int show = std::min<int>(top, static_cast<int>(ranked.size()));
    for (int r = 0; r < show; ++r) {
        std::printf("#%d  loss=%s  (trial %zu)\n", r + 1,
                    qaml::data::format_double(ranked[static_cast<std::size_t>(r)].first).c_str(),
                    ranked[static_cast<std::size_t>(r)].second);
    }
    if (ok == 0) std::printf("no successful trials\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Automated quantum machine learning pipelines"};
    app.require_subcommand(1);

    // fit ---------------------------------------------------------------
    auto* fit = app.add_subcommand("fit", "Search, fit and save a pipeline");
    qaml::runner::FitFileRequest req;
    std::string task_name = "tabular_regression";
    std::string categorical;
    int trials = 0;
    double budget_seconds = 0.0;
    double trial_seconds = 0.0;
    fit->add_option("--data", req.train_path, "Training CSV (header-keyed)")->required();
    fit->add_option("--target", req.target, "Target column name")->required();
    fit->add_option("--task", task_name,
                    "tabular_classification|tabular_regression|ts_classification|"
                    "ts_forecasting")
        ->required();
    fit->add_option("--preset", req.run.preset,
                    "quantum_classification|quantum_regression|classical_classification|"
                    "classical_regression|all");
    fit->add_option("--trials", trials, "Trial budget");
    fit->add_option("--budget-seconds", budget_seconds, "Wall-clock budget in seconds");
    fit->add_option("--trial-seconds", trial_seconds, "Per-trial wall-clock cap");
    fit->add_option("--seed", req.run.seed, "Random seed");
    fit->add_option("--metric", req.run.metric, "Scoring metric (default per task)");
    fit->add_option("--workers", req.run.workers, "Worker threads for kernel fan-out");
    fit->add_option("--validation-fraction", req.run.validation_fraction,
                    "Holdout fraction inside the training data");
    fit->add_option("--categorical", categorical, "Comma-separated categorical columns");
    fit->add_option("--test", req.test_path, "Held-out test CSV, scored once after search");
    fit->add_option("--out", req.model_out, "Model JSON output path")->required();
    fit->add_option("--report", req.report_out, "Report JSON output path");
    fit->add_option("--trials-csv", req.trials_out, "Trial history CSV output path");
    fit->add_option("--qnn-epochs", req.run.tmpl.qnn_epochs, "QNN training epochs");
    fit->add_flag("--verbose", req.run.verbose, "Print per-trial progress");

    // predict -------------------------------------------------------------
    auto* predict = app.add_subcommand("predict", "Apply a saved pipeline to a CSV");
    std::string model_path, predict_data, predict_out;
    int predict_workers = 1;
    predict->add_option("--model", model_path, "Model JSON")->required();
    predict->add_option("--data", predict_data, "Input CSV")->required();
    predict->add_option("--out", predict_out, "Predictions CSV")->required();
    predict->add_option("--workers", predict_workers, "Worker threads");

    // benchmark -----------------------------------------------------------
    auto* bench = app.add_subcommand("benchmark", "Run the synthetic desk suite");
    qaml::runner::BenchmarkConfig bench_config;
    bench->add_option("--suite", bench_config.suite, "Suite name (desk)");
    bench->add_flag("--fast", bench_config.fast, "Shrink the tile dataset 4x");
    bench->add_option("--out", bench_config.out_dir, "Output directory")->required();
    bench->add_option("--seeds", bench_config.n_seeds, "Number of optimization seeds");
    bench->add_option("--budgets", bench_config.budgets, "Trial budgets");
    bench->add_option("--workers", bench_config.workers, "Worker threads");
    bench->add_option("--data-seed", bench_config.data_seed, "Generator seed");
    bench->add_option("--trial-seconds", bench_config.trial_cap_seconds,
                      "Per-trial wall-clock cap");
    bench->add_option("--qnn-epochs", bench_config.tmpl.qnn_epochs, "QNN training epochs");
    bench->add_flag("--verbose", bench_config.verbose, "Print per-run progress");

    // trials ----------------------------------------------------------------
    auto* trials_cmd = app.add_subcommand("trials", "Summarize a trial history CSV");
    std::string trials_input;
    int trials_top = 5;
    trials_cmd->add_option("--input", trials_input, "Trials CSV from fit")->required();
    trials_cmd->add_option("--top", trials_top, "Show the best N trials");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*fit) {
            req.run.task = qaml::models::task_from_name(task_name);
            req.categorical = split_csv_list(categorical);
            if (trials > 0) req.run.budget.max_trials = trials;
            if (budget_seconds > 0.0) req.run.budget.max_seconds = budget_seconds;
            if (trial_seconds > 0.0) req.run.budget.max_trial_seconds = trial_seconds;
            qaml::runner::fit_files(req);
        } else if (*predict) {
            qaml::runner::predict_files(model_path, predict_data, predict_out,
                                        predict_workers);
        } else if (*bench) {
            qaml::runner::run_benchmark(bench_config);
        } else if (*trials_cmd) {
            return cmd_trials(trials_input, trials_top);
        }
    } catch (const qaml::search::NoResultError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const qaml::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const qaml::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const qaml::ValueError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
