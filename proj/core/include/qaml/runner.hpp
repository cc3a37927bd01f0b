// Run orchestration shared by the command line tool and the test suites:
// dataset ingestion, validation splits, the search objective, report and
// artifact emission, and the desk benchmark suite.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qaml/dataset.hpp"
#include "qaml/generators.hpp"
#include "qaml/metrics.hpp"
#include "qaml/pipeline.hpp"
#include "qaml/tpe.hpp"

namespace qaml::runner {

struct RunConfig {
    models::Task task = models::Task::TABULAR_REGRESSION;
    std::string preset = pipeline::kPresetAll;
    search::Budget budget;
    std::uint64_t seed = 0;
    std::string metric;  // empty -> task default
    int workers = 1;
    double validation_fraction = 0.25;
    pipeline::TemplateOptions tmpl;
    bool verbose = false;
};

struct RunArtifacts {
    pipeline::Pipeline best;           // refit on the full training data
    search::OptimizeResult search;
    search::SearchSpace space;
    data::DataSchema schema;
    search::Metric metric = search::Metric::MAPE;
    double validation_loss = 0.0;
    std::optional<double> test_score;
    std::optional<double> test_loss;
    double total_seconds = 0.0;
};

// Splits, searches and refits. `test` (optional) is scored exactly once,
// after the search history is frozen.
RunArtifacts run_search(const RunConfig& config, const data::Dataset& train,
                        const data::Dataset* test);

// File-level entry points used by the CLI. These throw typed errors
// (ValueError/DataError/SchemaError/NoResultError); the CLI maps them to
// exit codes.
struct FitFileRequest {
    RunConfig run;
    std::string train_path;
    std::string test_path;  // optional
    std::string target;
    std::vector<std::string> categorical;
    std::string model_out;
    std::string report_out;   // optional
    std::string trials_out;   // optional
};

void fit_files(const FitFileRequest& request);

void predict_files(const std::string& model_path, const std::string& data_path,
                   const std::string& out_path, int workers);

// Desk benchmark: every generator x trial budgets {25, 100} x 10 seeds.
struct BenchmarkConfig {
    std::string suite = "desk";
    bool fast = false;
    std::vector<int> budgets = {25, 100};
    int n_seeds = 10;
    int workers = 1;
    std::uint64_t data_seed = 42;
    double trial_cap_seconds = 10.0;
    pipeline::TemplateOptions tmpl;
    std::string out_dir;  // empty -> no files written
    bool verbose = false;
};

struct BenchmarkRunRow {
    std::string generator;
    int budget = 0;
    int seed = 0;
    double val_loss = 0.0;
    double test_score = 0.0;
    double test_loss = 0.0;
    int ok = 0, failed = 0, timeout = 0;
    double seconds = 0.0;
    std::string best_model;
};

struct BenchmarkSummaryRow {
    std::string generator;
    std::string metric;
    int budget = 0;
    double median_score = 0.0, q1 = 0.0, q3 = 0.0, whisker_lo = 0.0, whisker_hi = 0.0;
    double median_val_loss = 0.0;
};

struct BenchmarkResult {
    std::vector<BenchmarkRunRow> runs;
    std::vector<BenchmarkSummaryRow> summary;
};

BenchmarkResult run_benchmark(const BenchmarkConfig& config);

// Validation split helpers (exposed for tests).
struct SplitIndices {
    std::vector<Eigen::Index> fit;
    std::vector<Eigen::Index> val;
};
SplitIndices stratified_split(const Eigen::VectorXd& y, double val_fraction,
                              std::uint64_t seed);
SplitIndices shuffle_split(Eigen::Index n, double val_fraction, std::uint64_t seed);

}  // namespace qaml::runner
