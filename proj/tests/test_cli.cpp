#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qaml/generators.hpp"
#include "qaml/runner.hpp"

using namespace qaml;
using namespace qaml::runner;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("qaml_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// A small regression CSV with an easy structure.
void write_regression_csv(const std::string& path, int n, int offset = 0) {
    std::ofstream out(path);
    out << "a,b,target\n";
    for (int i = 0; i < n; ++i) {
        const double a = 0.1 * (i + offset);
        const double b = std::sin(0.5 * (i + offset));
        out << a << "," << b << "," << 2.0 * a + b + 5.0 << "\n";
    }
}

FitFileRequest small_fit_request(const TempDir& dir, const std::string& train_csv) {
    FitFileRequest req;
    req.train_path = train_csv;
    req.target = "target";
    req.model_out = dir.file("model.json");
    req.report_out = dir.file("report.json");
    req.trials_out = dir.file("trials.csv");
    req.run.task = models::Task::TABULAR_REGRESSION;
    req.run.preset = pipeline::kPresetClassicalRegression;  // fast
    req.run.budget.max_trials = 8;
    req.run.seed = 0;
    return req;
}

}  // namespace

TEST_CASE("fit writes model, report and trials files") {
    TempDir dir;
    write_regression_csv(dir.file("train.csv"), 40);
    write_regression_csv(dir.file("test.csv"), 12, 100);
    FitFileRequest req = small_fit_request(dir, dir.file("train.csv"));
    req.test_path = dir.file("test.csv");
    fit_files(req);

    CHECK(fs::exists(req.model_out));
    CHECK(fs::exists(req.report_out));
    CHECK(fs::exists(req.trials_out));

    const auto report = nlohmann::json::parse(slurp(req.report_out));
    CHECK(report.at("schema_version") == 1);
    CHECK(report.at("trials").at("ok").get<int>() >= 1);
    CHECK(report.contains("test_score"));
    CHECK(report.at("metric") == "mape");
    CHECK(report.at("best_validation_loss").get<double>() >= 0.0);
    CHECK(report.at("trial_wall_seconds").size() == 8);

    const std::string trials = slurp(req.trials_out);
    CHECK(trials.rfind("index,status,loss,seconds", 0) == 0);
}

TEST_CASE("fit with the same seed twice is byte-identical") {
    TempDir dir;
    write_regression_csv(dir.file("train.csv"), 36);
    FitFileRequest req = small_fit_request(dir, dir.file("train.csv"));
    fit_files(req);
    const std::string model_a = slurp(req.model_out);
    const std::string trials_a = slurp(req.trials_out);

    fit_files(req);
    CHECK(slurp(req.model_out) == model_a);
    CHECK(slurp(req.trials_out) == trials_a);
}

TEST_CASE("predict reproduces fit-time training predictions and handles edge cases") {
    TempDir dir;
    write_regression_csv(dir.file("train.csv"), 30);
    FitFileRequest req = small_fit_request(dir, dir.file("train.csv"));
    fit_files(req);

    SUBCASE("training file through its own model reproduces in-memory predictions") {
        predict_files(req.model_out, dir.file("train.csv"), dir.file("pred.csv"), 1);
        const data::Table t = data::read_csv_file(dir.file("pred.csv"));
        CHECK(t.columns == std::vector<std::string>{"prediction"});
        REQUIRE(t.n_rows() == 30);

        // load the model and predict in memory; the file path must agree
        const nlohmann::json model_json = nlohmann::json::parse(slurp(req.model_out));
        pipeline::Pipeline p = pipeline::deserialize(model_json);
        const data::DataSchema schema =
            data::DataSchema::from_json(model_json.at("data_schema"));
        const data::Dataset d =
            data::materialize(data::read_csv_file(dir.file("train.csv")), schema, false);
        FitContext ctx{1, p.seed, Deadline{}};
        const Eigen::VectorXd direct = p.predict(d.X, ctx);
        for (Eigen::Index i = 0; i < 30; ++i) {
            CHECK(std::stod(t.cells[static_cast<std::size_t>(i)][0]) ==
                  doctest::Approx(direct[i]).epsilon(1e-15));
        }
    }
    SUBCASE("empty input gives an empty prediction file") {
        {
            std::ofstream out(dir.file("empty.csv"));
            out << "a,b,target\n";
        }
        predict_files(req.model_out, dir.file("empty.csv"), dir.file("pred.csv"), 1);
        const data::Table t = data::read_csv_file(dir.file("pred.csv"));
        CHECK(t.n_rows() == 0);
    }
    SUBCASE("column-shuffled input is keyed by header") {
        predict_files(req.model_out, dir.file("train.csv"), dir.file("pred_a.csv"), 1);
        // rewrite with shuffled columns
        const data::Table t = data::read_csv_file(dir.file("train.csv"));
        data::Table shuffled;
        shuffled.columns = {"target", "b", "a"};
        for (const auto& row : t.cells) {
            shuffled.cells.push_back({row[2], row[1], row[0]});
        }
        data::write_csv_file(dir.file("shuffled.csv"), shuffled);
        predict_files(req.model_out, dir.file("shuffled.csv"), dir.file("pred_b.csv"), 1);
        CHECK(slurp(dir.file("pred_a.csv")) == slurp(dir.file("pred_b.csv")));
    }
    SUBCASE("schema-mismatched input raises a data error") {
        {
            std::ofstream out(dir.file("bad.csv"));
            out << "wrong,columns\n1,2\n";
        }
        CHECK_THROWS_AS(
            predict_files(req.model_out, dir.file("bad.csv"), dir.file("pred.csv"), 1),
            DataError);
    }
    SUBCASE("corrupt model raises a schema error") {
        {
            std::ofstream out(dir.file("broken.json"));
            out << "{\"schema_version\": 1}";
        }
        CHECK_THROWS_AS(
            predict_files(dir.file("broken.json"), dir.file("train.csv"),
                          dir.file("pred.csv"), 1),
            SchemaError);
    }
}

TEST_CASE("incompatible preset and task are rejected") {
    TempDir dir;
    write_regression_csv(dir.file("train.csv"), 30);
    FitFileRequest req = small_fit_request(dir, dir.file("train.csv"));
    req.run.task = models::Task::TABULAR_CLASSIFICATION;
    req.run.preset = pipeline::kPresetQuantumRegression;
    CHECK_THROWS_AS(fit_files(req), ValueError);
}

TEST_CASE("incompatible metric is rejected") {
    TempDir dir;
    write_regression_csv(dir.file("train.csv"), 30);
    FitFileRequest req = small_fit_request(dir, dir.file("train.csv"));
    req.run.metric = "balanced_accuracy";
    CHECK_THROWS_AS(fit_files(req), ValueError);
}

TEST_CASE("missing target column raises a data error") {
    TempDir dir;
    write_regression_csv(dir.file("train.csv"), 20);
    FitFileRequest req = small_fit_request(dir, dir.file("train.csv"));
    req.target = "nope";
    CHECK_THROWS_AS(fit_files(req), DataError);
}

TEST_CASE("forecasting fit on a series CSV") {
    TempDir dir;
    {
        std::ofstream out(dir.file("series.csv"));
        out << "y\n";
        for (int t = 0; t < 80; ++t) out << 2.0 + std::sin(0.4 * t) << "\n";
    }
    FitFileRequest req;
    req.train_path = dir.file("series.csv");
    req.target = "y";
    req.model_out = dir.file("model.json");
    req.run.task = models::Task::TS_FORECASTING;
    req.run.preset = pipeline::kPresetClassicalRegression;
    req.run.budget.max_trials = 6;
    fit_files(req);

    predict_files(req.model_out, dir.file("series.csv"), dir.file("pred.csv"), 1);
    const data::Table t = data::read_csv_file(dir.file("pred.csv"));
    CHECK(t.n_rows() == 80 - 4);  // one prediction per windowable row
}

TEST_CASE("stratified split covers every class and respects the fraction") {
    Eigen::VectorXd y(20);
    for (Eigen::Index i = 0; i < 20; ++i) y[i] = static_cast<double>(i % 4);
    const SplitIndices s = stratified_split(y, 0.25, 7);
    CHECK(s.val.size() == 4);   // one per class
    CHECK(s.fit.size() == 16);
    std::set<double> val_classes;
    for (const auto i : s.val) val_classes.insert(y[i]);
    CHECK(val_classes.size() == 4);
}

TEST_CASE("csv reader rejects malformed files") {
    TempDir dir;
    {
        std::ofstream out(dir.file("ragged.csv"));
        out << "a,b\n1,2\n3\n";
    }
    CHECK_THROWS_AS(data::read_csv_file(dir.file("ragged.csv")), DataError);
    CHECK_THROWS_AS(data::read_csv_file(dir.file("missing.csv")), DataError);
    CHECK_THROWS_AS(data::read_csv_text(""), DataError);
}

TEST_CASE("categorical columns flow from declaration to one-hot width") {
    TempDir dir;
    {
        std::ofstream out(dir.file("cat.csv"));
        out << "x,color,target\n";
        const char* colors[3] = {"red", "green", "blue"};
        for (int i = 0; i < 30; ++i) {
            out << 0.1 * i << "," << colors[i % 3] << "," << (i % 3) * 1.0 + 0.05 * i << "\n";
        }
    }
    const data::Table table = data::read_csv_file(dir.file("cat.csv"));
    const data::DataSchema schema = data::infer_schema(table, "target", {"color"});
    CHECK(schema.categorical == std::vector<bool>{false, true});
    CHECK(schema.categories[1] == std::vector<std::string>{"blue", "green", "red"});
    const data::Dataset d = data::materialize(table, schema, true);
    CHECK(d.X(0, 1) == 2.0);  // "red" sorts last
    CHECK(d.X(1, 1) == 1.0);  // "green"
    CHECK(d.X(2, 1) == 0.0);  // "blue"
}
