#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "qaml/pipeline.hpp"
#include "qaml/reference_configs.hpp"
#include "qaml/rng.hpp"

using namespace qaml;
using namespace qaml::pipeline;
using models::Task;
using search::Configuration;
using search::ParamValue;

namespace {

Eigen::MatrixXd random_points(Rng& rng, int n, int d) {
    Eigen::MatrixXd X(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) X(i, j) = rng.uniform(-2.0, 2.0);
    }
    return X;
}

DataTraits traits_for(int d, int n_classes = 0) {
    DataTraits t;
    t.n_features = d;
    t.categorical.assign(static_cast<std::size_t>(d), false);
    t.n_classes = n_classes;
    return t;
}

TemplateOptions cheap_options() {
    TemplateOptions opts;
    opts.qnn_epochs = 2;
    opts.qrc_observables = 12;
    return opts;
}

}  // namespace

TEST_CASE("presets restrict the model pool") {
    const DataTraits traits = traits_for(6);
    SUBCASE("quantum_regression excludes all classifiers") {
        const auto space =
            default_space(Task::TABULAR_REGRESSION, kPresetQuantumRegression, traits);
        const auto& model = space.parameter("model");
        const std::set<std::string> pool(model.options.begin(), model.options.end());
        CHECK(pool == std::set<std::string>{"qkrr", "qgpr", "qsvr", "qnn_r", "qrc_r"});
    }
    SUBCASE("quantum_classification holds the classifier families") {
        const auto space = default_space(Task::TABULAR_CLASSIFICATION,
                                         kPresetQuantumClassification, traits_for(6, 2));
        const auto& model = space.parameter("model");
        const std::set<std::string> pool(model.options.begin(), model.options.end());
        CHECK(pool == std::set<std::string>{"qsvc", "qnn_c", "qrc_c"});
    }
    SUBCASE("classical presets expose the RBF twins") {
        const auto space =
            default_space(Task::TABULAR_REGRESSION, kPresetClassicalRegression, traits);
        const auto& model = space.parameter("model");
        const std::set<std::string> pool(model.options.begin(), model.options.end());
        CHECK(pool == std::set<std::string>{"svr_rbf", "krr_rbf", "gpr_rbf"});
    }
    SUBCASE("all unions both pools") {
        const auto space = default_space(Task::TABULAR_REGRESSION, kPresetAll, traits);
        CHECK(space.parameter("model").options.size() == 8);
    }
    SUBCASE("incompatible preset/task combinations throw") {
        CHECK_THROWS_AS(
            default_space(Task::TABULAR_CLASSIFICATION, kPresetQuantumRegression, traits),
            ValueError);
        CHECK_THROWS_AS(default_space(Task::TABULAR_REGRESSION, "nope", traits), ValueError);
    }
}

TEST_CASE("observable subsets include the reported winners") {
    const DataTraits traits = traits_for(6);
    const auto space =
        default_space(Task::TABULAR_REGRESSION, kPresetQuantumRegression, traits);
    const auto& paulis = space.parameter("qkrr.pqk.paulis");
    const std::set<std::string> options(paulis.options.begin(), paulis.options.end());
    CHECK(options.count("XZ") == 1);
    CHECK(options.count("XYZ") == 1);
    CHECK(options.count("XY") == 1);
    CHECK(options.size() == 7);  // every non-empty subset of {X,Y,Z}
}

TEST_CASE("sampled configurations instantiate without error") {
    Rng rng(19);
    const TemplateOptions opts = cheap_options();
    for (const Task task : {Task::TABULAR_CLASSIFICATION, Task::TABULAR_REGRESSION,
                            Task::TS_CLASSIFICATION, Task::TS_FORECASTING}) {
        const DataTraits traits =
            task == Task::TS_FORECASTING ? traits_for(4) : traits_for(7, 3);
        const std::string preset = models::is_classification(task)
                                       ? kPresetQuantumClassification
                                       : kPresetQuantumRegression;
        const auto space = default_space(task, preset, traits, opts);
        for (int i = 0; i < 250; ++i) {
            const Configuration c = search::sample_random(space, rng);
            CHECK_NOTHROW(instantiate(c, task, traits, opts));
        }
    }
}

TEST_CASE("fuzz: random configurations fit a tiny dataset through declared channels") {
    Rng rng(23);
    const TemplateOptions opts = cheap_options();
    const DataTraits traits = traits_for(5, 2);
    Eigen::MatrixXd X = random_points(rng, 20, 5);
    Eigen::VectorXd y_reg(20), y_cls(20);
    for (Eigen::Index i = 0; i < 20; ++i) {
        y_reg[i] = rng.uniform(0.5, 2.0);
        y_cls[i] = i % 2 == 0 ? 0.0 : 1.0;
    }

    int fitted = 0, declared_failures = 0;
    for (const Task task : {Task::TABULAR_REGRESSION, Task::TABULAR_CLASSIFICATION}) {
        const std::string preset = models::is_classification(task)
                                       ? kPresetQuantumClassification
                                       : kPresetQuantumRegression;
        const auto space = default_space(task, preset, traits, opts);
        const Eigen::VectorXd& y = models::is_classification(task) ? y_cls : y_reg;
        for (int i = 0; i < 125; ++i) {
            Pipeline p = instantiate(search::sample_random(space, rng), task, traits, opts);
            FitContext ctx{1, static_cast<std::uint64_t>(i), Deadline{}};
            try {
                p.fit(X, y, ctx);
                const Eigen::VectorXd pred = p.predict(X, ctx);
                CHECK(pred.size() == 20);
                ++fitted;
            } catch (const ValueError&) {
                ++declared_failures;
            } catch (const DimensionError&) {
                ++declared_failures;
            } catch (const ConsistencyError&) {
                ++declared_failures;
            }
        }
    }
    CHECK(fitted > 150);  // the vast majority of draws must fit cleanly
}

TEST_CASE("price-style configuration instantiates the reported pipeline") {
    const NamedConfig ref = reference_config("best_tabular_regression");
    DataTraits traits;
    traits.n_features = 6;
    traits.categorical = {false, false, false, false, true, true};
    Pipeline p = instantiate(ref.config, ref.task, traits);

    REQUIRE(p.plan.size() == 2);  // one-hot then scaler; model separate
    CHECK(p.plan[0].kind == prep::TransformKind::ONE_HOT);
    CHECK(p.plan[1].kind == prep::TransformKind::MINMAX_SYM);
    CHECK(p.model->kind() == "qkrr");
}

TEST_CASE("tile-style configuration instantiates PCA then scaler then FQK SVC") {
    const NamedConfig ref = reference_config("best_ts_classification");
    Pipeline p = instantiate(ref.config, ref.task, traits_for(210, 7));
    REQUIRE(p.plan.size() >= 2);
    CHECK(p.plan[0].kind == prep::TransformKind::PCA);
    CHECK(p.plan[1].kind == prep::TransformKind::MINMAX_SYM);
    CHECK(p.model->kind() == "qsvc");
}

TEST_CASE("minimal configuration yields scaler plus predictor only") {
    Configuration c{
        {"prep.scaler", ParamValue::cat("STANDARDIZE")},
        {"model", ParamValue::cat("krr_rbf")},
        {"krr_rbf.gamma", ParamValue::num(1.0)},
        {"krr_rbf.alpha", ParamValue::num(1e-3)},
    };
    Pipeline p = instantiate(c, Task::TABULAR_REGRESSION, traits_for(3));
    REQUIRE(p.plan.size() == 1);
    CHECK(p.plan[0].kind == prep::TransformKind::STANDARDIZE);
    CHECK(p.model->kind() == "krr_rbf");
}

TEST_CASE("fit, predict and the fixed slot order") {
    Rng rng(31);
    Eigen::MatrixXd X = random_points(rng, 24, 3);
    Eigen::VectorXd y(24);
    for (Eigen::Index i = 0; i < 24; ++i) y[i] = X(i, 0) * 1.5 - X(i, 2) + 3.0;

    Configuration c{
        {"clean.outlier", ParamValue::cat("3.0")},
        {"prep.scaler", ParamValue::cat("MINMAX_SYM")},
        {"model", ParamValue::cat("qkrr")},
        {"qkrr.enc.family", ParamValue::cat("SEPARABLE_RX")},
        {"qkrr.enc.qubits", ParamValue::num(3)},
        {"qkrr.enc.layers", ParamValue::num(1)},
        {"qkrr.enc.bandwidth", ParamValue::num(1.0)},
        {"qkrr.kernel", ParamValue::cat("PQK")},
        {"qkrr.pqk.paulis", ParamValue::cat("Z")},
        {"qkrr.pqk.outer", ParamValue::cat("GAUSSIAN")},
        {"qkrr.pqk.outer.gamma", ParamValue::num(1.0)},
        {"qkrr.alpha", ParamValue::num(1e-6)},
    };
    Pipeline p = instantiate(c, Task::TABULAR_REGRESSION, traits_for(3));
    FitContext ctx{1, 7, Deadline{}};

    SUBCASE("predict before fit throws") {
        CHECK_THROWS_AS(p.predict(X, ctx), NotFittedError);
    }
    SUBCASE("fit then predict, with row-permutation equivariance") {
        p.fit(X, y, ctx);
        REQUIRE(p.fitted());
        const Eigen::VectorXd base = p.predict(X, ctx);
        CHECK(base.size() == 24);

        std::vector<Eigen::Index> perm(24);
        for (Eigen::Index i = 0; i < 24; ++i) perm[static_cast<std::size_t>(i)] = 23 - i;
        Eigen::MatrixXd Xp(24, 3);
        for (Eigen::Index i = 0; i < 24; ++i) {
            Xp.row(i) = X.row(perm[static_cast<std::size_t>(i)]);
        }
        const Eigen::VectorXd permuted = p.predict(Xp, ctx);
        for (Eigen::Index i = 0; i < 24; ++i) {
            CHECK(permuted[i] == base[perm[static_cast<std::size_t>(i)]]);
        }
    }
    SUBCASE("scaler precedes the predictor in every serialized pipeline") {
        p.fit(X, y, ctx);
        const nlohmann::json j = serialize(p);
        const auto& steps = j.at("steps");
        REQUIRE(!steps.empty());
        const std::string last_kind = steps.back().at("kind").get<std::string>();
        CHECK((last_kind == "MINMAX_SYM" || last_kind == "STANDARDIZE"));
    }
}

TEST_CASE("interpolating kernel pipeline reproduces training targets") {
    Rng rng(37);
    Eigen::MatrixXd X = random_points(rng, 15, 2);
    Eigen::VectorXd y(15);
    for (Eigen::Index i = 0; i < 15; ++i) y[i] = rng.uniform(-1.0, 1.0);

    Configuration c{
        {"prep.scaler", ParamValue::cat("MINMAX_SYM")},
        {"model", ParamValue::cat("krr_rbf")},
        {"krr_rbf.gamma", ParamValue::num(8.0)},
        {"krr_rbf.alpha", ParamValue::num(1e-10)},
    };
    Pipeline p = instantiate(c, Task::TABULAR_REGRESSION, traits_for(2));
    FitContext ctx{1, 1, Deadline{}};
    p.fit(X, y, ctx);
    const Eigen::VectorXd pred = p.predict(X, ctx);
    CHECK((pred - y).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("serialization round trip") {
    Rng rng(41);
    Eigen::MatrixXd X = random_points(rng, 18, 3);
    Eigen::VectorXd y(18);
    for (Eigen::Index i = 0; i < 18; ++i) y[i] = std::sin(X(i, 0)) + X(i, 1);

    const NamedConfig ref = reference_config("best_ts_forecasting");
    SUBCASE("forecasting pipeline with train series") {
        Eigen::VectorXd series(60);
        for (Eigen::Index t = 0; t < 60; ++t) {
            series[t] = std::sin(0.3 * static_cast<double>(t)) + 1.5;
        }
        Pipeline p = instantiate(ref.config, ref.task, traits_for(4));
        FitContext ctx{1, 3, Deadline{}};
        p.fit_series(series, ctx);
        const Eigen::VectorXd before = p.predict_series(series, ctx);

        const nlohmann::json j = serialize(p);
        Pipeline q = deserialize(j);
        const Eigen::VectorXd after = q.predict_series(series, ctx);
        REQUIRE(after.size() == before.size());
        CHECK((after - before).cwiseAbs().maxCoeff() <= 1e-12);
        // and the re-serialized document is identical
        CHECK(serialize(q) == j);
    }
    SUBCASE("tabular pipeline with a quantum kernel") {
        Configuration c{
            {"prep.scaler", ParamValue::cat("MINMAX_SYM")},
            {"model", ParamValue::cat("qgpr")},
            {"qgpr.enc.family", ParamValue::cat("HW_EFFICIENT")},
            {"qgpr.enc.qubits", ParamValue::num(3)},
            {"qgpr.enc.layers", ParamValue::num(2)},
            {"qgpr.enc.bandwidth", ParamValue::num(0.9)},
            {"qgpr.kernel", ParamValue::cat("FQK")},
            {"qgpr.sigma2", ParamValue::num(1e-4)},
        };
        Pipeline p = instantiate(c, Task::TABULAR_REGRESSION, traits_for(3));
        FitContext ctx{1, 5, Deadline{}};
        p.fit(X, y, ctx);
        const Eigen::VectorXd before = p.predict(X, ctx);
        Pipeline q = deserialize(serialize(p));
        const Eigen::VectorXd after = q.predict(X, ctx);
        CHECK((after - before).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("serialized best tabular pipeline carries the reported fields") {
    Rng rng(47);
    Eigen::MatrixXd X = random_points(rng, 16, 6);
    Eigen::VectorXd y(16);
    for (Eigen::Index i = 0; i < 16; ++i) y[i] = rng.uniform(10.0, 20.0);
    DataTraits traits;
    traits.n_features = 6;
    traits.categorical = {false, false, false, false, true, true};
    // make the categorical columns integer codes
    for (Eigen::Index i = 0; i < 16; ++i) {
        X(i, 4) = static_cast<double>(i % 9);
        X(i, 5) = static_cast<double>(i % 3);
    }

    const NamedConfig ref = reference_config("best_tabular_regression");
    Pipeline p = instantiate(ref.config, ref.task, traits);
    FitContext ctx{1, 2, Deadline{}};
    p.fit(X, y, ctx);
    const nlohmann::json j = serialize(p);
    CHECK(j.at("schema_version") == 1);
    const auto& enc = j.at("predictor").at("backend").at("kernel").at("encoding");
    CHECK(enc.at("family") == "MULTI_CONTROL");
    CHECK(enc.at("qubits") == 8);
    CHECK(enc.at("layers") == 3);
    CHECK(j.at("qubit_ordering") == "little_endian");
}

TEST_CASE("deserialize rejects tampered documents") {
    Rng rng(53);
    Eigen::MatrixXd X = random_points(rng, 10, 2);
    Eigen::VectorXd y(10);
    for (Eigen::Index i = 0; i < 10; ++i) y[i] = X(i, 0);

    Configuration c{
        {"prep.scaler", ParamValue::cat("MINMAX_SYM")},
        {"model", ParamValue::cat("qkrr")},
        {"qkrr.enc.family", ParamValue::cat("SEPARABLE_RX")},
        {"qkrr.enc.qubits", ParamValue::num(2)},
        {"qkrr.enc.layers", ParamValue::num(1)},
        {"qkrr.enc.bandwidth", ParamValue::num(1.0)},
        {"qkrr.kernel", ParamValue::cat("FQK")},
        {"qkrr.alpha", ParamValue::num(1e-4)},
    };
    Pipeline p = instantiate(c, Task::TABULAR_REGRESSION, traits_for(2));
    FitContext ctx{1, 4, Deadline{}};
    p.fit(X, y, ctx);
    nlohmann::json j = serialize(p);

    SUBCASE("unknown schema version") {
        j["schema_version"] = 99;
        CHECK_THROWS_AS(deserialize(j), SchemaError);
    }
    SUBCASE("qubit count outside the dense-simulator cap") {
        j["predictor"]["backend"]["kernel"]["encoding"]["qubits"] = 99;
        CHECK_THROWS_AS(deserialize(j), ValueError);
    }
    SUBCASE("corrupted payload") {
        j["predictor"].erase("weights");
        CHECK_THROWS_AS(deserialize(j), nlohmann::json::exception);
    }
}

TEST_CASE("reference configurations all instantiate") {
    for (const auto& ref : best_pipeline_presets()) {
        const DataTraits traits =
            ref.task == Task::TS_FORECASTING ? traits_for(4) : traits_for(16, 7);
        CHECK_NOTHROW(instantiate(ref.config, ref.task, traits));
    }
    for (const auto& ref : manual_baselines()) {
        DataTraits traits = ref.task == Task::TS_FORECASTING ? traits_for(4) : traits_for(8, 2);
        CHECK_NOTHROW(instantiate(ref.config, ref.task, traits));
    }
    CHECK_THROWS_AS(reference_config("unknown"), ValueError);
}
