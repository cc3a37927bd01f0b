#include "qaml/reference_configs.hpp"

#include "qaml/errors.hpp"

namespace qaml::pipeline {

using models::Task;
using search::Configuration;
using search::ParamValue;

namespace {

ParamValue num(double v) { return ParamValue::num(v); }
ParamValue cat(const char* v) { return ParamValue::cat(v); }

}  // namespace

std::vector<NamedConfig> best_pipeline_presets() {
    std::vector<NamedConfig> out;

    // Vibration-tile classification: PCA, [-1,1] scaling, FQK SVC on 8 qubits.
    out.push_back({"best_ts_classification",
                   Task::TS_CLASSIFICATION,
                   Configuration{
                       {"clean.impute", cat("off")},
                       {"clean.outlier", cat("off")},
                       {"prep.downsample", cat("1.0")},
                       {"prep.pca", cat("on")},
                       {"prep.pca.k", num(8)},
                       {"prep.scaler", cat("MINMAX_SYM")},
                       {"model", cat("qsvc")},
                       {"qsvc.enc.family", cat("YZ_CX")},
                       {"qsvc.enc.qubits", num(8)},
                       {"qsvc.enc.layers", num(1)},
                       {"qsvc.enc.bandwidth", num(1.0)},
                       {"qsvc.kernel", cat("FQK")},
                       {"qsvc.C", num(10.0)},
                   }});

    // Latent-image classification: standardized inputs, Matern-PQK SVC with
    // {X, Z} observables on 8 qubits, 2 layers.
    out.push_back({"best_image_classification",
                   Task::TABULAR_CLASSIFICATION,
                   Configuration{
                       {"clean.impute", cat("off")},
                       {"clean.outlier", cat("off")},
                       {"prep.downsample", cat("1.0")},
                       {"prep.pca", cat("off")},
                       {"prep.scaler", cat("STANDARDIZE")},
                       {"model", cat("qsvc")},
                       {"qsvc.enc.family", cat("MULTI_CONTROL")},
                       {"qsvc.enc.qubits", num(8)},
                       {"qsvc.enc.layers", num(2)},
                       {"qsvc.enc.bandwidth", num(1.0)},
                       {"qsvc.kernel", cat("PQK")},
                       {"qsvc.pqk.paulis", cat("XZ")},
                       {"qsvc.pqk.outer", cat("MATERN")},
                       {"qsvc.pqk.outer.nu", cat("1.5")},
                       {"qsvc.pqk.outer.length", num(1.0)},
                       {"qsvc.C", num(10.0)},
                   }});

    // Tabular price regression: one-hot, [-1,1] scaling, dot-product-PQK KRR
    // with {X, Y, Z} observables on 8 qubits, 3 layers.
    out.push_back({"best_tabular_regression",
                   Task::TABULAR_REGRESSION,
                   Configuration{
                       {"clean.impute", cat("off")},
                       {"clean.outlier", cat("off")},
                       {"clean.one_hot", cat("on")},
                       {"prep.downsample", cat("1.0")},
                       {"prep.pca", cat("off")},
                       {"prep.scaler", cat("MINMAX_SYM")},
                       {"model", cat("qkrr")},
                       {"qkrr.enc.family", cat("MULTI_CONTROL")},
                       {"qkrr.enc.qubits", num(8)},
                       {"qkrr.enc.layers", num(3)},
                       {"qkrr.enc.bandwidth", num(1.0)},
                       {"qkrr.kernel", cat("PQK")},
                       {"qkrr.pqk.paulis", cat("XYZ")},
                       {"qkrr.pqk.outer", cat("DOT_PRODUCT")},
                       {"qkrr.pqk.outer.sigma0", num(1.0)},
                       {"qkrr.alpha", num(1e-4)},
                   }});

    // Engine forecasting: [-1,1] scaling, pairwise-PQK GPR with {X, Y}
    // observables on 8 qubits, 3 layers.
    out.push_back({"best_ts_forecasting",
                   Task::TS_FORECASTING,
                   Configuration{
                       {"clean.impute", cat("off")},
                       {"clean.outlier", cat("off")},
                       {"prep.downsample", cat("1.0")},
                       {"prep.pca", cat("off")},
                       {"prep.scaler", cat("MINMAX_SYM")},
                       {"model", cat("qgpr")},
                       {"qgpr.enc.family", cat("YZ_CX")},
                       {"qgpr.enc.qubits", num(8)},
                       {"qgpr.enc.layers", num(3)},
                       {"qgpr.enc.bandwidth", num(1.0)},
                       {"qgpr.kernel", cat("PQK")},
                       {"qgpr.pqk.paulis", cat("XY")},
                       {"qgpr.pqk.outer", cat("PAIRWISE_LINEAR")},
                       {"qgpr.sigma2", num(1e-4)},
                   }});
    return out;
}

std::vector<NamedConfig> manual_baselines() {
    std::vector<NamedConfig> out;

    // PQK SVC, 5 qubits / 6 layers, PCA to 5 components, [-1,1] scaling.
    out.push_back({"manual_ts_classification",
                   Task::TS_CLASSIFICATION,
                   Configuration{
                       {"clean.impute", cat("off")},
                       {"clean.outlier", cat("off")},
                       {"prep.downsample", cat("1.0")},
                       {"prep.pca", cat("on")},
                       {"prep.pca.k", num(5)},
                       {"prep.scaler", cat("MINMAX_SYM")},
                       {"model", cat("qsvc")},
                       {"qsvc.enc.family", cat("YZ_CX")},
                       {"qsvc.enc.qubits", num(5)},
                       {"qsvc.enc.layers", num(6)},
                       {"qsvc.enc.bandwidth", num(1.0)},
                       {"qsvc.kernel", cat("PQK")},
                       {"qsvc.pqk.paulis", cat("XYZ")},
                       {"qsvc.pqk.outer", cat("GAUSSIAN")},
                       {"qsvc.pqk.outer.gamma", num(0.5)},
                       {"qsvc.C", num(100.0)},
                   }});

    // Ising-cost QNN classifier on 8 qubits.
    out.push_back({"manual_image_classification",
                   Task::TABULAR_CLASSIFICATION,
                   Configuration{
                       {"clean.impute", cat("off")},
                       {"clean.outlier", cat("off")},
                       {"prep.downsample", cat("1.0")},
                       {"prep.pca", cat("off")},
                       {"prep.scaler", cat("MINMAX_SYM")},
                       {"model", cat("qnn_c")},
                       {"qnn_c.enc.family", cat("HW_EFFICIENT")},
                       {"qnn_c.enc.qubits", num(8)},
                       {"qnn_c.enc.layers", num(2)},
                       {"qnn_c.enc.bandwidth", num(1.0)},
                       {"qnn_c.observable", cat("ISING")},
                   }});

    // FQK SVR on 15 qubits (one-hot doubles the width), [-1,1] scaling.
    out.push_back({"manual_tabular_regression",
                   Task::TABULAR_REGRESSION,
                   Configuration{
                       {"clean.impute", cat("off")},
                       {"clean.outlier", cat("off")},
                       {"clean.one_hot", cat("on")},
                       {"prep.downsample", cat("1.0")},
                       {"prep.pca", cat("off")},
                       {"prep.scaler", cat("MINMAX_SYM")},
                       {"model", cat("qsvr")},
                       {"qsvr.enc.family", cat("SEPARABLE_RX")},
                       {"qsvr.enc.qubits", num(15)},
                       {"qsvr.enc.layers", num(1)},
                       {"qsvr.enc.bandwidth", num(1.0)},
                       {"qsvr.kernel", cat("FQK")},
                       {"qsvr.C", num(100.0)},
                       {"qsvr.epsilon", num(0.01)},
                   }});

    // 4-qubit reservoir regressor with 54 random measurement operators.
    out.push_back({"manual_ts_forecasting",
                   Task::TS_FORECASTING,
                   Configuration{
                       {"clean.impute", cat("off")},
                       {"clean.outlier", cat("off")},
                       {"prep.downsample", cat("1.0")},
                       {"prep.pca", cat("off")},
                       {"prep.scaler", cat("MINMAX_SYM")},
                       {"model", cat("qrc_r")},
                       {"qrc_r.enc.family", cat("HW_EFFICIENT")},
                       {"qrc_r.enc.qubits", num(4)},
                       {"qrc_r.enc.layers", num(2)},
                       {"qrc_r.enc.bandwidth", num(1.0)},
                       {"qrc_r.alpha", num(1e-6)},
                   }});
    return out;
}

NamedConfig reference_config(const std::string& name) {
    for (const auto& c : best_pipeline_presets()) {
        if (c.name == name) return c;
    }
    for (const auto& c : manual_baselines()) {
        if (c.name == name) return c;
    }
    throw ValueError("unknown reference configuration: " + name);
}

}  // namespace qaml::pipeline
