// Pipeline templates per task, instantiation of a configuration into a
// concrete clean -> preprocess -> predict chain, fit/predict and JSON
// serialization.
//
// Slot order is fixed: impute, outlier removal, one-hot, down-sampling, PCA,
// scaler, predictor. The scaler always sits directly before the predictor.
// TS forecasting prepends a fixed lag-4 window construction.

#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "qaml/models.hpp"
#include "qaml/search_space.hpp"
#include "qaml/transforms.hpp"

namespace qaml::pipeline {

struct DataTraits {
    int n_features = 1;
    std::vector<bool> categorical;  // per input column; empty = none
    int n_classes = 0;              // 0 for regression tasks

    bool has_categorical() const {
        for (const bool b : categorical) {
            if (b) return true;
        }
        return false;
    }
};

// Fixed (non-searched) template knobs: QNN training cost and the reservoir
// size are not part of the hyperparameter space.
struct TemplateOptions {
    int qnn_epochs = 60;
    double qnn_learning_rate = 0.1;
    int qrc_observables = 54;
    int forecast_lags = 4;
};

inline constexpr const char* kPresetQuantumClassification = "quantum_classification";
inline constexpr const char* kPresetQuantumRegression = "quantum_regression";
inline constexpr const char* kPresetClassicalClassification = "classical_classification";
inline constexpr const char* kPresetClassicalRegression = "classical_regression";
inline constexpr const char* kPresetAll = "all";

bool preset_compatible(const std::string& preset, models::Task task);

// The conditional search space for a task/preset pair. Throws on unknown or
// incompatible presets.
search::SearchSpace default_space(models::Task task, const std::string& preset,
                                  const DataTraits& traits,
                                  const TemplateOptions& opts = {});

class Pipeline {
public:
    models::Task task = models::Task::TABULAR_REGRESSION;
    search::Configuration config;            // the originating configuration
    std::vector<prep::TransformSpec> plan;   // unfitted step plan, in order
    std::unique_ptr<models::Model> model;    // unfitted or fitted predictor
    int lags = 0;                            // > 0 for TS_FORECASTING
    std::uint64_t seed = 0;
    std::string metric;

    std::vector<bool> categorical;           // input column flags at fit time
    std::vector<prep::FittedTransform> steps;

    bool fitted() const { return fitted_; }

    // Standard tasks: X is N x d, y length N. Forecasting: call fit_series.
    void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const FitContext& ctx);
    Eigen::VectorXd predict(const Eigen::MatrixXd& X, const FitContext& ctx) const;

    // TS forecasting on a univariate, time-ordered series. Predictions align
    // with series positions lags..N-1 (one-step-ahead, true history).
    void fit_series(const Eigen::VectorXd& series, const FitContext& ctx);
    Eigen::VectorXd predict_series(const Eigen::VectorXd& series, const FitContext& ctx) const;

    // Training targets in time order (forecasting), for the MASE scale.
    const Eigen::VectorXd& train_series() const { return train_series_; }

    // Deserialization hooks.
    void set_train_series(Eigen::VectorXd s) { train_series_ = std::move(s); }
    void mark_fitted() { fitted_ = true; }

private:
    Eigen::MatrixXd run_steps(const Eigen::MatrixXd& X) const;

    bool fitted_ = false;
    Eigen::VectorXd train_series_;
};

// Builds the unfitted pipeline described by `config`. Values are validated
// against type invariants (not against a search space, so hand-written
// configurations may use settings outside the default ranges).
Pipeline instantiate(const search::Configuration& config, models::Task task,
                     const DataTraits& traits, const TemplateOptions& opts = {});

inline constexpr int kPipelineSchemaVersion = 1;

nlohmann::json serialize(const Pipeline& pipeline);
Pipeline deserialize(const nlohmann::json& j);

nlohmann::json configuration_to_json(const search::Configuration& config);
search::Configuration configuration_from_json(const nlohmann::json& j);

}  // namespace qaml::pipeline
