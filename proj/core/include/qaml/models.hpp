// Supervised predictor interface shared by all model families.

#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "qaml/deadline.hpp"
#include "json.hpp"

namespace qaml::models {

enum class Task {
    TABULAR_CLASSIFICATION,
    TABULAR_REGRESSION,
    TS_CLASSIFICATION,
    TS_FORECASTING,
};

std::string task_name(Task t);
Task task_from_name(const std::string& name);
bool is_classification(Task t);

class Model {
public:
    virtual ~Model() = default;

    virtual void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const FitContext& ctx) = 0;
    virtual Eigen::VectorXd predict(const Eigen::MatrixXd& X, const FitContext& ctx) const = 0;

    virtual std::string kind() const = 0;
    virtual nlohmann::json to_json() const = 0;

    bool fitted() const { return fitted_; }

protected:
    void require_fitted() const;
    bool fitted_ = false;
};

// Factory for deserialization; understands every concrete model kind.
std::unique_ptr<Model> model_from_json(const nlohmann::json& j);

// Sorted unique class labels of a classification target.
std::vector<double> class_labels(const Eigen::VectorXd& y);

}  // namespace qaml::models
