// Scoring metrics and their minimization-convention losses.

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qaml/models.hpp"

namespace qaml::search {

double accuracy(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat);

// Unweighted mean of per-class recalls.
double balanced_accuracy(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat);

double rmse(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat);
double mae(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat);

// Mean absolute percentage error over nonzero targets; `n_excluded` reports
// how many zero targets were skipped. Throws if every target is zero.
double mape(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat,
            int* n_excluded = nullptr);

// MAE scaled by the one-step naive forecast error on the training series.
double mase(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat,
            const Eigen::VectorXd& y_train);

enum class Metric { ACCURACY, BALANCED_ACCURACY, MAPE, MASE, RMSE, MAE };

std::string metric_name(Metric m);
Metric metric_from_name(const std::string& name);

bool metric_compatible(Metric m, models::Task task);
Metric default_metric(models::Task task);
bool higher_is_better(Metric m);

// Minimization-convention loss: 1 - score for accuracy-type metrics, the raw
// value for error metrics. `y_train` is consulted by MASE only.
double metric_loss(Metric m, const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat,
                   const Eigen::VectorXd& y_train);

// Human-facing score (accuracy rather than 1 - accuracy).
double metric_score(Metric m, const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat,
                    const Eigen::VectorXd& y_train);

}  // namespace qaml::search
