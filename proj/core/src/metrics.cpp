#include "qaml/metrics.hpp"

#include <cmath>
#include <map>

#include "qaml/errors.hpp"

namespace qaml::search {

namespace {
void check_lengths(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
    if (y.size() != y_hat.size()) throw DimensionError("metric: y/y_hat length mismatch");
    if (y.size() == 0) throw ValueError("metric: empty inputs");
}
}  // namespace

double accuracy(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
    check_lengths(y, y_hat);
    Eigen::Index hits = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) hits += y[i] == y_hat[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(y.size());
}

double balanced_accuracy(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
    check_lengths(y, y_hat);
    std::map<double, std::pair<Eigen::Index, Eigen::Index>> per_class;  // hits, total
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        auto& [hits, total] = per_class[y[i]];
        ++total;
        hits += y[i] == y_hat[i] ? 1 : 0;
    }
    double sum = 0.0;
    for (const auto& [label, counts] : per_class) {
        sum += static_cast<double>(counts.first) / static_cast<double>(counts.second);
    }
    return sum / static_cast<double>(per_class.size());
}

double rmse(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
    check_lengths(y, y_hat);
    return std::sqrt((y - y_hat).squaredNorm() / static_cast<double>(y.size()));
}

double mae(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
    check_lengths(y, y_hat);
    return (y - y_hat).cwiseAbs().mean();
}

double mape(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat, int* n_excluded) {
    check_lengths(y, y_hat);
    double sum = 0.0;
    Eigen::Index used = 0;
    int excluded = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y[i] == 0.0) {
            ++excluded;
            continue;
        }
        sum += std::abs((y[i] - y_hat[i]) / y[i]);
        ++used;
    }
    if (n_excluded != nullptr) *n_excluded = excluded;
    if (used == 0) throw ValueError("mape: every target is zero");
    return sum / static_cast<double>(used);
}

double mase(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat,
            const Eigen::VectorXd& y_train) {
    check_lengths(y, y_hat);
    if (y_train.size() < 2) throw ValueError("mase: training series too short");
    double scale = 0.0;
    for (Eigen::Index t = 1; t < y_train.size(); ++t) {
        scale += std::abs(y_train[t] - y_train[t - 1]);
    }
    scale /= static_cast<double>(y_train.size() - 1);
    if (!(scale > 0.0)) throw ValueError("mase: naive scale is zero (constant series)");
    return mae(y, y_hat) / scale;
}

std::string metric_name(Metric m) {
    switch (m) {
        case Metric::ACCURACY: return "accuracy";
        case Metric::BALANCED_ACCURACY: return "balanced_accuracy";
        case Metric::MAPE: return "mape";
        case Metric::MASE: return "mase";
        case Metric::RMSE: return "rmse";
        case Metric::MAE: return "mae";
    }
    throw ValueError("unknown metric");
}

Metric metric_from_name(const std::string& name) {
    if (name == "accuracy") return Metric::ACCURACY;
    if (name == "balanced_accuracy") return Metric::BALANCED_ACCURACY;
    if (name == "mape") return Metric::MAPE;
    if (name == "mase") return Metric::MASE;
    if (name == "rmse") return Metric::RMSE;
    if (name == "mae") return Metric::MAE;
    throw ValueError("unknown metric: " + name);
}

bool metric_compatible(Metric m, models::Task task) {
    const bool classification = models::is_classification(task);
    switch (m) {
        case Metric::ACCURACY:
        case Metric::BALANCED_ACCURACY:
            return classification;
        case Metric::MAPE:
        case Metric::RMSE:
        case Metric::MAE:
            return !classification;
        case Metric::MASE:
            return task == models::Task::TS_FORECASTING;
    }
    return false;
}

Metric default_metric(models::Task task) {
    switch (task) {
        case models::Task::TABULAR_CLASSIFICATION: return Metric::ACCURACY;
        case models::Task::TS_CLASSIFICATION: return Metric::BALANCED_ACCURACY;
        case models::Task::TABULAR_REGRESSION: return Metric::MAPE;
        case models::Task::TS_FORECASTING: return Metric::MASE;
    }
    throw ValueError("unknown task");
}

bool higher_is_better(Metric m) {
    return m == Metric::ACCURACY || m == Metric::BALANCED_ACCURACY;
}

double metric_score(Metric m, const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat,
                    const Eigen::VectorXd& y_train) {
    switch (m) {
        case Metric::ACCURACY: return accuracy(y, y_hat);
        case Metric::BALANCED_ACCURACY: return balanced_accuracy(y, y_hat);
        case Metric::MAPE: return mape(y, y_hat);
        case Metric::MASE: return mase(y, y_hat, y_train);
        case Metric::RMSE: return rmse(y, y_hat);
        case Metric::MAE: return mae(y, y_hat);
    }
    throw ValueError("unknown metric");
}

double metric_loss(Metric m, const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat,
                   const Eigen::VectorXd& y_train) {
    const double score = metric_score(m, y, y_hat, y_train);
    return higher_is_better(m) ? 1.0 - score : score;
}

}  // namespace qaml::search
