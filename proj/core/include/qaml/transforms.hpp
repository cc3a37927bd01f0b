// Data cleaning and quantum-oriented preprocessing with fit/transform
// semantics. Statistics are computed on the fit rows only; row-dropping
// transforms (outlier removal, down-sampling) act at fit time and are the
// identity at predict time.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace qaml::prep {

enum class TransformKind {
    IMPUTE,
    ONE_HOT,
    OUTLIER_IQR,
    MINMAX_SYM,
    STANDARDIZE,
    PCA,
    DOWNSAMPLE,
};

std::string transform_kind_name(TransformKind k);
TransformKind transform_kind_from_name(const std::string& name);

enum class ImputeStrategy { MEAN, MEDIAN, MODE };

std::string impute_strategy_name(ImputeStrategy s);
ImputeStrategy impute_strategy_from_name(const std::string& name);

struct TransformSpec {
    TransformKind kind = TransformKind::MINMAX_SYM;
    ImputeStrategy impute = ImputeStrategy::MEAN;
    double iqr_k = 3.0;              // OUTLIER_IQR
    int pca_components = 2;          // PCA
    double downsample_ratio = 1.0;   // DOWNSAMPLE, in (0, 1]
    std::uint64_t seed = 0;          // DOWNSAMPLE row choice
};

// Fitted state for any kind; `kind` discriminates which fields are live.
class FittedTransform {
public:
    TransformSpec spec;
    int n_in = 0;
    int n_out = 0;
    std::vector<bool> categorical_in;   // flags at fit time
    std::vector<bool> categorical_out;  // flags after this step

    Eigen::VectorXd col_a;  // impute fills / min / mean
    Eigen::VectorXd col_b;  // max / std
    std::vector<std::vector<double>> categories;  // ONE_HOT per input column
    Eigen::MatrixXd components;     // PCA, k x d
    Eigen::VectorXd center;         // PCA column means
    Eigen::VectorXd singular_values;

    // Predict-path application; never drops rows. Throws on schema mismatch.
    Eigen::MatrixXd transform(const Eigen::MatrixXd& X) const;

    // PCA only: back-projection of transformed rows.
    Eigen::MatrixXd pca_inverse(const Eigen::MatrixXd& T) const;

    // PCA only: fraction of variance captured per component.
    Eigen::VectorXd explained_variance_ratio() const;

    nlohmann::json to_json() const;
    static FittedTransform from_json(const nlohmann::json& j);
};

struct FitResult {
    FittedTransform fitted;
    Eigen::MatrixXd X;          // transformed fit rows (post-drop where applicable)
    Eigen::VectorXd y;          // targets aligned with X
    std::vector<bool> row_mask; // OUTLIER_IQR / DOWNSAMPLE: kept fit rows
};

// Fits on (X, y) and returns the transformed training data. `categorical`
// flags which input columns hold category codes.
FitResult fit(const TransformSpec& spec, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
              const std::vector<bool>& categorical);

// Lag-window construction: row t = (y_{t-lags}, ..., y_{t-1}), target y_t.
struct WindowedSeries {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
};
WindowedSeries sliding_window(const Eigen::VectorXd& series, int lags);

}  // namespace qaml::prep
