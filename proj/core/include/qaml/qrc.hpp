// Quantum reservoir computing: a fixed, seeded random reservoir circuit whose
// random Pauli-string expectations feed a ridge-regression readout (one-vs-
// rest ridge with sign readout for classification).

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qaml/encoding.hpp"
#include "qaml/models.hpp"
#include "qaml/observable.hpp"

namespace qaml::models {

struct QrcConfig {
    encoding::EncodingCircuitSpec encoding;  // reservoir layout (trainable offsets frozen)
    int n_observables = 54;
    double ridge_alpha = 1e-6;
    std::uint64_t seed = 0;
    bool classification = false;
};

// Draws `m` distinct Pauli strings uniformly over all weight-1 and weight-2
// strings on n_qubits (with replacement once the pool is exhausted).
std::vector<sim::PauliObservable> random_pauli_strings(int n_qubits, int m,
                                                       std::uint64_t seed);

class QrcModel final : public Model {
public:
    explicit QrcModel(QrcConfig config);

    void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
             const FitContext& ctx) override;
    Eigen::VectorXd predict(const Eigen::MatrixXd& X, const FitContext& ctx) const override;

    std::string kind() const override { return config_.classification ? "qrc_c" : "qrc_r"; }
    nlohmann::json to_json() const override;
    static std::unique_ptr<QrcModel> from_json(const nlohmann::json& j);

    const QrcConfig& config() const { return config_; }
    // Reservoir feature matrix for the given inputs; exposed for tests.
    Eigen::MatrixXd reservoir_features(const Eigen::MatrixXd& X, const FitContext& ctx) const;

private:
    friend std::unique_ptr<Model> model_from_json(const nlohmann::json&);
    void prepare_reservoir(int n_features);

    QrcConfig config_;
    int n_features_ = 0;
    Eigen::VectorXd reservoir_theta_;                 // frozen random offsets
    std::vector<sim::PauliObservable> observables_;   // reproducible from seed
    std::vector<double> classes_;
    Eigen::MatrixXd readout_;  // (n_obs + 1) x n_outputs, last row = intercept
};

}  // namespace qaml::models
