// Quantum neural network: trainable encoding circuit, Pauli observable and a
// linear output head w * <O> + b, trained with Adam on parameter-shift
// gradients. Regression minimizes MSE; binary classification minimizes the
// logistic loss on the margin; multiclass trains one-vs-rest machines.

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qaml/encoding.hpp"
#include "qaml/models.hpp"
#include "qaml/observable.hpp"

namespace qaml::models {

enum class QnnObservableKind { PAULI_SUM, ISING };

struct QnnObservableSpec {
    QnnObservableKind kind = QnnObservableKind::ISING;
    std::vector<sim::Pauli> paulis;  // PAULI_SUM: sum of these over all qubits

    sim::PauliObservable build(int n_qubits) const;
    std::string name() const;
    static QnnObservableSpec from_name(const std::string& name);
};

struct QnnTrainConfig {
    int epochs = 300;
    double learning_rate = 0.1;
    int batch_size = 0;  // 0 = full batch
    std::uint64_t seed = 0;
};

struct QnnConfig {
    encoding::EncodingCircuitSpec encoding;  // trainable is forced to true
    QnnObservableSpec observable;
    QnnTrainConfig train;
    bool classification = false;
};

// Loss and gradients at a parameter point; exposed for gradient tests.
struct QnnLossGrad {
    double loss = 0.0;
    Eigen::VectorXd d_theta;
    double d_w = 0.0;
    double d_b = 0.0;
};

QnnLossGrad qnn_loss_and_gradient(const sim::Circuit& circuit,
                                  const sim::PauliObservable& obs,
                                  const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& theta, double w, double b,
                                  bool logistic, const Deadline* deadline = nullptr);

class QnnModel final : public Model {
public:
    explicit QnnModel(QnnConfig config);

    void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
             const FitContext& ctx) override;
    Eigen::VectorXd predict(const Eigen::MatrixXd& X, const FitContext& ctx) const override;

    std::string kind() const override { return config_.classification ? "qnn_c" : "qnn_r"; }
    nlohmann::json to_json() const override;
    static std::unique_ptr<QnnModel> from_json(const nlohmann::json& j);

    struct Head {
        Eigen::VectorXd theta;
        double w = 1.0;
        double b = 0.0;
        double initial_loss = 0.0;
        double final_loss = 0.0;
    };

    const QnnConfig& config() const { return config_; }
    const std::vector<Head>& heads() const { return heads_; }
    std::vector<Head>& mutable_heads() { return heads_; }

private:
    Eigen::VectorXd raw_output(const Eigen::MatrixXd& X, const Head& head,
                               const FitContext& ctx) const;
    Head train_binary(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const FitContext& ctx, std::uint64_t seed_salt) const;

    QnnConfig config_;
    int n_features_ = 0;
    std::vector<double> classes_;
    std::vector<Head> heads_;
};

}  // namespace qaml::models
