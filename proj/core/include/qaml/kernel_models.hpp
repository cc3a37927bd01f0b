// Kernel-driven estimators: SVC / SVR / KRR / GPR over either a quantum
// kernel (FQK/PQK) or a classical RBF kernel on raw features.
//
// Low-level solver entry points operate on precomputed Gram matrices; the
// KernelModel class owns the kernel definition plus the training inputs it
// needs for cross-Gram evaluation at predict time.

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "qaml/kernels.hpp"
#include "qaml/models.hpp"
#include "qaml/smo.hpp"

namespace qaml::models {

// ---------------------------------------------------------------------------
// Low-level solvers on Gram matrices.

// Ridge solve w = (repair(K) + alpha_reg I)^-1 y via Cholesky.
Eigen::VectorXd qkrr_fit(const kernels::GramMatrix& K, const Eigen::VectorXd& y,
                         double alpha_reg);
Eigen::VectorXd qkrr_predict(const Eigen::MatrixXd& K_cross, const Eigen::VectorXd& weights);

struct GprSolution {
    Eigen::MatrixXd chol_lower;  // L with L L^T = repair(K) + sigma2 I
    Eigen::VectorXd alpha;       // (K + sigma2 I)^-1 y
    double sigma2 = 0.0;
};

GprSolution qgpr_fit(const kernels::GramMatrix& K, const Eigen::VectorXd& y, double sigma2);

struct GprPrediction {
    Eigen::VectorXd mean;
    Eigen::VectorXd variance;  // clamped to >= 0
};

// K_cross is n_test x n_train; k_diag holds k(x, x) per test point.
GprPrediction qgpr_predict(const Eigen::MatrixXd& K_cross, const Eigen::VectorXd& k_diag,
                           const GprSolution& sol);

struct BinarySvm {
    Eigen::VectorXd coef;  // alpha_i * y_i
    double bias = 0.0;
    bool converged = true;
};

struct SvcModelState {
    std::vector<double> classes;      // ascending
    std::vector<BinarySvm> machines;  // one-vs-rest, aligned with classes
};

// One-vs-rest C-classification on a precomputed Gram. Throws on single-class
// input. For exactly two classes a single binary machine decides.
SvcModelState qsvc_fit(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double C,
                       double tol = kSmoTolerance);
Eigen::VectorXd qsvc_predict(const Eigen::MatrixXd& K_cross, const SvcModelState& state);

// ---------------------------------------------------------------------------
// Kernel backend: quantum kernel or classical RBF on raw features.

struct KernelBackend {
    enum class Type { QUANTUM, RBF };
    Type type = Type::QUANTUM;
    kernels::KernelSpec quantum;
    double rbf_gamma = 1.0;

    Eigen::MatrixXd gram(const Eigen::MatrixXd& X, const Eigen::MatrixXd& X_prime,
                         bool symmetric, int workers) const;
    // k(x, x) per row, needed for the GPR predictive variance.
    Eigen::VectorXd self_kernel(const Eigen::MatrixXd& X, int workers) const;

    nlohmann::json to_json() const;
    static KernelBackend from_json(const nlohmann::json& j);
};

enum class KernelModelKind { SVC, SVR, KRR, GPR };

std::string kernel_model_kind_name(KernelModelKind k);

struct KernelModelConfig {
    KernelModelKind kind = KernelModelKind::KRR;
    KernelBackend backend;
    double C = 1.0;          // SVC/SVR
    double epsilon = 0.1;    // SVR
    double alpha_reg = 1e-3; // KRR
    double sigma2 = 1e-3;    // GPR
};

class KernelModel final : public Model {
public:
    explicit KernelModel(KernelModelConfig config) : config_(std::move(config)) {}

    void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
             const FitContext& ctx) override;
    Eigen::VectorXd predict(const Eigen::MatrixXd& X, const FitContext& ctx) const override;

    std::string kind() const override;
    nlohmann::json to_json() const override;
    static std::unique_ptr<KernelModel> from_json(const nlohmann::json& j);

    const KernelModelConfig& config() const { return config_; }
    const SvcModelState& svc_state() const { return svc_; }
    // GPR predictive variance for the given inputs (in-memory fits only).
    Eigen::VectorXd gpr_variance(const Eigen::MatrixXd& X, const FitContext& ctx) const;

private:
    KernelModelConfig config_;
    Eigen::MatrixXd X_train_;
    SvcModelState svc_;
    Eigen::VectorXd weights_;  // SVR beta / KRR weights / GPR alpha
    double bias_ = 0.0;        // SVR intercept
    std::optional<GprSolution> gpr_;  // kept for variance; not serialized
};

}  // namespace qaml::models
