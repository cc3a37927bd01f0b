#include "qaml/kernel_models.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

#include "qaml/errors.hpp"

namespace qaml::models {

std::string task_name(Task t) {
    switch (t) {
        case Task::TABULAR_CLASSIFICATION: return "tabular_classification";
        case Task::TABULAR_REGRESSION: return "tabular_regression";
        case Task::TS_CLASSIFICATION: return "ts_classification";
        case Task::TS_FORECASTING: return "ts_forecasting";
    }
    throw ValueError("unknown task");
}

Task task_from_name(const std::string& name) {
    if (name == "tabular_classification") return Task::TABULAR_CLASSIFICATION;
    if (name == "tabular_regression") return Task::TABULAR_REGRESSION;
    if (name == "ts_classification") return Task::TS_CLASSIFICATION;
    if (name == "ts_forecasting") return Task::TS_FORECASTING;
    throw ValueError("unknown task: " + name);
}

bool is_classification(Task t) {
    return t == Task::TABULAR_CLASSIFICATION || t == Task::TS_CLASSIFICATION;
}

void Model::require_fitted() const {
    if (!fitted_) throw NotFittedError("model: predict called before fit");
}

std::vector<double> class_labels(const Eigen::VectorXd& y) {
    std::vector<double> labels(y.data(), y.data() + y.size());
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return labels;
}

// ---------------------------------------------------------------------------
// Low-level solvers.

namespace {

Eigen::LLT<Eigen::MatrixXd> cholesky_of_system(const kernels::GramMatrix& K, double diag_add,
                                               const char* who) {
    // Jittered-symmetrized attempt first; the eigenvalue-clipping repair is
    // only needed when the Gram is actually indefinite.
    Eigen::MatrixXd system = 0.5 * (K.values + K.values.transpose());
    system.diagonal().array() += 1e-8 + diag_add;
    Eigen::LLT<Eigen::MatrixXd> llt(system);
    if (llt.info() == Eigen::Success) return llt;

    kernels::GramMatrix repaired = kernels::psd_repair(K);
    system = repaired.values;
    system.diagonal().array() += diag_add;
    llt = Eigen::LLT<Eigen::MatrixXd>(system);
    if (llt.info() != Eigen::Success) {
        throw ConsistencyError(std::string(who) + ": Cholesky failed after PSD repair");
    }
    return llt;
}

}  // namespace

Eigen::VectorXd qkrr_fit(const kernels::GramMatrix& K, const Eigen::VectorXd& y,
                         double alpha_reg) {
    if (!(alpha_reg > 0.0)) throw ValueError("qkrr_fit: alpha_reg must be > 0");
    if (K.values.rows() != y.size()) throw DimensionError("qkrr_fit: K/y size mismatch");
    return cholesky_of_system(K, alpha_reg, "qkrr_fit").solve(y);
}

Eigen::VectorXd qkrr_predict(const Eigen::MatrixXd& K_cross, const Eigen::VectorXd& weights) {
    if (K_cross.cols() != weights.size()) {
        throw DimensionError("qkrr_predict: K_cross/weights size mismatch");
    }
    return K_cross * weights;
}

GprSolution qgpr_fit(const kernels::GramMatrix& K, const Eigen::VectorXd& y, double sigma2) {
    if (!(sigma2 > 0.0)) throw ValueError("qgpr_fit: sigma2 must be > 0");
    if (K.values.rows() != y.size()) throw DimensionError("qgpr_fit: K/y size mismatch");
    auto llt = cholesky_of_system(K, sigma2, "qgpr_fit");
    GprSolution sol;
    sol.chol_lower = llt.matrixL();
    sol.alpha = llt.solve(y);
    sol.sigma2 = sigma2;
    return sol;
}

GprPrediction qgpr_predict(const Eigen::MatrixXd& K_cross, const Eigen::VectorXd& k_diag,
                           const GprSolution& sol) {
    if (K_cross.cols() != sol.alpha.size()) {
        throw DimensionError("qgpr_predict: K_cross/alpha size mismatch");
    }
    if (k_diag.size() != K_cross.rows()) {
        throw DimensionError("qgpr_predict: k_diag length mismatch");
    }
    GprPrediction out;
    out.mean = K_cross * sol.alpha;
    out.variance.resize(K_cross.rows());
    for (Eigen::Index i = 0; i < K_cross.rows(); ++i) {
        const Eigen::VectorXd v =
            sol.chol_lower.triangularView<Eigen::Lower>().solve(K_cross.row(i).transpose());
        double var = k_diag[i] - v.squaredNorm();
        if (var < -1e-8) {
            throw ConsistencyError("qgpr_predict: variance below -1e-8");
        }
        out.variance[i] = std::max(var, 0.0);
    }
    return out;
}

SvcModelState qsvc_fit(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double C,
                       double tol) {
    SvcModelState state;
    state.classes = class_labels(y);
    if (state.classes.size() < 2) {
        throw ValueError("qsvc_fit: need at least 2 classes");
    }
    const auto n = y.size();
    // For two classes one machine suffices; one-vs-rest otherwise.
    const std::size_t n_machines = state.classes.size() == 2 ? 1 : state.classes.size();
    for (std::size_t c = 0; c < n_machines; ++c) {
        std::vector<double> bin(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) {
            bin[static_cast<std::size_t>(i)] = y[i] == state.classes[c] ? 1.0 : -1.0;
        }
        const SmoResult r =
            smo_solve(K, bin, Eigen::VectorXd::Constant(n, -1.0), C, tol);
        BinarySvm m;
        m.coef.resize(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            m.coef[i] = r.alpha[i] * bin[static_cast<std::size_t>(i)];
        }
        m.bias = -r.rho;
        m.converged = r.converged;
        state.machines.push_back(std::move(m));
    }
    return state;
}

Eigen::VectorXd qsvc_predict(const Eigen::MatrixXd& K_cross, const SvcModelState& state) {
    const Eigen::Index m = K_cross.rows();
    Eigen::VectorXd out(m);
    if (state.classes.size() == 2) {
        // Positive decision -> class[0] (the machine was trained one-vs-rest
        // for class[0]).
        const auto& svm = state.machines.at(0);
        const Eigen::VectorXd decision =
            (K_cross * svm.coef).array() + svm.bias;
        for (Eigen::Index i = 0; i < m; ++i) {
            // >= keeps the lowest class on an exact tie
            out[i] = decision[i] >= 0.0 ? state.classes[0] : state.classes[1];
        }
        return out;
    }
    Eigen::MatrixXd scores(m, static_cast<Eigen::Index>(state.machines.size()));
    for (std::size_t c = 0; c < state.machines.size(); ++c) {
        scores.col(static_cast<Eigen::Index>(c)) =
            (K_cross * state.machines[c].coef).array() + state.machines[c].bias;
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index c = 1; c < scores.cols(); ++c) {
            if (scores(i, c) > scores(i, best)) best = c;  // ties keep lowest class
        }
        out[i] = state.classes[static_cast<std::size_t>(best)];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Kernel backend.

Eigen::MatrixXd KernelBackend::gram(const Eigen::MatrixXd& X, const Eigen::MatrixXd& X_prime,
                                    bool symmetric, int workers) const {
    if (type == Type::RBF) {
        return kernels::rbf_gram(X, symmetric ? X : X_prime, rbf_gamma);
    }
    return kernels::gram(quantum, X, X_prime, symmetric, workers).values;
}

Eigen::VectorXd KernelBackend::self_kernel(const Eigen::MatrixXd& X, int workers) const {
    Eigen::VectorXd out(X.rows());
    if (type == Type::RBF) {
        out.setOnes();
        return out;
    }
    if (quantum.kind == kernels::KernelKind::FQK) {
        out.setOnes();
        return out;
    }
    parallel_for(static_cast<std::size_t>(X.rows()), workers, [&](std::size_t i) {
        const Eigen::VectorXd u =
            kernels::pqk_features(quantum, X.row(static_cast<Eigen::Index>(i)).transpose());
        out[static_cast<Eigen::Index>(i)] = quantum.outer.eval(u, u);
    });
    return out;
}

// ---------------------------------------------------------------------------
// KernelModel.

std::string kernel_model_kind_name(KernelModelKind k) {
    switch (k) {
        case KernelModelKind::SVC: return "svc";
        case KernelModelKind::SVR: return "svr";
        case KernelModelKind::KRR: return "krr";
        case KernelModelKind::GPR: return "gpr";
    }
    throw ValueError("unknown kernel model kind");
}

std::string KernelModel::kind() const {
    const char* prefix = config_.backend.type == KernelBackend::Type::QUANTUM ? "q" : "";
    return prefix + kernel_model_kind_name(config_.kind) +
           (config_.backend.type == KernelBackend::Type::RBF ? "_rbf" : "");
}

void KernelModel::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const FitContext& ctx) {
    ctx.deadline.check();
    X_train_ = X;
    const Eigen::MatrixXd K = config_.backend.gram(X, X, true, ctx.workers);
    ctx.deadline.check();
    switch (config_.kind) {
        case KernelModelKind::SVC:
            svc_ = qsvc_fit(K, y, config_.C);
            break;
        case KernelModelKind::SVR: {
            const SvrSolution s = svr_dual_solve(K, y, config_.C, config_.epsilon);
            weights_ = s.beta;
            bias_ = s.bias;
            break;
        }
        case KernelModelKind::KRR: {
            kernels::GramMatrix g{K, true};
            weights_ = qkrr_fit(g, y, config_.alpha_reg);
            break;
        }
        case KernelModelKind::GPR: {
            kernels::GramMatrix g{K, true};
            gpr_ = qgpr_fit(g, y, config_.sigma2);
            weights_ = gpr_->alpha;
            break;
        }
    }
    fitted_ = true;
}

Eigen::VectorXd KernelModel::predict(const Eigen::MatrixXd& X, const FitContext& ctx) const {
    require_fitted();
    const Eigen::MatrixXd K_cross = config_.backend.gram(X, X_train_, false, ctx.workers);
    switch (config_.kind) {
        case KernelModelKind::SVC:
            return qsvc_predict(K_cross, svc_);
        case KernelModelKind::SVR:
            return (K_cross * weights_).array() + bias_;
        case KernelModelKind::KRR:
        case KernelModelKind::GPR:
            return K_cross * weights_;
    }
    throw ValueError("unknown kernel model kind");
}

Eigen::VectorXd KernelModel::gpr_variance(const Eigen::MatrixXd& X,
                                          const FitContext& ctx) const {
    require_fitted();
    if (!gpr_) {
        throw NotFittedError("gpr_variance: available only on in-memory GPR fits");
    }
    const Eigen::MatrixXd K_cross = config_.backend.gram(X, X_train_, false, ctx.workers);
    const Eigen::VectorXd k_diag = config_.backend.self_kernel(X, ctx.workers);
    return qgpr_predict(K_cross, k_diag, *gpr_).variance;
}

}  // namespace qaml::models
