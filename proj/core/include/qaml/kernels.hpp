// Fidelity and projected quantum kernels.
//
// FQK(x, x') = |<psi(x)|psi(x')>|^2. PQK applies a classical outer kernel to
// vectors of single-qubit Pauli expectations of the encoded states. Gram
// computation caches per-point work (statevectors for FQK, projected features
// for PQK), so an N x M Gram costs N + M simulations.

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "qaml/encoding.hpp"
#include "qaml/observable.hpp"
#include "qaml/parallel.hpp"

namespace qaml::kernels {

enum class OuterKind { GAUSSIAN, MATERN, DOT_PRODUCT, PAIRWISE_LINEAR };

std::string outer_name(OuterKind k);
OuterKind outer_from_name(const std::string& name);

struct OuterKernelSpec {
    OuterKind kind = OuterKind::GAUSSIAN;
    double gamma = 1.0;       // GAUSSIAN, > 0
    double nu = 1.5;          // MATERN, one of {0.5, 1.5, 2.5}
    double length = 1.0;      // MATERN, > 0
    double sigma0 = 0.0;      // DOT_PRODUCT, >= 0

    void validate() const;
    double eval(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
};

enum class KernelKind { FQK, PQK };

std::string kernel_kind_name(KernelKind k);
KernelKind kernel_kind_from_name(const std::string& name);

struct KernelSpec {
    KernelKind kind = KernelKind::FQK;
    encoding::EncodingCircuitSpec encoding;    // trainable must be false
    std::vector<sim::Pauli> pqk_paulis;        // PQK only, non-empty subset of {X,Y,Z}
    OuterKernelSpec outer;                     // PQK only

    void validate() const;
};

struct GramMatrix {
    Eigen::MatrixXd values;
    bool symmetric = false;  // set when X and X' are the same matrix
};

// Projected features: <P_i> for each qubit i (major) and each P in
// pqk_paulis (minor, in X < Y < Z order). Entries lie in [-1, 1].
Eigen::VectorXd pqk_features(const KernelSpec& spec, const Eigen::VectorXd& x);

// Single kernel value; simulates from scratch (no caching).
double kernel_entry(const KernelSpec& spec, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& x_prime);

// Full Gram matrix between the rows of X and X_prime. When `symmetric` is
// true X_prime is ignored and only the upper triangle is computed.
GramMatrix gram(const KernelSpec& spec, const Eigen::MatrixXd& X,
                const Eigen::MatrixXd& X_prime, bool symmetric = false, int workers = 1);

inline GramMatrix gram_symmetric(const KernelSpec& spec, const Eigen::MatrixXd& X,
                                 int workers = 1) {
    return gram(spec, X, X, true, workers);
}

// Symmetrizes, clips negative eigenvalues to zero and adds jitter to the
// diagonal; the result admits a Cholesky factorization.
GramMatrix psd_repair(const GramMatrix& K, double jitter = 1e-8);

// Classical RBF kernel on raw features, for the classical model pool.
Eigen::MatrixXd rbf_gram(const Eigen::MatrixXd& X, const Eigen::MatrixXd& X_prime,
                         double gamma);

}  // namespace qaml::kernels
