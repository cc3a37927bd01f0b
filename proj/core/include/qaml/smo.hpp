// Pairwise coordinate-ascent (SMO) solver for the SVM dual with a
// precomputed kernel matrix.
//
// Solves  min_a  1/2 a^T Q a + p^T a   s.t.  y^T a = 0,  0 <= a_i <= C,
// with Q_ij = y_i y_j K_ij, by repeatedly optimizing the maximal-violating
// pair. Stops when the KKT violation drops below `tol` or after `max_iter`
// pair updates; non-convergence returns the best iterate with a flag.

#pragma once

#include <Eigen/Dense>
#include <vector>

namespace qaml::models {

struct SmoResult {
    Eigen::VectorXd alpha;   // box-feasible dual variables
    double rho = 0.0;        // decision threshold; f(x) = sum_i y_i a_i K(x_i, x) - rho
    double kkt_violation = 0.0;
    int iterations = 0;
    bool converged = true;
};

inline constexpr double kSmoTolerance = 1e-3;
inline constexpr int kSmoMaxIterations = 10000;

// Generic solver over the signed kernel: Q_ij = y_i y_j K_ij is formed
// implicitly from `K` and the +/-1 labels `y`.
SmoResult smo_solve(const Eigen::MatrixXd& K, const std::vector<double>& y,
                    const Eigen::VectorXd& p, double C,
                    double tol = kSmoTolerance, int max_iter = kSmoMaxIterations);

// Binary C-SVC dual: y in {-1, +1}, p = -1. Returns alphas (not y-scaled)
// and intercept b with decision f(x) = sum_i alpha_i y_i K(x_i, x) + b.
struct SvcSolution {
    Eigen::VectorXd alpha;
    double bias = 0.0;
    bool converged = true;
    double kkt_violation = 0.0;
};

SvcSolution svm_dual_solve(const Eigen::MatrixXd& K, const std::vector<double>& y, double C);

// epsilon-SVR via the doubled dual. Returns beta_i = alpha_i - alpha_i^* and
// intercept b with prediction f(x) = sum_i beta_i K(x_i, x) + b.
struct SvrSolution {
    Eigen::VectorXd beta;
    double bias = 0.0;
    bool converged = true;
};

SvrSolution svr_dual_solve(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double C,
                           double epsilon, double tol = kSmoTolerance);

}  // namespace qaml::models
