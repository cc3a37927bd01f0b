#include "qaml/smo.hpp"

#include <cmath>
#include <limits>

#include "qaml/errors.hpp"

namespace qaml::models {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTau = 1e-12;
}  // namespace

SmoResult smo_solve(const Eigen::MatrixXd& K, const std::vector<double>& y,
                    const Eigen::VectorXd& p, double C, double tol, int max_iter) {
    const auto n = static_cast<Eigen::Index>(y.size());
    if (K.rows() != n || K.cols() != n || p.size() != n) {
        throw DimensionError("smo_solve: kernel/label/linear-term sizes disagree");
    }
    if (!(C > 0.0)) throw ValueError("smo_solve: C must be > 0");
    for (double v : y) {
        if (v != 1.0 && v != -1.0) throw ValueError("smo_solve: labels must be +/-1");
    }

    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd G = p;  // gradient of the objective at alpha = 0

    auto q = [&](Eigen::Index i, Eigen::Index j) { return y[static_cast<std::size_t>(i)] *
                                                          y[static_cast<std::size_t>(j)] *
                                                          K(i, j); };

    SmoResult result;
    int iter = 0;
    double violation = kInf;
    for (; iter < max_iter; ++iter) {
        // Maximal violating pair.
        double m_up = -kInf, m_low = kInf;
        Eigen::Index i = -1, j = -1;
        for (Eigen::Index t = 0; t < n; ++t) {
            const double yt = y[static_cast<std::size_t>(t)];
            const double v = -yt * G[t];
            const bool in_up = (yt > 0 && alpha[t] < C) || (yt < 0 && alpha[t] > 0);
            const bool in_low = (yt > 0 && alpha[t] > 0) || (yt < 0 && alpha[t] < C);
            if (in_up && v > m_up) {
                m_up = v;
                i = t;
            }
            if (in_low && v < m_low) {
                m_low = v;
                j = t;
            }
        }
        violation = m_up - m_low;
        if (i < 0 || j < 0 || violation <= tol) break;

        const double yi = y[static_cast<std::size_t>(i)];
        const double yj = y[static_cast<std::size_t>(j)];
        const double old_ai = alpha[i];
        const double old_aj = alpha[j];

        if (yi != yj) {
            double quad = q(i, i) + q(j, j) + 2.0 * q(i, j);
            if (quad <= 0.0) quad = kTau;
            const double delta = (-G[i] - G[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0 && alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = diff;
            } else if (diff <= 0.0 && alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0 && alpha[i] > C) {
                alpha[i] = C;
                alpha[j] = C - diff;
            } else if (diff <= 0.0 && alpha[j] > C) {
                alpha[j] = C;
                alpha[i] = C + diff;
            }
        } else {
            double quad = q(i, i) + q(j, j) - 2.0 * q(i, j);
            if (quad <= 0.0) quad = kTau;
            const double delta = (G[i] - G[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > C) {
                if (alpha[i] > C) {
                    alpha[i] = C;
                    alpha[j] = sum - C;
                } else if (alpha[j] > C) {
                    alpha[j] = C;
                    alpha[i] = sum - C;
                }
            } else {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = sum;
                } else if (alpha[i] < 0.0) {
                    alpha[i] = 0.0;
                    alpha[j] = sum;
                }
            }
        }

        const double dai = alpha[i] - old_ai;
        const double daj = alpha[j] - old_aj;
        if (dai == 0.0 && daj == 0.0) break;  // numerically stuck
        for (Eigen::Index t = 0; t < n; ++t) {
            G[t] += q(t, i) * dai + q(t, j) * daj;
        }
    }

    // Threshold from free support vectors, midpoint of the bounds otherwise.
    double upper = kInf, lower = -kInf, sum_free = 0.0;
    int n_free = 0;
    for (Eigen::Index t = 0; t < n; ++t) {
        const double yt = y[static_cast<std::size_t>(t)];
        const double yg = yt * G[t];
        if (alpha[t] >= C) {
            if (yt < 0) upper = std::min(upper, yg);
            else lower = std::max(lower, yg);
        } else if (alpha[t] <= 0.0) {
            if (yt > 0) upper = std::min(upper, yg);
            else lower = std::max(lower, yg);
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    result.rho = n_free > 0 ? sum_free / n_free : 0.5 * (upper + lower);
    result.alpha = alpha;
    result.iterations = iter;
    result.kkt_violation = std::max(violation, 0.0);
    result.converged = violation <= tol;
    return result;
}

SvcSolution svm_dual_solve(const Eigen::MatrixXd& K, const std::vector<double>& y, double C) {
    const auto n = static_cast<Eigen::Index>(y.size());
    Eigen::VectorXd p = Eigen::VectorXd::Constant(n, -1.0);
    const SmoResult r = smo_solve(K, y, p, C);
    SvcSolution s;
    s.alpha = r.alpha;
    s.bias = -r.rho;
    s.converged = r.converged;
    s.kkt_violation = r.kkt_violation;
    return s;
}

SvrSolution svr_dual_solve(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double C,
                           double epsilon, double tol) {
    if (epsilon < 0.0) throw ValueError("svr_dual_solve: epsilon must be >= 0");
    const Eigen::Index n = y.size();
    if (K.rows() != n || K.cols() != n) {
        throw DimensionError("svr_dual_solve: kernel/target sizes disagree");
    }

    // Doubled problem: variables (alpha, alpha*), labels (+1 ..., -1 ...),
    // linear term (eps - y, eps + y) on the signed variables.
    Eigen::MatrixXd K2(2 * n, 2 * n);
    K2.topLeftCorner(n, n) = K;
    K2.topRightCorner(n, n) = K;
    K2.bottomLeftCorner(n, n) = K;
    K2.bottomRightCorner(n, n) = K;

    std::vector<double> y2(static_cast<std::size_t>(2 * n));
    Eigen::VectorXd p2(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        y2[static_cast<std::size_t>(i)] = 1.0;
        y2[static_cast<std::size_t>(i + n)] = -1.0;
        p2[i] = epsilon - y[i];
        p2[i + n] = epsilon + y[i];
    }

    const SmoResult r = smo_solve(K2, y2, p2, C, tol);
    SvrSolution s;
    s.beta.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) s.beta[i] = r.alpha[i] - r.alpha[i + n];
    s.bias = -r.rho;
    s.converged = r.converged;
    return s;
}

}  // namespace qaml::models
