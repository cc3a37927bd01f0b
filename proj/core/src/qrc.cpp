#include "qaml/qrc.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <numbers>

#include "qaml/parallel.hpp"
#include "qaml/rng.hpp"
#include "qaml/simulator.hpp"

namespace qaml::models {

std::vector<sim::PauliObservable> random_pauli_strings(int n_qubits, int m,
                                                       std::uint64_t seed) {
    if (m < 1) throw ValueError("random_pauli_strings: m must be >= 1");
    // Enumerate the pool: 3n weight-1 strings plus 9*C(n,2) weight-2 strings.
    struct Entry {
        int q1, q2;          // q2 < 0 for weight-1
        sim::Pauli p1, p2;
    };
    std::vector<Entry> pool;
    const sim::Pauli paulis[3] = {sim::Pauli::X, sim::Pauli::Y, sim::Pauli::Z};
    for (int q = 0; q < n_qubits; ++q) {
        for (const auto p : paulis) pool.push_back({q, -1, p, p});
    }
    for (int q1 = 0; q1 < n_qubits; ++q1) {
        for (int q2 = q1 + 1; q2 < n_qubits; ++q2) {
            for (const auto p1 : paulis) {
                for (const auto p2 : paulis) pool.push_back({q1, q2, p1, p2});
            }
        }
    }

    Rng rng(derive_seed(seed, 0xC0FFEEULL));
    std::vector<std::size_t> picks;
    if (static_cast<std::size_t>(m) <= pool.size()) {
        // Without replacement: partial Fisher-Yates over index list.
        std::vector<std::size_t> idx(pool.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        for (int k = 0; k < m; ++k) {
            const std::size_t j = k + rng.index(idx.size() - static_cast<std::size_t>(k));
            std::swap(idx[static_cast<std::size_t>(k)], idx[j]);
            picks.push_back(idx[static_cast<std::size_t>(k)]);
        }
    } else {
        for (int k = 0; k < m; ++k) picks.push_back(rng.index(pool.size()));
    }

    std::vector<sim::PauliObservable> out;
    out.reserve(picks.size());
    for (const auto i : picks) {
        const Entry& e = pool[i];
        sim::PauliTerm term;
        term.coefficient = 1.0;
        term.factors[e.q1] = e.p1;
        if (e.q2 >= 0) term.factors[e.q2] = e.p2;
        sim::PauliObservable obs;
        obs.terms.push_back(std::move(term));
        out.push_back(std::move(obs));
    }
    return out;
}

QrcModel::QrcModel(QrcConfig config) : config_(std::move(config)) {
    if (config_.n_observables < 1) throw ValueError("qrc: n_observables must be >= 1");
    config_.encoding.trainable = true;  // reservoir uses frozen random offsets
    config_.encoding.validate();
}

void QrcModel::prepare_reservoir(int n_features) {
    n_features_ = n_features;
    const int n_theta = encoding::trainable_count(config_.encoding, n_features);
    Rng rng(derive_seed(config_.seed, 0x5EEDULL));
    reservoir_theta_.resize(n_theta);
    for (Eigen::Index j = 0; j < n_theta; ++j) {
        reservoir_theta_[j] = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    observables_ =
        random_pauli_strings(config_.encoding.n_qubits, config_.n_observables, config_.seed);
}

Eigen::MatrixXd QrcModel::reservoir_features(const Eigen::MatrixXd& X,
                                             const FitContext& ctx) const {
    const auto circuit = encoding::build(config_.encoding, n_features_);
    const std::span<const double> theta(reservoir_theta_.data(),
                                        static_cast<std::size_t>(reservoir_theta_.size()));
    Eigen::MatrixXd F(X.rows(), static_cast<Eigen::Index>(observables_.size()));
    parallel_for(static_cast<std::size_t>(X.rows()), ctx.workers, [&](std::size_t i) {
        const Eigen::VectorXd xi = X.row(static_cast<Eigen::Index>(i)).transpose();
        const std::span<const double> x(xi.data(), static_cast<std::size_t>(xi.size()));
        const auto state = sim::simulate(circuit, x, theta);
        for (std::size_t k = 0; k < observables_.size(); ++k) {
            F(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                sim::expectation(state, observables_[k]);
        }
    });
    return F;
}

namespace {

// Ridge with unpenalized intercept: solve for [w; b] minimizing
// ||F w + b - y||^2 + alpha ||w||^2.
Eigen::VectorXd ridge_solve(const Eigen::MatrixXd& F, const Eigen::VectorXd& y,
                            double alpha) {
    const Eigen::Index d = F.cols();
    Eigen::MatrixXd A(d + 1, d + 1);
    A.topLeftCorner(d, d) = F.transpose() * F;
    A.topLeftCorner(d, d).diagonal().array() += alpha;
    A.topRightCorner(d, 1) = F.colwise().sum().transpose();
    A.bottomLeftCorner(1, d) = F.colwise().sum();
    A(d, d) = static_cast<double>(F.rows());
    Eigen::VectorXd rhs(d + 1);
    rhs.head(d) = F.transpose() * y;
    rhs[d] = y.sum();
    // LDLT tolerates the semidefinite intercept block
    return A.ldlt().solve(rhs);
}

}  // namespace

void QrcModel::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   const FitContext& ctx) {
    ctx.deadline.check();
    prepare_reservoir(static_cast<int>(X.cols()));
    const Eigen::MatrixXd F = reservoir_features(X, ctx);
    ctx.deadline.check();

    classes_.clear();
    if (!config_.classification) {
        readout_ = ridge_solve(F, y, config_.ridge_alpha);
    } else {
        classes_ = class_labels(y);
        if (classes_.size() < 2) throw ValueError("qrc: need at least 2 classes");
        const std::size_t n_machines = classes_.size() == 2 ? 1 : classes_.size();
        readout_.resize(F.cols() + 1, static_cast<Eigen::Index>(n_machines));
        for (std::size_t c = 0; c < n_machines; ++c) {
            Eigen::VectorXd bin(y.size());
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                bin[i] = y[i] == classes_[c] ? 1.0 : -1.0;
            }
            readout_.col(static_cast<Eigen::Index>(c)) =
                ridge_solve(F, bin, config_.ridge_alpha);
        }
    }
    fitted_ = true;
}

Eigen::VectorXd QrcModel::predict(const Eigen::MatrixXd& X, const FitContext& ctx) const {
    require_fitted();
    const Eigen::MatrixXd F = reservoir_features(X, ctx);
    const Eigen::Index d = F.cols();

    if (!config_.classification) {
        return F * readout_.col(0).head(d) + Eigen::VectorXd::Constant(X.rows(), readout_(d, 0));
    }
    if (classes_.size() == 2) {
        Eigen::VectorXd score = F * readout_.col(0).head(d);
        score.array() += readout_(d, 0);
        Eigen::VectorXd out(X.rows());
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            out[i] = score[i] >= 0.0 ? classes_[0] : classes_[1];
        }
        return out;
    }
    Eigen::MatrixXd scores(X.rows(), readout_.cols());
    for (Eigen::Index c = 0; c < readout_.cols(); ++c) {
        scores.col(c) = F * readout_.col(c).head(d);
        scores.col(c).array() += readout_(d, c);
    }
    Eigen::VectorXd out(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index c = 1; c < scores.cols(); ++c) {
            if (scores(i, c) > scores(i, best)) best = c;
        }
        out[i] = classes_[static_cast<std::size_t>(best)];
    }
    return out;
}

}  // namespace qaml::models
