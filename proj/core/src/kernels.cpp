#include "qaml/kernels.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "qaml/simulator.hpp"

namespace qaml::kernels {

std::string outer_name(OuterKind k) {
    switch (k) {
        case OuterKind::GAUSSIAN: return "GAUSSIAN";
        case OuterKind::MATERN: return "MATERN";
        case OuterKind::DOT_PRODUCT: return "DOT_PRODUCT";
        case OuterKind::PAIRWISE_LINEAR: return "PAIRWISE_LINEAR";
    }
    throw ValueError("unknown outer kernel");
}

OuterKind outer_from_name(const std::string& name) {
    if (name == "GAUSSIAN") return OuterKind::GAUSSIAN;
    if (name == "MATERN") return OuterKind::MATERN;
    if (name == "DOT_PRODUCT") return OuterKind::DOT_PRODUCT;
    if (name == "PAIRWISE_LINEAR") return OuterKind::PAIRWISE_LINEAR;
    throw ValueError("unknown outer kernel: " + name);
}

std::string kernel_kind_name(KernelKind k) {
    return k == KernelKind::FQK ? "FQK" : "PQK";
}

KernelKind kernel_kind_from_name(const std::string& name) {
    if (name == "FQK") return KernelKind::FQK;
    if (name == "PQK") return KernelKind::PQK;
    throw ValueError("unknown kernel kind: " + name);
}

void OuterKernelSpec::validate() const {
    switch (kind) {
        case OuterKind::GAUSSIAN:
            if (!(gamma > 0.0)) throw ValueError("GAUSSIAN outer kernel: gamma must be > 0");
            break;
        case OuterKind::MATERN:
            if (nu != 0.5 && nu != 1.5 && nu != 2.5) {
                throw ValueError("MATERN outer kernel: nu must be one of {0.5, 1.5, 2.5}");
            }
            if (!(length > 0.0)) throw ValueError("MATERN outer kernel: length must be > 0");
            break;
        case OuterKind::DOT_PRODUCT:
            if (sigma0 < 0.0) throw ValueError("DOT_PRODUCT outer kernel: sigma0 must be >= 0");
            break;
        case OuterKind::PAIRWISE_LINEAR:
            break;
    }
}

double OuterKernelSpec::eval(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
    switch (kind) {
        case OuterKind::GAUSSIAN:
            return std::exp(-gamma * (u - v).squaredNorm());
        case OuterKind::MATERN: {
            const double r = (u - v).norm() / length;
            if (nu == 0.5) return std::exp(-r);
            if (nu == 1.5) {
                const double a = std::sqrt(3.0) * r;
                return (1.0 + a) * std::exp(-a);
            }
            const double a = std::sqrt(5.0) * r;
            return (1.0 + a + a * a / 3.0) * std::exp(-a);
        }
        case OuterKind::DOT_PRODUCT:
            return sigma0 * sigma0 + u.dot(v);
        case OuterKind::PAIRWISE_LINEAR:
            return u.dot(v);
    }
    throw ValueError("unknown outer kernel");
}

void KernelSpec::validate() const {
    encoding.validate();
    if (encoding.trainable) {
        throw ValueError("KernelSpec: encoding must not be trainable");
    }
    if (kind == KernelKind::PQK) {
        if (pqk_paulis.empty()) throw ValueError("KernelSpec: PQK requires pqk_paulis");
        for (std::size_t i = 1; i < pqk_paulis.size(); ++i) {
            if (pqk_paulis[i] <= pqk_paulis[i - 1]) {
                throw ValueError("KernelSpec: pqk_paulis must be strictly ordered X < Y < Z");
            }
        }
        outer.validate();
    }
}

namespace {

sim::StateVector encode(const KernelSpec& spec, const Eigen::VectorXd& x) {
    const auto circuit = encoding::build(spec.encoding, static_cast<int>(x.size()));
    return sim::simulate(circuit, std::span<const double>(x.data(), x.size()));
}

Eigen::VectorXd features_of_state(const KernelSpec& spec, const sim::StateVector& state) {
    const int n = spec.encoding.n_qubits;
    const auto n_paulis = spec.pqk_paulis.size();
    Eigen::VectorXd out(static_cast<Eigen::Index>(n) * static_cast<Eigen::Index>(n_paulis));
    Eigen::Index k = 0;
    for (int q = 0; q < n; ++q) {
        for (const auto p : spec.pqk_paulis) {
            out[k++] = sim::expectation(state, sim::PauliObservable::single(p, q));
        }
    }
    return out;
}

}  // namespace

Eigen::VectorXd pqk_features(const KernelSpec& spec, const Eigen::VectorXd& x) {
    spec.validate();
    if (spec.kind != KernelKind::PQK) {
        throw ValueError("pqk_features: kernel spec is not PQK");
    }
    return features_of_state(spec, encode(spec, x));
}

double kernel_entry(const KernelSpec& spec, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& x_prime) {
    spec.validate();
    if (x.size() != x_prime.size()) {
        throw DimensionError("kernel_entry: feature dimension mismatch");
    }
    if (spec.kind == KernelKind::FQK) {
        return sim::fidelity(encode(spec, x), encode(spec, x_prime));
    }
    return spec.outer.eval(pqk_features(spec, x), pqk_features(spec, x_prime));
}

GramMatrix gram(const KernelSpec& spec, const Eigen::MatrixXd& X,
                const Eigen::MatrixXd& X_prime, bool symmetric, int workers) {
    spec.validate();
    const Eigen::MatrixXd& Xp = symmetric ? X : X_prime;
    if (X.cols() != Xp.cols()) {
        throw DimensionError("gram: column counts differ");
    }
    const auto n = static_cast<std::size_t>(X.rows());
    const auto m = static_cast<std::size_t>(Xp.rows());

    GramMatrix result;
    result.symmetric = symmetric;
    result.values.resize(X.rows(), Xp.rows());

    if (spec.kind == KernelKind::FQK) {
        // Cache encoded states once per point.
        std::vector<sim::StateVector> left;
        left.reserve(n);
        for (std::size_t i = 0; i < n; ++i) left.push_back(encode(spec, X.row(i).transpose()));
        const std::vector<sim::StateVector>* right = &left;
        std::vector<sim::StateVector> right_store;
        if (!symmetric) {
            right_store.reserve(m);
            for (std::size_t j = 0; j < m; ++j) right_store.push_back(encode(spec, Xp.row(j).transpose()));
            right = &right_store;
        }
        parallel_for(n, workers, [&](std::size_t i) {
            const std::size_t j0 = symmetric ? i : 0;
            for (std::size_t j = j0; j < m; ++j) {
                result.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    sim::fidelity(left[i], (*right)[j]);
            }
        });
    } else {
        std::vector<Eigen::VectorXd> left(n);
        parallel_for(n, workers,
                     [&](std::size_t i) { left[i] = pqk_features(spec, X.row(i).transpose()); });
        const std::vector<Eigen::VectorXd>* right = &left;
        std::vector<Eigen::VectorXd> right_store;
        if (!symmetric) {
            right_store.resize(m);
            parallel_for(m, workers, [&](std::size_t j) {
                right_store[j] = pqk_features(spec, Xp.row(j).transpose());
            });
            right = &right_store;
        }
        parallel_for(n, workers, [&](std::size_t i) {
            const std::size_t j0 = symmetric ? i : 0;
            for (std::size_t j = j0; j < m; ++j) {
                result.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    spec.outer.eval(left[i], (*right)[j]);
            }
        });
    }

    if (symmetric) {
        for (Eigen::Index i = 0; i < result.values.rows(); ++i) {
            for (Eigen::Index j = 0; j < i; ++j) {
                result.values(i, j) = result.values(j, i);
            }
        }
    }
    return result;
}

GramMatrix psd_repair(const GramMatrix& K, double jitter) {
    if (K.values.rows() != K.values.cols()) {
        throw DimensionError("psd_repair: matrix must be square");
    }
    Eigen::MatrixXd sym = 0.5 * (K.values + K.values.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
    Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
    GramMatrix out;
    out.symmetric = true;
    out.values = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
    out.values = 0.5 * (out.values + out.values.transpose());
    out.values.diagonal().array() += jitter;
    return out;
}

Eigen::MatrixXd rbf_gram(const Eigen::MatrixXd& X, const Eigen::MatrixXd& X_prime,
                         double gamma) {
    if (X.cols() != X_prime.cols()) {
        throw DimensionError("rbf_gram: column counts differ");
    }
    Eigen::MatrixXd K(X.rows(), X_prime.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (Eigen::Index j = 0; j < X_prime.rows(); ++j) {
            K(i, j) = std::exp(-gamma * (X.row(i) - X_prime.row(j)).squaredNorm());
        }
    }
    return K;
}

}  // namespace qaml::kernels
