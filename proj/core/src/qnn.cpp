#include "qaml/qnn.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "qaml/parallel.hpp"
#include "qaml/rng.hpp"
#include "qaml/simulator.hpp"

namespace qaml::models {

sim::PauliObservable QnnObservableSpec::build(int n_qubits) const {
    if (kind == QnnObservableKind::ISING) return sim::PauliObservable::ising(n_qubits);
    if (paulis.empty()) throw ValueError("QnnObservableSpec: PAULI_SUM needs paulis");
    sim::PauliObservable o;
    for (int q = 0; q < n_qubits; ++q) {
        for (const auto p : paulis) o.terms.push_back({1.0, {{q, p}}});
    }
    return o;
}

std::string QnnObservableSpec::name() const {
    if (kind == QnnObservableKind::ISING) return "ISING";
    std::string s;
    for (const auto p : paulis) s += sim::pauli_char(p);
    return s;
}

QnnObservableSpec QnnObservableSpec::from_name(const std::string& name) {
    QnnObservableSpec spec;
    if (name == "ISING") {
        spec.kind = QnnObservableKind::ISING;
        return spec;
    }
    spec.kind = QnnObservableKind::PAULI_SUM;
    for (const char c : name) {
        switch (c) {
            case 'X': spec.paulis.push_back(sim::Pauli::X); break;
            case 'Y': spec.paulis.push_back(sim::Pauli::Y); break;
            case 'Z': spec.paulis.push_back(sim::Pauli::Z); break;
            default: throw ValueError("QnnObservableSpec: bad name " + name);
        }
    }
    if (spec.paulis.empty()) throw ValueError("QnnObservableSpec: bad name " + name);
    return spec;
}

QnnLossGrad qnn_loss_and_gradient(const sim::Circuit& circuit,
                                  const sim::PauliObservable& obs,
                                  const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& theta, double w, double b,
                                  bool logistic, const Deadline* deadline) {
    const auto n = X.rows();
    QnnLossGrad out;
    out.d_theta = Eigen::VectorXd::Zero(theta.size());
    const std::span<const double> theta_span(theta.data(),
                                             static_cast<std::size_t>(theta.size()));
    for (Eigen::Index i = 0; i < n; ++i) {
        if (deadline != nullptr) deadline->check();
        const Eigen::VectorXd xi = X.row(i).transpose();
        const std::span<const double> x_span(xi.data(), static_cast<std::size_t>(xi.size()));
        const double e = sim::expectation(sim::simulate(circuit, x_span, theta_span), obs);
        const double f = w * e + b;
        double dldf;
        if (logistic) {
            // log(1 + exp(-y f)) with y in {-1, +1}
            const double margin = y[i] * f;
            out.loss += margin > 0.0 ? std::log1p(std::exp(-margin))
                                     : -margin + std::log1p(std::exp(margin));
            dldf = -y[i] / (1.0 + std::exp(margin));
        } else {
            const double r = f - y[i];
            out.loss += r * r;
            dldf = 2.0 * r;
        }
        out.d_w += dldf * e;
        out.d_b += dldf;
        if (theta.size() > 0 && w != 0.0) {
            const auto de = sim::param_shift_gradient(circuit, x_span, theta_span, obs);
            for (Eigen::Index j = 0; j < theta.size(); ++j) {
                out.d_theta[j] += dldf * w * de[static_cast<std::size_t>(j)];
            }
        }
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    out.loss *= inv_n;
    out.d_theta *= inv_n;
    out.d_w *= inv_n;
    out.d_b *= inv_n;
    return out;
}

QnnModel::QnnModel(QnnConfig config) : config_(std::move(config)) {
    config_.encoding.trainable = true;
    config_.encoding.validate();
}

Eigen::VectorXd QnnModel::raw_output(const Eigen::MatrixXd& X, const Head& head,
                                     const FitContext& ctx) const {
    const auto circuit = encoding::build(config_.encoding, n_features_);
    const auto obs = config_.observable.build(config_.encoding.n_qubits);
    const std::span<const double> theta(head.theta.data(),
                                        static_cast<std::size_t>(head.theta.size()));
    Eigen::VectorXd out(X.rows());
    parallel_for(static_cast<std::size_t>(X.rows()), ctx.workers, [&](std::size_t i) {
        const Eigen::VectorXd xi = X.row(static_cast<Eigen::Index>(i)).transpose();
        const std::span<const double> x(xi.data(), static_cast<std::size_t>(xi.size()));
        out[static_cast<Eigen::Index>(i)] =
            head.w * sim::expectation(sim::simulate(circuit, x, theta), obs) + head.b;
    });
    return out;
}

QnnModel::Head QnnModel::train_binary(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                      const FitContext& ctx, std::uint64_t seed_salt) const {
    const auto circuit = encoding::build(config_.encoding, n_features_);
    const auto obs = config_.observable.build(config_.encoding.n_qubits);
    const int n_theta = circuit.n_trainable;

    Rng rng(derive_seed(config_.train.seed ^ ctx.seed, seed_salt));
    Head head;
    head.theta.resize(n_theta);
    for (Eigen::Index j = 0; j < n_theta; ++j) {
        head.theta[j] = rng.uniform(-std::numbers::pi / 8.0, std::numbers::pi / 8.0);
    }
    head.w = 1.0;
    head.b = config_.classification ? 0.0 : y.mean();

    // Adam state over (theta, w, b)
    const Eigen::Index dim = n_theta + 2;
    Eigen::VectorXd m = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    constexpr double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
    const double lr = config_.train.learning_rate;

    const int batch = config_.train.batch_size;
    std::vector<Eigen::Index> order(static_cast<std::size_t>(X.rows()));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Eigen::Index>(i);

    Head best = head;
    double best_loss = std::numeric_limits<double>::infinity();
    double t = 0.0;
    double lr_now = lr;

    for (int epoch = 0; epoch <= config_.train.epochs; ++epoch) {
        ctx.deadline.check();
        const QnnLossGrad full = qnn_loss_and_gradient(circuit, obs, X, y, head.theta,
                                                       head.w, head.b,
                                                       config_.classification,
                                                       &ctx.deadline);
        if (!std::isfinite(full.loss)) {
            throw ValueError("qnn: non-finite training loss");
        }
        if (epoch == 0) best.initial_loss = full.loss;
        if (full.loss < best_loss) {
            best_loss = full.loss;
            best.theta = head.theta;
            best.w = head.w;
            best.b = head.b;
        }
        if (epoch == config_.train.epochs) break;
        // cosine decay lets Adam settle instead of orbiting the optimum
        lr_now = lr * 0.5 *
                 (1.0 + std::cos(std::numbers::pi * static_cast<double>(epoch) /
                                 static_cast<double>(config_.train.epochs)));

        auto adam_step = [&](const Eigen::VectorXd& g_theta, double g_w, double g_b) {
            t += 1.0;
            Eigen::VectorXd g(dim);
            g.head(n_theta) = g_theta;
            g[n_theta] = g_w;
            g[n_theta + 1] = g_b;
            m = beta1 * m + (1.0 - beta1) * g;
            v = beta2 * v + (1.0 - beta2) * g.cwiseProduct(g);
            const double corr1 = 1.0 - std::pow(beta1, t);
            const double corr2 = 1.0 - std::pow(beta2, t);
            for (Eigen::Index j = 0; j < dim; ++j) {
                const double step =
                    lr_now * (m[j] / corr1) / (std::sqrt(v[j] / corr2) + adam_eps);
                if (j < n_theta) head.theta[j] -= step;
                else if (j == n_theta) head.w -= step;
                else head.b -= step;
            }
        };

        if (batch <= 0 || batch >= X.rows()) {
            adam_step(full.d_theta, full.d_w, full.d_b);
        } else {
            rng.shuffle(order);
            for (Eigen::Index start = 0; start < X.rows(); start += batch) {
                ctx.deadline.check();
                const Eigen::Index count = std::min<Eigen::Index>(batch, X.rows() - start);
                Eigen::MatrixXd Xb(count, X.cols());
                Eigen::VectorXd yb(count);
                for (Eigen::Index r = 0; r < count; ++r) {
                    Xb.row(r) = X.row(order[static_cast<std::size_t>(start + r)]);
                    yb[r] = y[order[static_cast<std::size_t>(start + r)]];
                }
                const QnnLossGrad g = qnn_loss_and_gradient(circuit, obs, Xb, yb, head.theta,
                                                            head.w, head.b,
                                                            config_.classification,
                                                            &ctx.deadline);
                if (!std::isfinite(g.loss)) throw ValueError("qnn: non-finite batch loss");
                adam_step(g.d_theta, g.d_w, g.d_b);
            }
        }
    }
    best.final_loss = best_loss;
    return best;
}

void QnnModel::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   const FitContext& ctx) {
    n_features_ = static_cast<int>(X.cols());
    heads_.clear();
    classes_.clear();
    if (!config_.classification) {
        heads_.push_back(train_binary(X, y, ctx, 0));
    } else {
        classes_ = class_labels(y);
        if (classes_.size() < 2) throw ValueError("qnn: need at least 2 classes");
        const std::size_t n_machines = classes_.size() == 2 ? 1 : classes_.size();
        for (std::size_t c = 0; c < n_machines; ++c) {
            Eigen::VectorXd bin(y.size());
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                bin[i] = y[i] == classes_[c] ? 1.0 : -1.0;
            }
            heads_.push_back(train_binary(X, bin, ctx, c + 1));
        }
    }
    fitted_ = true;
}

Eigen::VectorXd QnnModel::predict(const Eigen::MatrixXd& X, const FitContext& ctx) const {
    require_fitted();
    if (!config_.classification) return raw_output(X, heads_[0], ctx);

    if (classes_.size() == 2) {
        const Eigen::VectorXd f = raw_output(X, heads_[0], ctx);
        Eigen::VectorXd out(X.rows());
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            out[i] = f[i] >= 0.0 ? classes_[0] : classes_[1];
        }
        return out;
    }
    Eigen::MatrixXd scores(X.rows(), static_cast<Eigen::Index>(heads_.size()));
    for (std::size_t c = 0; c < heads_.size(); ++c) {
        scores.col(static_cast<Eigen::Index>(c)) = raw_output(X, heads_[c], ctx);
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
