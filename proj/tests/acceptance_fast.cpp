// Acceptance criteria 1-6, 9 and 10: simulator analytics, gradient suite,
// kernel properties, solver oracles, TPE efficacy, reference-configuration
// smoke and CLI determinism. Criteria 7 and 8 (the desk benchmark) live in
// acceptance_desk.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "acceptance_common.hpp"
#include "oracles.hpp"
#include "qaml/generators.hpp"
#include "qaml/kernel_models.hpp"
#include "qaml/kernels.hpp"
#include "qaml/metrics.hpp"
#include "qaml/pipeline.hpp"
#include "qaml/reference_configs.hpp"
#include "qaml/runner.hpp"
#include "qaml/simulator.hpp"

using namespace qaml;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Eigen::MatrixXd random_points(Rng& rng, int n, int d) {
    Eigen::MatrixXd X(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) X(i, j) = rng.uniform(-1.0, 1.0);
    }
    return X;
}

kernels::KernelSpec random_kernel_spec(Rng& rng) {
    kernels::KernelSpec spec;
    const encoding::Family families[4] = {
        encoding::Family::YZ_CX, encoding::Family::MULTI_CONTROL,
        encoding::Family::HW_EFFICIENT, encoding::Family::SEPARABLE_RX};
    spec.encoding.family = families[rng.index(4)];
    spec.encoding.n_qubits = 2 + static_cast<int>(rng.index(4));
    spec.encoding.n_layers = 1 + static_cast<int>(rng.index(3));
    spec.encoding.bandwidth = rng.uniform(0.3, 2.5);
    if (rng.uniform() < 0.5) {
        spec.kind = kernels::KernelKind::FQK;
        return spec;
    }
    spec.kind = kernels::KernelKind::PQK;
    const int subset = 1 + static_cast<int>(rng.index(7));
    if (subset & 1) spec.pqk_paulis.push_back(sim::Pauli::X);
    if (subset & 2) spec.pqk_paulis.push_back(sim::Pauli::Y);
    if (subset & 4) spec.pqk_paulis.push_back(sim::Pauli::Z);
    switch (rng.index(4)) {
        case 0:
            spec.outer.kind = kernels::OuterKind::GAUSSIAN;
            spec.outer.gamma = rng.uniform(0.1, 2.0);
            break;
        case 1:
            spec.outer.kind = kernels::OuterKind::MATERN;
            spec.outer.nu = 0.5 + static_cast<double>(rng.index(3));
            spec.outer.length = rng.uniform(0.5, 2.0);
            break;
        case 2:
            spec.outer.kind = kernels::OuterKind::DOT_PRODUCT;
            spec.outer.sigma0 = rng.uniform(0.0, 1.5);
            break;
        default:
            spec.outer.kind = kernels::OuterKind::PAIRWISE_LINEAR;
            break;
    }
    return spec;
}

struct ReferenceCase {
    std::string config_name;
    std::string generator;
};

}  // namespace

int main() {
    acceptance::Suite suite;
    using std::numbers::pi;

    suite.note(1,
               "published absolute scores are not reproduction targets (proprietary "
               "sources, 1e4-5e4 s budgets); property-based and desk-scale checks below "
               "stand in for them");

    suite.criterion(2, "simulator analytics and 8-qubit FQK Gram runtime", [&](std::string& d) {
        bool ok = true;
        for (int i = 0; i < 100; ++i) {
            const double theta = -pi + 2.0 * pi * static_cast<double>(i) / 99.0;
            sim::StateVector s(1);
            sim::apply_gate(
                s, sim::Gate::rotation(sim::GateKind::RY, 0, sim::AngleSource::from_literal(theta)),
                theta);
            const double z = sim::expectation(s, sim::PauliObservable::single(sim::Pauli::Z, 0));
            ok = ok && std::abs(z - std::cos(theta)) <= 1e-12;
        }
        sim::StateVector bell(2);
        sim::apply_gate(bell, sim::Gate::one_qubit(sim::GateKind::H, 0), 0.0);
        sim::apply_gate(bell, sim::Gate::controlled(sim::GateKind::CX, 0, 1), 0.0);
        sim::PauliObservable zz;
        zz.terms.push_back({1.0, {{0, sim::Pauli::Z}, {1, sim::Pauli::Z}}});
        ok = ok && std::abs(sim::expectation(bell, zz) - 1.0) <= 1e-12;

        kernels::KernelSpec spec;
        spec.kind = kernels::KernelKind::FQK;
        spec.encoding.family = encoding::Family::YZ_CX;
        spec.encoding.n_qubits = 8;
        spec.encoding.n_layers = 2;
        Rng rng(1);
        const Eigen::MatrixXd X = random_points(rng, 100, 8);
        const auto t0 = std::chrono::steady_clock::now();
        const kernels::GramMatrix g = kernels::gram_symmetric(spec, X);
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        ok = ok && seconds < 60.0 && g.values.rows() == 100;
        d = "100-point 8-qubit FQK Gram in " + std::to_string(seconds) + " s";
        return ok;
    });

    suite.criterion(3, "parameter-shift vs central differences (50 random 4-qubit circuits)",
                    [&](std::string& d) {
        Rng rng(33);
        double worst = 0.0;
        for (int rep = 0; rep < 50; ++rep) {
            const int n_theta = 2 + static_cast<int>(rng.index(4));
            const sim::Circuit c = oracle::random_circuit(rng, 4, 16, n_theta);
            std::vector<double> theta(static_cast<std::size_t>(n_theta));
            for (auto& t : theta) t = rng.uniform(-1.5, 1.5);
            sim::PauliObservable obs;
            obs.terms.push_back({0.8, {{0, sim::Pauli::Z}}});
            obs.terms.push_back({-0.5, {{1, sim::Pauli::X}, {3, sim::Pauli::Z}}});
            obs.terms.push_back({0.3, {{2, sim::Pauli::Y}}});

            const auto analytic = sim::param_shift_gradient(c, {}, theta, obs);
            const auto numeric = oracle::finite_difference(
                [&](const std::vector<double>& th) {
                    return sim::expectation(sim::simulate(c, {}, th), obs);
                },
                theta, 1e-5);
            for (std::size_t j = 0; j < theta.size(); ++j) {
                const double rel = std::abs(analytic[j] - numeric[j]) /
                                   std::max(1.0, std::abs(numeric[j]));
                worst = std::max(worst, rel);
            }
        }
        d = "max relative deviation " + std::to_string(worst);
        return worst <= 1e-6;
    });

    suite.criterion(4, "kernel properties over 20 random specs on 30 random points",
                    [&](std::string& d) {
        Rng rng(44);
        bool ok = true;
        int fqk_seen = 0, pqk_seen = 0;
        for (int rep = 0; rep < 20; ++rep) {
            const kernels::KernelSpec spec = random_kernel_spec(rng);
            const Eigen::MatrixXd X = random_points(rng, 30, 5);
            const kernels::GramMatrix g = kernels::gram_symmetric(spec, X);
            ok = ok && (g.values - g.values.transpose()).cwiseAbs().maxCoeff() <= 1e-10;
            if (spec.kind == kernels::KernelKind::FQK) {
                ++fqk_seen;
                for (Eigen::Index i = 0; i < 30; ++i) {
                    ok = ok && std::abs(g.values(i, i) - 1.0) <= 1e-10;
                }
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.values);
                ok = ok && eig.eigenvalues().minCoeff() >= -1e-8;
            } else {
                ++pqk_seen;
                for (Eigen::Index i = 0; i < 30; ++i) {
                    const Eigen::VectorXd f =
                        kernels::pqk_features(spec, X.row(i).transpose());
                    ok = ok && f.minCoeff() >= -1.0 - 1e-12 && f.maxCoeff() <= 1.0 + 1e-12;
                }
            }
        }
        d = std::to_string(fqk_seen) + " FQK / " + std::to_string(pqk_seen) + " PQK specs";
        return ok && fqk_seen > 0 && pqk_seen > 0;
    });

    suite.criterion(5, "solver oracles: ridge/GP vs dense inverse, SVM on separable data",
                    [&](std::string& d) {
        Rng rng(55);
        bool ok = true;
        double worst = 0.0;
        for (const int n : {10, 20, 30}) {
            Eigen::MatrixXd A = random_points(rng, n, n);
            kernels::GramMatrix K{A * A.transpose() / static_cast<double>(n), true};
            Eigen::VectorXd y(n);
            for (Eigen::Index i = 0; i < n; ++i) y[i] = rng.uniform(-1.0, 1.0);

            Eigen::MatrixXd krr_system = 0.5 * (K.values + K.values.transpose());
            krr_system.diagonal().array() += 1e-8 + 1e-3;
            const Eigen::VectorXd w = models::qkrr_fit(K, y, 1e-3);
            const Eigen::VectorXd w_oracle = oracle::gauss_jordan_inverse(krr_system) * y;
            worst = std::max(worst, (w - w_oracle).norm() / w_oracle.norm());

            Eigen::MatrixXd gpr_system = 0.5 * (K.values + K.values.transpose());
            gpr_system.diagonal().array() += 1e-8 + 1e-2;
            const models::GprSolution sol = models::qgpr_fit(K, y, 1e-2);
            const Eigen::VectorXd a_oracle = oracle::gauss_jordan_inverse(gpr_system) * y;
            worst = std::max(worst, (sol.alpha - a_oracle).norm() / a_oracle.norm());
        }
        ok = ok && worst <= 1e-8;

        // separable classification at KKT tolerance
        Eigen::MatrixXd X(24, 2);
        Eigen::VectorXd y(24);
        for (int i = 0; i < 12; ++i) {
            X(i, 0) = -2.0 + 0.3 * rng.normal();
            X(i, 1) = -2.0 + 0.3 * rng.normal();
            y[i] = -1.0;
            X(12 + i, 0) = 2.0 + 0.3 * rng.normal();
            X(12 + i, 1) = 2.0 + 0.3 * rng.normal();
            y[12 + i] = 1.0;
        }
        const Eigen::MatrixXd K = kernels::rbf_gram(X, X, 1.0);
        std::vector<double> labels(y.data(), y.data() + y.size());
        const models::SmoResult r =
            models::smo_solve(K, labels, Eigen::VectorXd::Constant(24, -1.0), 10.0);
        ok = ok && r.converged && r.kkt_violation <= 1e-3;
        const models::SvcModelState svc = models::qsvc_fit(K, y, 10.0);
        const Eigen::VectorXd pred = models::qsvc_predict(K, svc);
        ok = ok && (pred - y).cwiseAbs().maxCoeff() == 0.0;
        d = "worst dense-inverse deviation " + std::to_string(worst);
        return ok;
    });

    suite.criterion(6, "TPE vs random on the quadratic+categorical toy space (20 seeds x 50)",
                    [&](std::string& d) {
        search::SearchSpace space;
        space.add(search::Parameter::categorical("branch", {"a", "b"}));
        space.add(search::Parameter::uniform("x", 0.0, 1.0, "branch", "a"));
        space.add(search::Parameter::uniform("z", 0.0, 1.0, "branch", "b"));
        const auto loss = [](const search::Configuration& c) {
            if (c.at("branch").category == "a") {
                const double x = c.at("x").number;
                return (x - 0.3) * (x - 0.3);
            }
            const double z = c.at("z").number;
            return 0.4 + 0.5 * (z - 0.5) * (z - 0.5);
        };
        search::Budget budget;
        budget.max_trials = 50;
        const search::Objective objective =
            [&](const search::Configuration& c, const Deadline&,
                std::uint64_t) -> search::ObjectiveOutcome {
            return {loss(c), search::TrialStatus::OK};
        };

        std::vector<double> tpe_best, random_best;
        bool monotone = true;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const search::OptimizeResult r = search::optimize(space, objective, budget, seed);
            tpe_best.push_back(r.best_loss);
            double best = std::numeric_limits<double>::infinity();
            for (const auto& t : r.history) {
                if (t.loss < best) best = t.loss;
                // best-so-far is non-increasing by construction of min()
            }
            monotone = monotone && best == r.best_loss;

            Rng rng(derive_seed(seed, 0xAB));
            double rnd = std::numeric_limits<double>::infinity();
            for (int i = 0; i < 50; ++i) {
                rnd = std::min(rnd, loss(search::sample_random(space, rng)));
            }
            random_best.push_back(rnd);
        }
        std::sort(tpe_best.begin(), tpe_best.end());
        std::sort(random_best.begin(), random_best.end());
        const double tpe_median = 0.5 * (tpe_best[9] + tpe_best[10]);
        const double random_median = 0.5 * (random_best[9] + random_best[10]);
        d = "median TPE " + std::to_string(tpe_median) + " vs random " +
            std::to_string(random_median);
        return monotone && tpe_median <= random_median;
    });

    suite.criterion(9, "reference configurations fit and survive serialization",
                    [&](std::string& d) {
        const std::vector<ReferenceCase> cases = {
            {"manual_ts_classification", "tiles"},
            {"manual_image_classification", "latent"},
            {"manual_tabular_regression", "price"},
            {"manual_ts_forecasting", "engine"},
        };
        bool ok = true;
        double worst_drift = 0.0;
        for (const auto& rc : cases) {
            const pipeline::NamedConfig ref = pipeline::reference_config(rc.config_name);
            const data::GeneratedDataset gen = data::generate(rc.generator, 42, true);
            const data::DataSchema schema =
                data::infer_schema(gen.train, gen.target, gen.categorical);
            const data::Dataset train = data::materialize(gen.train, schema, true);

            pipeline::DataTraits traits;
            pipeline::TemplateOptions opts;
            opts.qnn_epochs = 10;  // smoke fit; quality is not under test here
            if (ref.task == models::Task::TS_FORECASTING) {
                traits.n_features = opts.forecast_lags;
                traits.categorical.assign(4, false);
            } else {
                traits.n_features = static_cast<int>(train.X.cols());
                traits.categorical = schema.categorical;
            }
            pipeline::Pipeline p = pipeline::instantiate(ref.config, ref.task, traits, opts);
            FitContext ctx{1, 7, Deadline{}};
            Eigen::VectorXd before;
            if (ref.task == models::Task::TS_FORECASTING) {
                p.fit_series(train.y, ctx);
                before = p.predict_series(train.y, ctx);
            } else {
                p.fit(train.X, train.y, ctx);
                before = p.predict(train.X, ctx);
            }
            const nlohmann::json doc = pipeline::serialize(p);
            pipeline::Pipeline q = pipeline::deserialize(doc);
            Eigen::VectorXd after;
            if (ref.task == models::Task::TS_FORECASTING) {
                after = q.predict_series(train.y, ctx);
            } else {
                after = q.predict(train.X, ctx);
            }
            const double drift = (after - before).cwiseAbs().maxCoeff();
            worst_drift = std::max(worst_drift, drift);
            ok = ok && drift <= 1e-12;
        }
        d = "worst round-trip drift " + std::to_string(worst_drift);
        return ok;
    });

    suite.criterion(10, "seeded single-worker fit is byte-identical across reruns",
                    [&](std::string& d) {
        const fs::path dir = fs::temp_directory_path() / "qaml_acceptance_det";
        fs::remove_all(dir);
        fs::create_directories(dir);

        // small quantum-regression problem
        {
            std::ofstream out((dir / "train.csv").string());
            out << "a,b,target\n";
            Rng rng(5);
            for (int i = 0; i < 26; ++i) {
                const double a = rng.uniform(-1.0, 1.0);
                const double b = rng.uniform(-1.0, 1.0);
                out << a << "," << b << "," << std::sin(a) + 0.5 * b << "\n";
            }
        }
        runner::FitFileRequest req;
        req.train_path = (dir / "train.csv").string();
        req.target = "target";
        req.model_out = (dir / "model.json").string();
        req.trials_out = (dir / "trials.csv").string();
        req.run.task = models::Task::TABULAR_REGRESSION;
        req.run.preset = pipeline::kPresetQuantumRegression;
        req.run.budget.max_trials = 6;
        req.run.seed = 0;
        req.run.workers = 1;
        req.run.metric = "rmse";
        req.run.tmpl.qnn_epochs = 3;

        runner::fit_files(req);
        const std::string model_a = slurp(req.model_out);
        const std::string trials_a = slurp(req.trials_out);
        runner::fit_files(req);
        const bool ok = slurp(req.model_out) == model_a && slurp(req.trials_out) == trials_a;
        d = ok ? "model.json and trials.csv identical" : "outputs differ between reruns";
        fs::remove_all(dir);
        return ok;
    });

    return suite.exit_code();
}
