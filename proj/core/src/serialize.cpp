// JSON (de)serialization for fitted transforms, models and pipelines.
// Schema version 1; documents round-trip loss-free (nlohmann emits
// shortest-exact decimal for doubles).

#include <string>

#include "qaml/errors.hpp"
#include "qaml/kernel_models.hpp"
#include "qaml/pipeline.hpp"
#include "qaml/qnn.hpp"
#include "qaml/qrc.hpp"
#include "qaml/transforms.hpp"

namespace qaml {

namespace {

using nlohmann::json;

json vec_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Eigen::VectorXd vec_from_json(const json& a) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
    Eigen::Index i = 0;
    for (const auto& x : a) v[i++] = x.get<double>();
    return v;
}

json mat_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd mat_from_json(const json& a, Eigen::Index expect_cols = -1) {
    const auto rows = static_cast<Eigen::Index>(a.size());
    if (rows == 0) return Eigen::MatrixXd(0, std::max<Eigen::Index>(expect_cols, 0));
    const auto cols = static_cast<Eigen::Index>(a.at(0).size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = a.at(static_cast<std::size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw SchemaError("matrix: ragged rows");
        }
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
        }
    }
    return m;
}

json bools_to_json(const std::vector<bool>& v) {
    json a = json::array();
    for (const bool b : v) a.push_back(b);
    return a;
}

std::vector<bool> bools_from_json(const json& a) {
    std::vector<bool> v;
    for (const auto& x : a) v.push_back(x.get<bool>());
    return v;
}

std::string paulis_to_string(const std::vector<sim::Pauli>& ps) {
    std::string s;
    for (const auto p : ps) s += sim::pauli_char(p);
    return s;
}

std::vector<sim::Pauli> paulis_from_string(const std::string& s) {
    std::vector<sim::Pauli> out;
    for (const char c : s) {
        if (c == 'X') out.push_back(sim::Pauli::X);
        else if (c == 'Y') out.push_back(sim::Pauli::Y);
        else if (c == 'Z') out.push_back(sim::Pauli::Z);
        else throw SchemaError("bad pauli string: " + s);
    }
    return out;
}

json encoding_to_json(const encoding::EncodingCircuitSpec& e) {
    return json{{"family", encoding::family_name(e.family)},
                {"qubits", e.n_qubits},
                {"layers", e.n_layers},
                {"bandwidth", e.bandwidth},
                {"trainable", e.trainable}};
}

encoding::EncodingCircuitSpec encoding_from_json(const json& j) {
    encoding::EncodingCircuitSpec e;
    e.family = encoding::family_from_name(j.at("family").get<std::string>());
    e.n_qubits = j.at("qubits").get<int>();
    e.n_layers = j.at("layers").get<int>();
    e.bandwidth = j.at("bandwidth").get<double>();
    e.trainable = j.at("trainable").get<bool>();
    e.validate();
    return e;
}

json outer_to_json(const kernels::OuterKernelSpec& o) {
    json j{{"kind", kernels::outer_name(o.kind)}};
    switch (o.kind) {
        case kernels::OuterKind::GAUSSIAN: j["gamma"] = o.gamma; break;
        case kernels::OuterKind::MATERN:
            j["nu"] = o.nu;
            j["length"] = o.length;
            break;
        case kernels::OuterKind::DOT_PRODUCT: j["sigma0"] = o.sigma0; break;
        case kernels::OuterKind::PAIRWISE_LINEAR: break;
    }
    return j;
}

kernels::OuterKernelSpec outer_from_json(const json& j) {
    kernels::OuterKernelSpec o;
    o.kind = kernels::outer_from_name(j.at("kind").get<std::string>());
    switch (o.kind) {
        case kernels::OuterKind::GAUSSIAN: o.gamma = j.at("gamma").get<double>(); break;
        case kernels::OuterKind::MATERN:
            o.nu = j.at("nu").get<double>();
            o.length = j.at("length").get<double>();
            break;
        case kernels::OuterKind::DOT_PRODUCT: o.sigma0 = j.at("sigma0").get<double>(); break;
        case kernels::OuterKind::PAIRWISE_LINEAR: break;
    }
    o.validate();
    return o;
}

json kernel_spec_to_json(const kernels::KernelSpec& k) {
    json j{{"kind", kernels::kernel_kind_name(k.kind)},
           {"encoding", encoding_to_json(k.encoding)}};
    if (k.kind == kernels::KernelKind::PQK) {
        j["paulis"] = paulis_to_string(k.pqk_paulis);
        j["outer"] = outer_to_json(k.outer);
    }
    return j;
}

kernels::KernelSpec kernel_spec_from_json(const json& j) {
    kernels::KernelSpec k;
    k.kind = kernels::kernel_kind_from_name(j.at("kind").get<std::string>());
    k.encoding = encoding_from_json(j.at("encoding"));
    if (k.kind == kernels::KernelKind::PQK) {
        k.pqk_paulis = paulis_from_string(j.at("paulis").get<std::string>());
        k.outer = outer_from_json(j.at("outer"));
    }
    k.validate();
    return k;
}

}  // namespace

// ---------------------------------------------------------------------------
// Transforms.

namespace prep {

json FittedTransform::to_json() const {
    json j{{"kind", transform_kind_name(spec.kind)},
           {"n_in", n_in},
           {"n_out", n_out},
           {"categorical_in", bools_to_json(categorical_in)},
           {"categorical_out", bools_to_json(categorical_out)}};
    switch (spec.kind) {
        case TransformKind::IMPUTE:
            j["strategy"] = impute_strategy_name(spec.impute);
            j["fill"] = vec_to_json(col_a);
            break;
        case TransformKind::ONE_HOT: {
            json cats = json::array();
            for (const auto& c : categories) {
                json col = json::array();
                for (const double v : c) col.push_back(v);
                cats.push_back(std::move(col));
            }
            j["categories"] = std::move(cats);
            break;
        }
        case TransformKind::OUTLIER_IQR:
            j["k"] = spec.iqr_k;
            j["lower"] = vec_to_json(col_a);
            j["upper"] = vec_to_json(col_b);
            break;
        case TransformKind::MINMAX_SYM:
            j["min"] = vec_to_json(col_a);
            j["max"] = vec_to_json(col_b);
            break;
        case TransformKind::STANDARDIZE:
            j["mean"] = vec_to_json(col_a);
            j["std"] = vec_to_json(col_b);
            break;
        case TransformKind::PCA:
            j["k"] = spec.pca_components;
            j["components"] = mat_to_json(components);
            j["center"] = vec_to_json(center);
            j["singular_values"] = vec_to_json(singular_values);
            break;
        case TransformKind::DOWNSAMPLE:
            j["ratio"] = spec.downsample_ratio;
            j["seed"] = spec.seed;
            break;
    }
    return j;
}

FittedTransform FittedTransform::from_json(const json& j) {
    FittedTransform t;
    t.spec.kind = transform_kind_from_name(j.at("kind").get<std::string>());
    t.n_in = j.at("n_in").get<int>();
    t.n_out = j.at("n_out").get<int>();
    t.categorical_in = bools_from_json(j.at("categorical_in"));
    t.categorical_out = bools_from_json(j.at("categorical_out"));
    switch (t.spec.kind) {
        case TransformKind::IMPUTE:
            t.spec.impute = impute_strategy_from_name(j.at("strategy").get<std::string>());
            t.col_a = vec_from_json(j.at("fill"));
            break;
        case TransformKind::ONE_HOT:
            for (const auto& col : j.at("categories")) {
                std::vector<double> c;
                for (const auto& v : col) c.push_back(v.get<double>());
                t.categories.push_back(std::move(c));
            }
            break;
        case TransformKind::OUTLIER_IQR:
            t.spec.iqr_k = j.at("k").get<double>();
            t.col_a = vec_from_json(j.at("lower"));
            t.col_b = vec_from_json(j.at("upper"));
            break;
        case TransformKind::MINMAX_SYM:
            t.col_a = vec_from_json(j.at("min"));
            t.col_b = vec_from_json(j.at("max"));
            break;
        case TransformKind::STANDARDIZE:
            t.col_a = vec_from_json(j.at("mean"));
            t.col_b = vec_from_json(j.at("std"));
            break;
        case TransformKind::PCA:
            t.spec.pca_components = j.at("k").get<int>();
            t.components = mat_from_json(j.at("components"));
            t.center = vec_from_json(j.at("center"));
            t.singular_values = vec_from_json(j.at("singular_values"));
            break;
        case TransformKind::DOWNSAMPLE:
            t.spec.downsample_ratio = j.at("ratio").get<double>();
            t.spec.seed = j.at("seed").get<std::uint64_t>();
            break;
    }
    return t;
}

}  // namespace prep

// ---------------------------------------------------------------------------
// Models.

namespace models {

json KernelBackend::to_json() const {
    if (type == Type::RBF) return json{{"type", "rbf"}, {"gamma", rbf_gamma}};
    return json{{"type", "quantum"}, {"kernel", kernel_spec_to_json(quantum)}};
}

KernelBackend KernelBackend::from_json(const json& j) {
    KernelBackend b;
    const std::string type = j.at("type").get<std::string>();
    if (type == "rbf") {
        b.type = Type::RBF;
        b.rbf_gamma = j.at("gamma").get<double>();
        if (!(b.rbf_gamma > 0.0)) throw SchemaError("rbf backend: gamma must be > 0");
    } else if (type == "quantum") {
        b.type = Type::QUANTUM;
        b.quantum = kernel_spec_from_json(j.at("kernel"));
    } else {
        throw SchemaError("unknown kernel backend type: " + type);
    }
    return b;
}

json KernelModel::to_json() const {
    require_fitted();
    json j{{"model", kind()},
           {"solver", kernel_model_kind_name(config_.kind)},
           {"backend", config_.backend.to_json()},
           {"X_train", mat_to_json(X_train_)}};
    switch (config_.kind) {
        case KernelModelKind::SVC: {
            j["C"] = config_.C;
            json machines = json::array();
            for (const auto& m : svc_.machines) {
                machines.push_back(json{{"coef", vec_to_json(m.coef)}, {"bias", m.bias}});
            }
            j["classes"] = svc_.classes;
            j["machines"] = std::move(machines);
            break;
        }
        case KernelModelKind::SVR:
            j["C"] = config_.C;
            j["epsilon"] = config_.epsilon;
            j["weights"] = vec_to_json(weights_);
            j["bias"] = bias_;
            break;
        case KernelModelKind::KRR:
            j["alpha_reg"] = config_.alpha_reg;
            j["weights"] = vec_to_json(weights_);
            break;
        case KernelModelKind::GPR:
            j["sigma2"] = config_.sigma2;
            j["weights"] = vec_to_json(weights_);
            break;
    }
    return j;
}

std::unique_ptr<KernelModel> KernelModel::from_json(const json& j) {
    KernelModelConfig cfg;
    const std::string solver = j.at("solver").get<std::string>();
    if (solver == "svc") cfg.kind = KernelModelKind::SVC;
    else if (solver == "svr") cfg.kind = KernelModelKind::SVR;
    else if (solver == "krr") cfg.kind = KernelModelKind::KRR;
    else if (solver == "gpr") cfg.kind = KernelModelKind::GPR;
    else throw SchemaError("unknown kernel solver: " + solver);
    cfg.backend = KernelBackend::from_json(j.at("backend"));
    if (cfg.kind == KernelModelKind::SVC) cfg.C = j.at("C").get<double>();
    if (cfg.kind == KernelModelKind::SVR) {
        cfg.C = j.at("C").get<double>();
        cfg.epsilon = j.at("epsilon").get<double>();
    }
    if (cfg.kind == KernelModelKind::KRR) cfg.alpha_reg = j.at("alpha_reg").get<double>();
    if (cfg.kind == KernelModelKind::GPR) cfg.sigma2 = j.at("sigma2").get<double>();

    auto model = std::make_unique<KernelModel>(cfg);
    model->X_train_ = mat_from_json(j.at("X_train"));
    switch (cfg.kind) {
        case KernelModelKind::SVC: {
            model->svc_.classes = j.at("classes").get<std::vector<double>>();
            for (const auto& mj : j.at("machines")) {
                BinarySvm m;
                m.coef = vec_from_json(mj.at("coef"));
                m.bias = mj.at("bias").get<double>();
                if (m.coef.size() != model->X_train_.rows()) {
                    throw SchemaError("svc machine: coefficient count != training rows");
                }
                model->svc_.machines.push_back(std::move(m));
            }
            break;
        }
        case KernelModelKind::SVR:
            model->weights_ = vec_from_json(j.at("weights"));
            model->bias_ = j.at("bias").get<double>();
            break;
        case KernelModelKind::KRR:
        case KernelModelKind::GPR:
            model->weights_ = vec_from_json(j.at("weights"));
            break;
    }
    if (cfg.kind != KernelModelKind::SVC &&
        model->weights_.size() != model->X_train_.rows()) {
        throw SchemaError("kernel model: weight count != training rows");
    }
    model->fitted_ = true;
    return model;
}

json QnnModel::to_json() const {
    require_fitted();
    json heads = json::array();
    for (const auto& h : heads_) {
        heads.push_back(json{{"theta", vec_to_json(h.theta)}, {"w", h.w}, {"b", h.b}});
    }
    return json{{"model", kind()},
                {"encoding", encoding_to_json(config_.encoding)},
                {"observable", config_.observable.name()},
                {"train",
                 json{{"epochs", config_.train.epochs},
                      {"learning_rate", config_.train.learning_rate},
                      {"batch_size", config_.train.batch_size},
                      {"seed", config_.train.seed}}},
                {"n_features", n_features_},
                {"classes", classes_},
                {"heads", std::move(heads)}};
}

std::unique_ptr<QnnModel> QnnModel::from_json(const json& j) {
    QnnConfig cfg;
    cfg.encoding = encoding_from_json(j.at("encoding"));
    cfg.observable = QnnObservableSpec::from_name(j.at("observable").get<std::string>());
    cfg.train.epochs = j.at("train").at("epochs").get<int>();
    cfg.train.learning_rate = j.at("train").at("learning_rate").get<double>();
    cfg.train.batch_size = j.at("train").at("batch_size").get<int>();
    cfg.train.seed = j.at("train").at("seed").get<std::uint64_t>();
    cfg.classification = j.at("model").get<std::string>() == "qnn_c";
    auto model = std::make_unique<QnnModel>(cfg);
    model->n_features_ = j.at("n_features").get<int>();
    model->classes_ = j.at("classes").get<std::vector<double>>();
    const int n_theta = encoding::trainable_count(model->config_.encoding, model->n_features_);
    for (const auto& hj : j.at("heads")) {
        Head h;
        h.theta = vec_from_json(hj.at("theta"));
        h.w = hj.at("w").get<double>();
        h.b = hj.at("b").get<double>();
        if (h.theta.size() != n_theta) {
            throw SchemaError("qnn head: theta length does not match the encoding");
        }
        if (!h.theta.allFinite()) throw SchemaError("qnn head: non-finite theta");
        model->heads_.push_back(std::move(h));
    }
    if (model->heads_.empty()) throw SchemaError("qnn: no heads");
    model->fitted_ = true;
    return model;
}

json QrcModel::to_json() const {
    require_fitted();
    json obs = json::array();
    for (const auto& o : observables_) {
        json factors = json::array();
        for (const auto& [q, p] : o.terms.at(0).factors) {
            factors.push_back(json::array({q, std::string(1, sim::pauli_char(p))}));
        }
        obs.push_back(std::move(factors));
    }
    return json{{"model", kind()},
                {"encoding", encoding_to_json(config_.encoding)},
                {"n_observables", config_.n_observables},
                {"ridge_alpha", config_.ridge_alpha},
                {"seed", config_.seed},
                {"n_features", n_features_},
                {"classes", classes_},
                {"reservoir_theta", vec_to_json(reservoir_theta_)},
                {"observables", std::move(obs)},
                {"readout", mat_to_json(readout_)}};
}

std::unique_ptr<QrcModel> QrcModel::from_json(const json& j) {
    QrcConfig cfg;
    cfg.encoding = encoding_from_json(j.at("encoding"));
    cfg.n_observables = j.at("n_observables").get<int>();
    cfg.ridge_alpha = j.at("ridge_alpha").get<double>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.classification = j.at("model").get<std::string>() == "qrc_c";
    auto model = std::make_unique<QrcModel>(cfg);
    model->n_features_ = j.at("n_features").get<int>();
    model->classes_ = j.at("classes").get<std::vector<double>>();
    model->reservoir_theta_ = vec_from_json(j.at("reservoir_theta"));
    for (const auto& factors : j.at("observables")) {
        sim::PauliTerm term;
        for (const auto& f : factors) {
            const int q = f.at(0).get<int>();
            const std::string p = f.at(1).get<std::string>();
            term.factors[q] = paulis_from_string(p).at(0);
        }
        sim::PauliObservable o;
        o.terms.push_back(std::move(term));
        model->observables_.push_back(std::move(o));
    }
    model->readout_ = mat_from_json(j.at("readout"));
    if (model->readout_.rows() !=
        static_cast<Eigen::Index>(model->observables_.size()) + 1) {
        throw SchemaError("qrc: readout rows != observables + 1");
    }
    model->fitted_ = true;
    return model;
}

std::unique_ptr<Model> model_from_json(const json& j) {
    const std::string kind = j.at("model").get<std::string>();
    if (kind.rfind("qnn", 0) == 0) return QnnModel::from_json(j);
    if (kind.rfind("qrc", 0) == 0) return QrcModel::from_json(j);
    return KernelModel::from_json(j);
}

}  // namespace models

// ---------------------------------------------------------------------------
// Pipeline.

namespace pipeline {

json configuration_to_json(const search::Configuration& config) {
    json j = json::object();
    for (const auto& [id, value] : config) {
        if (value.type == search::ParamValue::Type::CATEGORY) j[id] = value.category;
        else j[id] = value.number;
    }
    return j;
}

search::Configuration configuration_from_json(const json& j) {
    search::Configuration config;
    for (const auto& [id, value] : j.items()) {
        if (value.is_string()) {
            config[id] = search::ParamValue::cat(value.get<std::string>());
        } else if (value.is_number()) {
            config[id] = search::ParamValue::num(value.get<double>());
        } else {
            throw SchemaError("configuration: parameter " + id + " has a bad value type");
        }
    }
    return config;
}

json serialize(const Pipeline& p) {
    if (!p.fitted()) throw NotFittedError("serialize: pipeline is not fitted");
    json steps = json::array();
    for (const auto& s : p.steps) steps.push_back(s.to_json());
    json j{{"schema_version", kPipelineSchemaVersion},
           {"task", models::task_name(p.task)},
           {"metric", p.metric},
           {"seed", p.seed},
           {"qubit_ordering", "little_endian"},
           {"config", configuration_to_json(p.config)},
           {"categorical", bools_to_json(p.categorical)},
           {"steps", std::move(steps)},
           {"predictor", p.model->to_json()}};
    if (p.task == models::Task::TS_FORECASTING) {
        j["lags"] = p.lags;
        j["train_series"] = vec_to_json(p.train_series());
    }
    return j;
}

Pipeline deserialize(const json& j) {
    const int version = j.at("schema_version").get<int>();
    if (version != kPipelineSchemaVersion) {
        throw SchemaError("pipeline: unsupported schema_version " + std::to_string(version));
    }
    Pipeline p;
    p.task = models::task_from_name(j.at("task").get<std::string>());
    p.metric = j.at("metric").get<std::string>();
    p.seed = j.at("seed").get<std::uint64_t>();
    p.config = configuration_from_json(j.at("config"));
    p.categorical = bools_from_json(j.at("categorical"));
    for (const auto& sj : j.at("steps")) {
        p.steps.push_back(prep::FittedTransform::from_json(sj));
    }
    p.model = models::model_from_json(j.at("predictor"));
    if (p.task == models::Task::TS_FORECASTING) {
        p.lags = j.at("lags").get<int>();
        if (p.lags < 1) throw SchemaError("pipeline: lags must be >= 1");
        p.set_train_series(vec_from_json(j.at("train_series")));
    }
    p.mark_fitted();
    return p;
}

}  // namespace pipeline
}  // namespace qaml
