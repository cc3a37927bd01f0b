#include "qaml/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qaml/errors.hpp"
#include "qaml/kernel_models.hpp"
#include "qaml/qnn.hpp"
#include "qaml/qrc.hpp"

namespace qaml::pipeline {

using models::Task;
using search::Configuration;
using search::Parameter;
using search::ParamValue;
using search::SearchSpace;

namespace {

const std::vector<std::string> kPauliSubsets = {"X", "Y", "Z", "XY", "XZ", "YZ", "XYZ"};
const std::vector<std::string> kFamilies = {"YZ_CX", "MULTI_CONTROL", "HW_EFFICIENT",
                                            "SEPARABLE_RX"};

std::vector<std::string> quantum_models(Task task) {
    if (models::is_classification(task)) return {"qsvc", "qnn_c", "qrc_c"};
    return {"qkrr", "qgpr", "qsvr", "qnn_r", "qrc_r"};
}

std::vector<std::string> classical_models(Task task) {
    if (models::is_classification(task)) return {"svc_rbf"};
    return {"svr_rbf", "krr_rbf", "gpr_rbf"};
}

bool is_kernel_quantum(const std::string& m) {
    return m == "qsvc" || m == "qsvr" || m == "qkrr" || m == "qgpr";
}

bool is_qnn(const std::string& m) { return m == "qnn_c" || m == "qnn_r"; }
bool is_qrc(const std::string& m) { return m == "qrc_c" || m == "qrc_r"; }
bool is_classical(const std::string& m) {
    return m == "svc_rbf" || m == "svr_rbf" || m == "krr_rbf" || m == "gpr_rbf";
}

void add_encoding_params(SearchSpace& space, const std::string& m) {
    space.add(Parameter::categorical(m + ".enc.family", kFamilies, "model", m));
    space.add(Parameter::int_uniform(m + ".enc.qubits", 2, 10, "model", m));
    space.add(Parameter::int_uniform(m + ".enc.layers", 1, 4, "model", m));
    space.add(Parameter::log_uniform(m + ".enc.bandwidth", 0.1, 2.0 * std::numbers::pi,
                                     "model", m));
}

void add_pqk_params(SearchSpace& space, const std::string& m) {
    space.add(Parameter::categorical(m + ".kernel", {"FQK", "PQK"}, "model", m));
    space.add(Parameter::categorical(m + ".pqk.paulis", kPauliSubsets, m + ".kernel", "PQK"));
    space.add(Parameter::categorical(m + ".pqk.outer",
                                     {"GAUSSIAN", "MATERN", "DOT_PRODUCT", "PAIRWISE_LINEAR"},
                                     m + ".kernel", "PQK"));
    space.add(Parameter::log_uniform(m + ".pqk.outer.gamma", 1e-3, 1e2, m + ".pqk.outer",
                                     "GAUSSIAN"));
    space.add(Parameter::categorical(m + ".pqk.outer.nu", {"0.5", "1.5", "2.5"},
                                     m + ".pqk.outer", "MATERN"));
    space.add(Parameter::log_uniform(m + ".pqk.outer.length", 1e-2, 1e2, m + ".pqk.outer",
                                     "MATERN"));
    space.add(Parameter::uniform(m + ".pqk.outer.sigma0", 0.0, 2.0, m + ".pqk.outer",
                                 "DOT_PRODUCT"));
}

std::vector<sim::Pauli> parse_paulis(const std::string& s) {
    std::vector<sim::Pauli> out;
    for (const char c : s) {
        switch (c) {
            case 'X': out.push_back(sim::Pauli::X); break;
            case 'Y': out.push_back(sim::Pauli::Y); break;
            case 'Z': out.push_back(sim::Pauli::Z); break;
            default: throw ValueError("bad pauli subset: " + s);
        }
    }
    return out;
}

// Configuration readers.
const ParamValue* find_value(const Configuration& c, const std::string& id) {
    const auto it = c.find(id);
    return it == c.end() ? nullptr : &it->second;
}

double require_num(const Configuration& c, const std::string& id) {
    const ParamValue* v = find_value(c, id);
    if (v == nullptr || v->type != ParamValue::Type::NUMBER) {
        throw ValueError("configuration: missing numeric parameter " + id);
    }
    return v->number;
}

std::string require_cat(const Configuration& c, const std::string& id) {
    const ParamValue* v = find_value(c, id);
    if (v == nullptr || v->type != ParamValue::Type::CATEGORY) {
        throw ValueError("configuration: missing categorical parameter " + id);
    }
    return v->category;
}

std::string cat_or(const Configuration& c, const std::string& id, const std::string& dflt) {
    const ParamValue* v = find_value(c, id);
    return v != nullptr && v->type == ParamValue::Type::CATEGORY ? v->category : dflt;
}

double num_or(const Configuration& c, const std::string& id, double dflt) {
    const ParamValue* v = find_value(c, id);
    return v != nullptr && v->type == ParamValue::Type::NUMBER ? v->number : dflt;
}

encoding::EncodingCircuitSpec read_encoding(const Configuration& c, const std::string& m,
                                            bool trainable) {
    encoding::EncodingCircuitSpec enc;
    enc.family = encoding::family_from_name(cat_or(c, m + ".enc.family", "YZ_CX"));
    enc.n_qubits = static_cast<int>(require_num(c, m + ".enc.qubits"));
    enc.n_layers = static_cast<int>(require_num(c, m + ".enc.layers"));
    enc.bandwidth = num_or(c, m + ".enc.bandwidth", 1.0);
    enc.trainable = trainable;
    enc.validate();
    return enc;
}

kernels::KernelSpec read_kernel(const Configuration& c, const std::string& m) {
    kernels::KernelSpec spec;
    spec.encoding = read_encoding(c, m, false);
    const std::string kind = cat_or(c, m + ".kernel", "FQK");
    spec.kind = kernels::kernel_kind_from_name(kind);
    if (spec.kind == kernels::KernelKind::PQK) {
        spec.pqk_paulis = parse_paulis(require_cat(c, m + ".pqk.paulis"));
        const std::string outer = require_cat(c, m + ".pqk.outer");
        spec.outer.kind = kernels::outer_from_name(outer);
        switch (spec.outer.kind) {
            case kernels::OuterKind::GAUSSIAN:
                spec.outer.gamma = require_num(c, m + ".pqk.outer.gamma");
                break;
            case kernels::OuterKind::MATERN:
                spec.outer.nu = std::stod(require_cat(c, m + ".pqk.outer.nu"));
                spec.outer.length = require_num(c, m + ".pqk.outer.length");
                break;
            case kernels::OuterKind::DOT_PRODUCT:
                spec.outer.sigma0 = require_num(c, m + ".pqk.outer.sigma0");
                break;
            case kernels::OuterKind::PAIRWISE_LINEAR:
                break;
        }
    }
    spec.validate();
    return spec;
}

std::unique_ptr<models::Model> build_model(const Configuration& c,
                                           const TemplateOptions& opts) {
    const std::string m = require_cat(c, "model");
    if (is_kernel_quantum(m)) {
        models::KernelModelConfig cfg;
        cfg.backend.type = models::KernelBackend::Type::QUANTUM;
        cfg.backend.quantum = read_kernel(c, m);
        if (m == "qsvc") {
            cfg.kind = models::KernelModelKind::SVC;
            cfg.C = require_num(c, "qsvc.C");
        } else if (m == "qsvr") {
            cfg.kind = models::KernelModelKind::SVR;
            cfg.C = require_num(c, "qsvr.C");
            cfg.epsilon = require_num(c, "qsvr.epsilon");
        } else if (m == "qkrr") {
            cfg.kind = models::KernelModelKind::KRR;
            cfg.alpha_reg = require_num(c, "qkrr.alpha");
        } else {
            cfg.kind = models::KernelModelKind::GPR;
            cfg.sigma2 = require_num(c, "qgpr.sigma2");
        }
        return std::make_unique<models::KernelModel>(cfg);
    }
    if (is_qnn(m)) {
        models::QnnConfig cfg;
        cfg.encoding = read_encoding(c, m, true);
        cfg.observable = models::QnnObservableSpec::from_name(
            cat_or(c, m + ".observable", "ISING"));
        cfg.train.epochs = opts.qnn_epochs;
        cfg.train.learning_rate = opts.qnn_learning_rate;
        cfg.classification = m == "qnn_c";
        return std::make_unique<models::QnnModel>(cfg);
    }
    if (is_qrc(m)) {
        models::QrcConfig cfg;
        cfg.encoding = read_encoding(c, m, true);
        cfg.n_observables = opts.qrc_observables;
        cfg.ridge_alpha = require_num(c, m + ".alpha");
        cfg.classification = m == "qrc_c";
        return std::make_unique<models::QrcModel>(cfg);
    }
    if (is_classical(m)) {
        models::KernelModelConfig cfg;
        cfg.backend.type = models::KernelBackend::Type::RBF;
        cfg.backend.rbf_gamma = require_num(c, m + ".gamma");
        if (m == "svc_rbf") {
            cfg.kind = models::KernelModelKind::SVC;
            cfg.C = require_num(c, "svc_rbf.C");
        } else if (m == "svr_rbf") {
            cfg.kind = models::KernelModelKind::SVR;
            cfg.C = require_num(c, "svr_rbf.C");
            cfg.epsilon = require_num(c, "svr_rbf.epsilon");
        } else if (m == "krr_rbf") {
            cfg.kind = models::KernelModelKind::KRR;
            cfg.alpha_reg = require_num(c, "krr_rbf.alpha");
        } else {
            cfg.kind = models::KernelModelKind::GPR;
            cfg.sigma2 = require_num(c, "gpr_rbf.sigma2");
        }
        return std::make_unique<models::KernelModel>(cfg);
    }
    throw ValueError("configuration: unknown model " + m);
}

}  // namespace

bool preset_compatible(const std::string& preset, Task task) {
    const bool classification = models::is_classification(task);
    if (preset == kPresetAll) return true;
    if (preset == kPresetQuantumClassification || preset == kPresetClassicalClassification) {
        return classification;
    }
    if (preset == kPresetQuantumRegression || preset == kPresetClassicalRegression) {
        return !classification;
    }
    throw ValueError("unknown preset: " + preset);
}

search::SearchSpace default_space(Task task, const std::string& preset,
                                  const DataTraits& traits, const TemplateOptions& opts) {
    if (!preset_compatible(preset, task)) {
        throw ValueError("preset " + preset + " is incompatible with task " +
                         models::task_name(task));
    }
    const int d_raw = traits.n_features;
    if (d_raw < 1) throw ValueError("default_space: n_features must be >= 1");

    SearchSpace space;

    // Cleaning slots.
    space.add(Parameter::categorical("clean.impute", {"off", "mean", "median", "mode"}));
    space.add(Parameter::categorical("clean.outlier", {"off", "1.5", "3.0"}));
    if (traits.has_categorical()) {
        space.add(Parameter::categorical("clean.one_hot", {"on", "off"}));
    }

    // Preprocessing slots. PCA bounds follow the raw width; one-hot can only
    // widen the data, so the k range stays valid.
    space.add(Parameter::categorical("prep.downsample", {"1.0", "0.5", "0.25"}));
    // PCA needs a non-degenerate k range [2, min(d, 10)].
    const int pca_max = std::min(d_raw, 10);
    if (pca_max >= 3) {
        space.add(Parameter::categorical("prep.pca", {"off", "on"}));
        space.add(Parameter::int_uniform("prep.pca.k", 2, pca_max, "prep.pca", "on"));
    }
    space.add(Parameter::categorical("prep.scaler", {"MINMAX_SYM", "STANDARDIZE"}));

    // Predictor pool.
    std::vector<std::string> pool;
    if (preset == kPresetQuantumClassification || preset == kPresetQuantumRegression) {
        pool = quantum_models(task);
    } else if (preset == kPresetClassicalClassification ||
               preset == kPresetClassicalRegression) {
        pool = classical_models(task);
    } else {
        pool = quantum_models(task);
        const auto classical = classical_models(task);
        pool.insert(pool.end(), classical.begin(), classical.end());
    }
    space.add(Parameter::categorical("model", pool));

    for (const auto& m : pool) {
        if (is_kernel_quantum(m)) {
            add_encoding_params(space, m);
            add_pqk_params(space, m);
            if (m == "qsvc") {
                space.add(Parameter::log_uniform("qsvc.C", 1e-2, 1e3, "model", m));
            } else if (m == "qsvr") {
                space.add(Parameter::log_uniform("qsvr.C", 1e-2, 1e3, "model", m));
                space.add(Parameter::log_uniform("qsvr.epsilon", 1e-4, 1.0, "model", m));
            } else if (m == "qkrr") {
                space.add(Parameter::log_uniform("qkrr.alpha", 1e-8, 1.0, "model", m));
            } else if (m == "qgpr") {
                space.add(Parameter::log_uniform("qgpr.sigma2", 1e-8, 1e-1, "model", m));
            }
        } else if (is_qnn(m)) {
            add_encoding_params(space, m);
            space.add(Parameter::categorical(
                m + ".observable", {"ISING", "X", "Y", "Z", "XY", "XZ", "YZ", "XYZ"},
                "model", m));
        } else if (is_qrc(m)) {
            add_encoding_params(space, m);
            space.add(Parameter::log_uniform(m + ".alpha", 1e-8, 1.0, "model", m));
        } else if (is_classical(m)) {
            space.add(Parameter::log_uniform(m + ".gamma", 1e-3, 1e2, "model", m));
            if (m == "svc_rbf") {
                space.add(Parameter::log_uniform("svc_rbf.C", 1e-2, 1e3, "model", m));
            } else if (m == "svr_rbf") {
                space.add(Parameter::log_uniform("svr_rbf.C", 1e-2, 1e3, "model", m));
                space.add(Parameter::log_uniform("svr_rbf.epsilon", 1e-4, 1.0, "model", m));
            } else if (m == "krr_rbf") {
                space.add(Parameter::log_uniform("krr_rbf.alpha", 1e-8, 1.0, "model", m));
            } else {
                space.add(Parameter::log_uniform("gpr_rbf.sigma2", 1e-8, 1e-1, "model", m));
            }
        }
    }
    space.validate();
    (void)opts;
    return space;
}

Pipeline instantiate(const Configuration& config, Task task, const DataTraits& traits,
                     const TemplateOptions& opts) {
    Pipeline p;
    p.task = task;
    p.config = config;
    p.categorical = traits.categorical;
    if (p.categorical.empty()) {
        p.categorical.assign(static_cast<std::size_t>(traits.n_features), false);
    }
    if (task == Task::TS_FORECASTING) p.lags = opts.forecast_lags;

    const std::string impute = cat_or(config, "clean.impute", "off");
    if (impute != "off") {
        prep::TransformSpec s;
        s.kind = prep::TransformKind::IMPUTE;
        s.impute = prep::impute_strategy_from_name(impute);
        p.plan.push_back(s);
    }
    const std::string outlier = cat_or(config, "clean.outlier", "off");
    if (outlier != "off") {
        prep::TransformSpec s;
        s.kind = prep::TransformKind::OUTLIER_IQR;
        s.iqr_k = std::stod(outlier);
        p.plan.push_back(s);
    }
    const bool any_cat =
        std::any_of(p.categorical.begin(), p.categorical.end(), [](bool b) { return b; });
    if (any_cat && cat_or(config, "clean.one_hot", "on") == "on") {
        prep::TransformSpec s;
        s.kind = prep::TransformKind::ONE_HOT;
        p.plan.push_back(s);
    }
    const double ratio = std::stod(cat_or(config, "prep.downsample", "1.0"));
    if (ratio < 1.0) {
        prep::TransformSpec s;
        s.kind = prep::TransformKind::DOWNSAMPLE;
        s.downsample_ratio = ratio;
        p.plan.push_back(s);
    }
    if (cat_or(config, "prep.pca", "off") == "on") {
        prep::TransformSpec s;
        s.kind = prep::TransformKind::PCA;
        s.pca_components = static_cast<int>(require_num(config, "prep.pca.k"));
        p.plan.push_back(s);
    }
    prep::TransformSpec scaler;
    const std::string scaler_name = cat_or(config, "prep.scaler", "MINMAX_SYM");
    scaler.kind = prep::transform_kind_from_name(scaler_name);
    if (scaler.kind != prep::TransformKind::MINMAX_SYM &&
        scaler.kind != prep::TransformKind::STANDARDIZE) {
        throw ValueError("instantiate: scaler must be MINMAX_SYM or STANDARDIZE");
    }
    p.plan.push_back(scaler);

    p.model = build_model(config, opts);
    return p;
}

void Pipeline::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   const FitContext& ctx) {
    if (task == Task::TS_FORECASTING) {
        if (X.cols() != 0 && X.cols() != 1) {
            throw ValueError("forecasting pipelines consume a univariate series");
        }
        fit_series(y, ctx);
        return;
    }
    if (X.rows() != y.size()) throw DimensionError("pipeline fit: X/y row mismatch");
    if (X.rows() == 0) throw ValueError("pipeline fit: empty training data");

    seed = ctx.seed;
    steps.clear();
    Eigen::MatrixXd cur = X;
    Eigen::VectorXd cur_y = y;
    std::vector<bool> cat = categorical;
    if (static_cast<Eigen::Index>(cat.size()) != X.cols()) {
        throw DimensionError("pipeline fit: categorical flags do not match X");
    }
    for (const auto& spec : plan) {
        ctx.deadline.check();
        prep::TransformSpec bound = spec;
        bound.seed = derive_seed(ctx.seed, 0xF17 + steps.size());
        prep::FitResult r = prep::fit(bound, cur, cur_y, cat);
        cur = std::move(r.X);
        cur_y = std::move(r.y);
        cat = r.fitted.categorical_out;
        steps.push_back(std::move(r.fitted));
    }
    model->fit(cur, cur_y, ctx);
    fitted_ = true;
}

Eigen::MatrixXd Pipeline::run_steps(const Eigen::MatrixXd& X) const {
    Eigen::MatrixXd cur = X;
    for (const auto& step : steps) cur = step.transform(cur);
    return cur;
}

Eigen::VectorXd Pipeline::predict(const Eigen::MatrixXd& X, const FitContext& ctx) const {
    if (!fitted_) throw NotFittedError("pipeline: predict before fit");
    if (task == Task::TS_FORECASTING) {
        if (X.cols() != 1) {
            throw ValueError("forecasting predict consumes a single series column");
        }
        return predict_series(X.col(0), ctx);
    }
    return model->predict(run_steps(X), ctx);
}

void Pipeline::fit_series(const Eigen::VectorXd& series, const FitContext& ctx) {
    if (task != Task::TS_FORECASTING) {
        throw ValueError("fit_series: pipeline task is not ts_forecasting");
    }
    const prep::WindowedSeries w = prep::sliding_window(series, lags);
    train_series_ = series;

    seed = ctx.seed;
    steps.clear();
    Eigen::MatrixXd cur = w.X;
    Eigen::VectorXd cur_y = w.y;
    std::vector<bool> cat(static_cast<std::size_t>(lags), false);
    for (const auto& spec : plan) {
        ctx.deadline.check();
        prep::TransformSpec bound = spec;
        bound.seed = derive_seed(ctx.seed, 0xF17 + steps.size());
        prep::FitResult r = prep::fit(bound, cur, cur_y, cat);
        cur = std::move(r.X);
        cur_y = std::move(r.y);
        cat = r.fitted.categorical_out;
        steps.push_back(std::move(r.fitted));
    }
    model->fit(cur, cur_y, ctx);
    fitted_ = true;
}

Eigen::VectorXd Pipeline::predict_series(const Eigen::VectorXd& series,
                                         const FitContext& ctx) const {
    if (!fitted_) throw NotFittedError("pipeline: predict before fit");
    const prep::WindowedSeries w = prep::sliding_window(series, lags);
    return model->predict(run_steps(w.X), ctx);
}

}  // namespace qaml::pipeline
