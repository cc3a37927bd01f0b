#include "qaml/transforms.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "qaml/errors.hpp"
#include "qaml/rng.hpp"

namespace qaml::prep {

std::string transform_kind_name(TransformKind k) {
    switch (k) {
        case TransformKind::IMPUTE: return "IMPUTE";
        case TransformKind::ONE_HOT: return "ONE_HOT";
        case TransformKind::OUTLIER_IQR: return "OUTLIER_IQR";
        case TransformKind::MINMAX_SYM: return "MINMAX_SYM";
        case TransformKind::STANDARDIZE: return "STANDARDIZE";
        case TransformKind::PCA: return "PCA";
        case TransformKind::DOWNSAMPLE: return "DOWNSAMPLE";
    }
    throw ValueError("unknown transform kind");
}

TransformKind transform_kind_from_name(const std::string& name) {
    if (name == "IMPUTE") return TransformKind::IMPUTE;
    if (name == "ONE_HOT") return TransformKind::ONE_HOT;
    if (name == "OUTLIER_IQR") return TransformKind::OUTLIER_IQR;
    if (name == "MINMAX_SYM") return TransformKind::MINMAX_SYM;
    if (name == "STANDARDIZE") return TransformKind::STANDARDIZE;
    if (name == "PCA") return TransformKind::PCA;
    if (name == "DOWNSAMPLE") return TransformKind::DOWNSAMPLE;
    throw ValueError("unknown transform kind: " + name);
}

std::string impute_strategy_name(ImputeStrategy s) {
    switch (s) {
        case ImputeStrategy::MEAN: return "mean";
        case ImputeStrategy::MEDIAN: return "median";
        case ImputeStrategy::MODE: return "mode";
    }
    throw ValueError("unknown impute strategy");
}

ImputeStrategy impute_strategy_from_name(const std::string& name) {
    if (name == "mean") return ImputeStrategy::MEAN;
    if (name == "median") return ImputeStrategy::MEDIAN;
    if (name == "mode") return ImputeStrategy::MODE;
    throw ValueError("unknown impute strategy: " + name);
}

namespace {

std::vector<double> finite_values(const Eigen::MatrixXd& X, Eigen::Index col) {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        if (std::isfinite(X(i, col))) v.push_back(X(i, col));
    }
    return v;
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Linear-interpolation quantile on a sorted copy.
double quantile(std::vector<double> v, double p) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
}

double mode_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    std::map<double, int> counts;
    for (double x : v) ++counts[x];
    double best = v.front();
    int best_count = 0;
    for (const auto& [value, count] : counts) {
        if (count > best_count) {  // ties keep the smallest value
            best = value;
            best_count = count;
        }
    }
    return best;
}

void check_width(const FittedTransform& t, const Eigen::MatrixXd& X) {
    if (static_cast<int>(X.cols()) != t.n_in) {
        throw DimensionError("transform: expected " + std::to_string(t.n_in) +
                             " columns, got " + std::to_string(X.cols()));
    }
}

std::vector<bool> keep_all(Eigen::Index n) { return std::vector<bool>(static_cast<std::size_t>(n), true); }

std::pair<Eigen::MatrixXd, Eigen::VectorXd> apply_mask(const Eigen::MatrixXd& X,
                                                       const Eigen::VectorXd& y,
                                                       const std::vector<bool>& mask) {
    Eigen::Index kept = 0;
    for (const bool b : mask) kept += b ? 1 : 0;
    Eigen::MatrixXd Xo(kept, X.cols());
    Eigen::VectorXd yo(kept);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        if (!mask[static_cast<std::size_t>(i)]) continue;
        Xo.row(r) = X.row(i);
        yo[r] = y[i];
        ++r;
    }
    return {std::move(Xo), std::move(yo)};
}

}  // namespace

FitResult fit(const TransformSpec& spec, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
              const std::vector<bool>& categorical) {
    if (X.rows() == 0) throw ValueError("transform fit: X is empty");
    if (y.size() != X.rows()) throw DimensionError("transform fit: X/y row mismatch");
    const auto d = X.cols();
    std::vector<bool> cat = categorical;
    if (cat.empty()) cat.assign(static_cast<std::size_t>(d), false);
    if (static_cast<Eigen::Index>(cat.size()) != d) {
        throw DimensionError("transform fit: categorical flag count mismatch");
    }

    FitResult out;
    FittedTransform& t = out.fitted;
    t.spec = spec;
    t.n_in = static_cast<int>(d);
    t.categorical_in = cat;
    t.categorical_out = cat;
    t.n_out = static_cast<int>(d);
    out.row_mask = keep_all(X.rows());

    switch (spec.kind) {
        case TransformKind::IMPUTE: {
            t.col_a.resize(d);
            for (Eigen::Index c = 0; c < d; ++c) {
                const auto v = finite_values(X, c);
                if (cat[static_cast<std::size_t>(c)]) {
                    t.col_a[c] = mode_of(v);
                } else {
                    switch (spec.impute) {
                        case ImputeStrategy::MEAN: t.col_a[c] = mean_of(v); break;
                        case ImputeStrategy::MEDIAN: t.col_a[c] = quantile(v, 0.5); break;
                        case ImputeStrategy::MODE: t.col_a[c] = mode_of(v); break;
                    }
                }
            }
            out.X = t.transform(X);
            out.y = y;
            break;
        }
        case TransformKind::ONE_HOT: {
            t.categories.resize(static_cast<std::size_t>(d));
            int width = 0;
            for (Eigen::Index c = 0; c < d; ++c) {
                if (!cat[static_cast<std::size_t>(c)]) {
                    ++width;
                    continue;
                }
                auto v = finite_values(X, c);
                std::sort(v.begin(), v.end());
                v.erase(std::unique(v.begin(), v.end()), v.end());
                if (v.size() > 64) {
                    throw ValueError("one-hot: column has more than 64 categories");
                }
                t.categories[static_cast<std::size_t>(c)] = v;
                width += static_cast<int>(v.size());
            }
            t.n_out = width;
            t.categorical_out.assign(static_cast<std::size_t>(width), false);
            out.X = t.transform(X);
            out.y = y;
            break;
        }
        case TransformKind::OUTLIER_IQR: {
            t.col_a.resize(d);
            t.col_b.resize(d);
            for (Eigen::Index c = 0; c < d; ++c) {
                if (cat[static_cast<std::size_t>(c)]) {
                    t.col_a[c] = -std::numeric_limits<double>::infinity();
                    t.col_b[c] = std::numeric_limits<double>::infinity();
                    continue;
                }
                const auto v = finite_values(X, c);
                const double q1 = quantile(v, 0.25);
                const double q3 = quantile(v, 0.75);
                const double iqr = q3 - q1;
                t.col_a[c] = q1 - spec.iqr_k * iqr;
                t.col_b[c] = q3 + spec.iqr_k * iqr;
            }
            for (Eigen::Index i = 0; i < X.rows(); ++i) {
                for (Eigen::Index c = 0; c < d; ++c) {
                    const double x = X(i, c);
                    if (std::isfinite(x) && (x < t.col_a[c] || x > t.col_b[c])) {
                        out.row_mask[static_cast<std::size_t>(i)] = false;
                        break;
                    }
                }
            }
            auto [Xm, ym] = apply_mask(X, y, out.row_mask);
            if (Xm.rows() < 2) {
                throw ValueError("outlier removal left fewer than 2 rows");
            }
            out.X = std::move(Xm);
            out.y = std::move(ym);
            break;
        }
        case TransformKind::MINMAX_SYM: {
            t.col_a.resize(d);
            t.col_b.resize(d);
            for (Eigen::Index c = 0; c < d; ++c) {
                const auto v = finite_values(X, c);
                if (v.empty()) {
                    t.col_a[c] = 0.0;
                    t.col_b[c] = 0.0;
                    continue;
                }
                const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
                t.col_a[c] = *lo;
                t.col_b[c] = *hi;
            }
            out.X = t.transform(X);
            out.y = y;
            break;
        }
        case TransformKind::STANDARDIZE: {
            t.col_a.resize(d);
            t.col_b.resize(d);
            for (Eigen::Index c = 0; c < d; ++c) {
                const auto v = finite_values(X, c);
                const double mu = mean_of(v);
                double var = 0.0;
                for (double x : v) var += (x - mu) * (x - mu);
                var = v.empty() ? 0.0 : var / static_cast<double>(v.size());
                t.col_a[c] = mu;
                t.col_b[c] = std::sqrt(var);
            }
            out.X = t.transform(X);
            out.y = y;
            break;
        }
        case TransformKind::PCA: {
            const int k = spec.pca_components;
            if (k < 1 || k > std::min(X.rows(), d)) {
                throw ValueError("pca: components must be in [1, min(rows, cols)]");
            }
            if (!X.allFinite()) throw ValueError("pca: input contains non-finite values");
            t.center = X.colwise().mean();
            const Eigen::MatrixXd centered = X.rowwise() - t.center.transpose();
            Eigen::BDCSVD<Eigen::MatrixXd> svd(centered,
                                               Eigen::ComputeThinU | Eigen::ComputeThinV);
            t.singular_values = svd.singularValues();
            Eigen::MatrixXd comps = svd.matrixV().leftCols(k).transpose();  // k x d
            // Sign convention: the largest-magnitude entry of each component
            // is positive, so serialized pipelines are unique.
            for (Eigen::Index r = 0; r < comps.rows(); ++r) {
                Eigen::Index arg = 0;
                comps.row(r).cwiseAbs().maxCoeff(&arg);
                if (comps(r, arg) < 0.0) comps.row(r) *= -1.0;
            }
            t.components = comps;
            t.n_out = k;
            t.categorical_out.assign(static_cast<std::size_t>(k), false);
            out.X = t.transform(X);
            out.y = y;
            break;
        }
        case TransformKind::DOWNSAMPLE: {
            if (!(spec.downsample_ratio > 0.0) || spec.downsample_ratio > 1.0) {
                throw ValueError("downsample: ratio must be in (0, 1]");
            }
            const auto n = X.rows();
            const auto keep = std::max<Eigen::Index>(
                2, static_cast<Eigen::Index>(std::ceil(spec.downsample_ratio *
                                                       static_cast<double>(n))));
            if (keep < n) {
                std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
                for (std::size_t i = 0; i < idx.size(); ++i) {
                    idx[i] = static_cast<Eigen::Index>(i);
                }
                Rng rng(derive_seed(spec.seed, 0xD05A));
                rng.shuffle(idx);
                std::fill(out.row_mask.begin(), out.row_mask.end(), false);
                for (Eigen::Index i = 0; i < keep; ++i) {
                    out.row_mask[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] =
                        true;  // mask keeps original row order
                }
            }
            auto [Xm, ym] = apply_mask(X, y, out.row_mask);
            out.X = std::move(Xm);
            out.y = std::move(ym);
            break;
        }
    }
    return out;
}

Eigen::MatrixXd FittedTransform::transform(const Eigen::MatrixXd& X) const {
    check_width(*this, X);
    const auto d = X.cols();
    switch (spec.kind) {
        case TransformKind::IMPUTE: {
            Eigen::MatrixXd out = X;
            for (Eigen::Index i = 0; i < out.rows(); ++i) {
                for (Eigen::Index c = 0; c < d; ++c) {
                    if (!std::isfinite(out(i, c))) out(i, c) = col_a[c];
                }
            }
            return out;
        }
        case TransformKind::ONE_HOT: {
            Eigen::MatrixXd out = Eigen::MatrixXd::Zero(X.rows(), n_out);
            for (Eigen::Index i = 0; i < X.rows(); ++i) {
                Eigen::Index oc = 0;
                for (Eigen::Index c = 0; c < d; ++c) {
                    if (!categorical_in[static_cast<std::size_t>(c)]) {
                        out(i, oc++) = X(i, c);
                        continue;
                    }
                    const auto& cats = categories[static_cast<std::size_t>(c)];
                    for (std::size_t k = 0; k < cats.size(); ++k) {
                        // unseen categories encode as all-zeros
                        out(i, oc + static_cast<Eigen::Index>(k)) =
                            X(i, c) == cats[k] ? 1.0 : 0.0;
                    }
                    oc += static_cast<Eigen::Index>(cats.size());
                }
            }
            return out;
        }
        case TransformKind::OUTLIER_IQR:
        case TransformKind::DOWNSAMPLE:
            return X;  // row filters act at fit time only
        case TransformKind::MINMAX_SYM: {
            Eigen::MatrixXd out(X.rows(), d);
            for (Eigen::Index c = 0; c < d; ++c) {
                const double lo = col_a[c];
                const double span = col_b[c] - col_a[c];
                for (Eigen::Index i = 0; i < X.rows(); ++i) {
                    if (!std::isfinite(X(i, c))) {
                        out(i, c) = X(i, c);
                        continue;
                    }
                    double s = span > 0.0 ? -1.0 + 2.0 * (X(i, c) - lo) / span : 0.0;
                    out(i, c) = std::clamp(s, -1.5, 1.5);
                }
            }
            return out;
        }
        case TransformKind::STANDARDIZE: {
            Eigen::MatrixXd out(X.rows(), d);
            for (Eigen::Index c = 0; c < d; ++c) {
                const double mu = col_a[c];
                const double sd = col_b[c];
                for (Eigen::Index i = 0; i < X.rows(); ++i) {
                    out(i, c) = sd > 0.0 ? (X(i, c) - mu) / sd : 0.0;
                }
            }
            return out;
        }
        case TransformKind::PCA:
            return (X.rowwise() - center.transpose()) * components.transpose();
    }
    throw ValueError("unknown transform kind");
}

Eigen::MatrixXd FittedTransform::pca_inverse(const Eigen::MatrixXd& T) const {
    if (spec.kind != TransformKind::PCA) {
        throw ValueError("pca_inverse: transform is not PCA");
    }
    return (T * components).rowwise() + center.transpose();
}

Eigen::VectorXd FittedTransform::explained_variance_ratio() const {
    if (spec.kind != TransformKind::PCA) {
        throw ValueError("explained_variance_ratio: transform is not PCA");
    }
    const double total = singular_values.squaredNorm();
    if (total <= 0.0) return Eigen::VectorXd::Zero(components.rows());
    return singular_values.head(components.rows()).array().square() / total;
}

WindowedSeries sliding_window(const Eigen::VectorXd& series, int lags) {
    if (lags < 1) throw ValueError("sliding_window: lags must be >= 1");
    if (series.size() <= lags) throw ValueError("sliding_window: series too short");
    const Eigen::Index n = series.size() - lags;
    WindowedSeries out;
    out.X.resize(n, lags);
    out.y.resize(n);
    for (Eigen::Index t = 0; t < n; ++t) {
        for (int l = 0; l < lags; ++l) out.X(t, l) = series[t + l];
        out.y[t] = series[t + lags];
    }
    return out;
}

}  // namespace qaml::prep
