#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "qaml/transforms.hpp"

using namespace qaml;
using namespace qaml::prep;

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

FitResult fit_plain(const TransformSpec& spec, const Eigen::MatrixXd& X) {
    return fit(spec, X, Eigen::VectorXd::Zero(X.rows()), {});
}
}  // namespace

TEST_CASE("minmax_sym fits column extremes and maps the midpoint to zero") {
    Eigen::MatrixXd X(3, 1);
    X << 0.0, 5.0, 10.0;
    TransformSpec spec;
    spec.kind = TransformKind::MINMAX_SYM;
    const FitResult r = fit_plain(spec, X);
    CHECK(r.fitted.col_a[0] == 0.0);
    CHECK(r.fitted.col_b[0] == 10.0);
    Eigen::MatrixXd probe(1, 1);
    probe << 5.0;
    CHECK(r.fitted.transform(probe)(0, 0) == doctest::Approx(0.0));
    // training outputs live in [-1, 1]
    CHECK(r.X.minCoeff() == doctest::Approx(-1.0));
    CHECK(r.X.maxCoeff() == doctest::Approx(1.0));
    // unseen values clamp to [-1.5, 1.5]
    probe << 100.0;
    CHECK(r.fitted.transform(probe)(0, 0) == doctest::Approx(1.5));
    probe << -100.0;
    CHECK(r.fitted.transform(probe)(0, 0) == doctest::Approx(-1.5));
    // values only slightly outside stay unclamped
    probe << 11.0;
    CHECK(r.fitted.transform(probe)(0, 0) == doctest::Approx(1.2));
}

TEST_CASE("standardize yields mean 0, std 1 on fit data") {
    Rng rng(2);
    Eigen::MatrixXd X(40, 3);
    for (Eigen::Index i = 0; i < 40; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) X(i, j) = rng.uniform(-5.0, 9.0);
    }
    TransformSpec spec;
    spec.kind = TransformKind::STANDARDIZE;
    const FitResult r = fit_plain(spec, X);
    for (Eigen::Index j = 0; j < 3; ++j) {
        const double mean = r.X.col(j).mean();
        const double var = (r.X.col(j).array() - mean).square().mean();
        CHECK(std::abs(mean) < 1e-10);
        CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-10);
    }
}

TEST_CASE("impute strategies") {
    Eigen::MatrixXd X(5, 2);
    X << 1.0, 10.0, 2.0, kNaN, 3.0, 10.0, kNaN, 30.0, 100.0, 10.0;
    TransformSpec spec;
    spec.kind = TransformKind::IMPUTE;

    SUBCASE("mean") {
        spec.impute = ImputeStrategy::MEAN;
        const FitResult r = fit_plain(spec, X);
        CHECK(r.fitted.col_a[0] == doctest::Approx((1.0 + 2.0 + 3.0 + 100.0) / 4.0));
        CHECK(r.X.allFinite());
    }
    SUBCASE("median") {
        spec.impute = ImputeStrategy::MEDIAN;
        const FitResult r = fit_plain(spec, X);
        CHECK(r.fitted.col_a[0] == doctest::Approx(2.5));
    }
    SUBCASE("mode") {
        spec.impute = ImputeStrategy::MODE;
        const FitResult r = fit_plain(spec, X);
        CHECK(r.fitted.col_a[1] == doctest::Approx(10.0));
    }
    SUBCASE("categorical columns always take the mode") {
        spec.impute = ImputeStrategy::MEAN;
        const FitResult r = fit(spec, X, Eigen::VectorXd::Zero(5), {false, true});
        CHECK(r.fitted.col_a[1] == doctest::Approx(10.0));
    }
}

TEST_CASE("one-hot expands categorical columns in place") {
    Eigen::MatrixXd X(4, 2);
    // categorical codes 0/1/2 in column 1
    X << 7.0, 0.0, 8.0, 1.0, 9.0, 2.0, 7.5, 1.0;
    TransformSpec spec;
    spec.kind = TransformKind::ONE_HOT;
    const FitResult r = fit(spec, X, Eigen::VectorXd::Zero(4), {false, true});
    CHECK(r.fitted.n_out == 4);  // 1 numeric + 3 categories
    CHECK(r.X.cols() == 4);
    CHECK(r.X(0, 1) == 1.0);
    CHECK(r.X(1, 2) == 1.0);
    CHECK(r.X(2, 3) == 1.0);
    CHECK(r.X.row(3).segment(1, 3).sum() == 1.0);

    // unseen category encodes as all zeros
    Eigen::MatrixXd probe(1, 2);
    probe << 7.0, 9.0;
    const Eigen::MatrixXd t = r.fitted.transform(probe);
    CHECK(t.row(0).segment(1, 3).cwiseAbs().sum() == 0.0);
}

TEST_CASE("one-hot takes 6 price-like columns to 16") {
    Rng rng(5);
    Eigen::MatrixXd X(40, 6);
    for (Eigen::Index i = 0; i < 40; ++i) {
        X(i, 0) = rng.uniform(2004, 2024);
        X(i, 1) = rng.uniform(100, 10000);
        X(i, 2) = rng.uniform(40, 75);
        X(i, 3) = rng.uniform(7, 10);
        X(i, 4) = static_cast<double>(i % 9);  // 9-value categorical
        X(i, 5) = static_cast<double>(i % 3);  // 3-value categorical
    }
    TransformSpec spec;
    spec.kind = TransformKind::ONE_HOT;
    const FitResult r =
        fit(spec, X, Eigen::VectorXd::Zero(40), {false, false, false, false, true, true});
    CHECK(r.fitted.n_out == 16);
}

TEST_CASE("one-hot rejects more than 64 categories") {
    Eigen::MatrixXd X(100, 1);
    for (Eigen::Index i = 0; i < 100; ++i) X(i, 0) = static_cast<double>(i);
    TransformSpec spec;
    spec.kind = TransformKind::ONE_HOT;
    CHECK_THROWS_AS(fit(spec, X, Eigen::VectorXd::Zero(100), {true}), ValueError);
}

TEST_CASE("outlier removal drops rows at fit time only") {
    Eigen::MatrixXd X(12, 1);
    for (Eigen::Index i = 0; i < 11; ++i) X(i, 0) = static_cast<double>(i % 5);
    X(11, 0) = 1000.0;
    Eigen::VectorXd y(12);
    for (Eigen::Index i = 0; i < 12; ++i) y[i] = static_cast<double>(i);
    TransformSpec spec;
    spec.kind = TransformKind::OUTLIER_IQR;
    spec.iqr_k = 3.0;
    const FitResult r = fit(spec, X, y, {});
    CHECK(r.X.rows() == 11);
    CHECK(r.y.size() == 11);
    CHECK(!r.row_mask[11]);
    CHECK(r.y[10] == 10.0);
    // predict path never drops rows
    const Eigen::MatrixXd t = r.fitted.transform(X);
    CHECK(t.rows() == 12);
    CHECK(t(11, 0) == 1000.0);
}

TEST_CASE("pca") {
    SUBCASE("collinear data explains everything with one component") {
        Eigen::MatrixXd X(6, 2);
        for (Eigen::Index i = 0; i < 6; ++i) {
            X(i, 0) = static_cast<double>(i);
            X(i, 1) = 2.0 * static_cast<double>(i) + 1.0;
        }
        TransformSpec spec;
        spec.kind = TransformKind::PCA;
        spec.pca_components = 1;
        const FitResult r = fit_plain(spec, X);
        CHECK(r.fitted.explained_variance_ratio()[0] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("components are orthonormal and reconstruction matches the SVD bound") {
        Rng rng(7);
        Eigen::MatrixXd X(30, 6);
        for (Eigen::Index i = 0; i < 30; ++i) {
            for (Eigen::Index j = 0; j < 6; ++j) X(i, j) = rng.uniform(-2.0, 2.0);
        }
        TransformSpec spec;
        spec.kind = TransformKind::PCA;
        spec.pca_components = 3;
        const FitResult r = fit_plain(spec, X);

        const Eigen::MatrixXd vvt =
            r.fitted.components * r.fitted.components.transpose();
        CHECK((vvt - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-8);

        const Eigen::MatrixXd recon = r.fitted.pca_inverse(r.X);
        const double err = (X - recon).squaredNorm();
        // discarded singular values squared
        double expected = 0.0;
        for (Eigen::Index i = 3; i < r.fitted.singular_values.size(); ++i) {
            expected += r.fitted.singular_values[i] * r.fitted.singular_values[i];
        }
        CHECK(err == doctest::Approx(expected).epsilon(1e-8));
    }
    SUBCASE("sign convention pins the largest component entry positive") {
        Rng rng(9);
        Eigen::MatrixXd X(20, 4);
        for (Eigen::Index i = 0; i < 20; ++i) {
            for (Eigen::Index j = 0; j < 4; ++j) X(i, j) = rng.uniform(-1.0, 1.0);
        }
        TransformSpec spec;
        spec.kind = TransformKind::PCA;
        spec.pca_components = 2;
        const FitResult r = fit_plain(spec, X);
        for (Eigen::Index c = 0; c < 2; ++c) {
            Eigen::Index arg = 0;
            r.fitted.components.row(c).cwiseAbs().maxCoeff(&arg);
            CHECK(r.fitted.components(c, arg) > 0.0);
        }
    }
    SUBCASE("k beyond min(rows, cols) is rejected") {
        Eigen::MatrixXd X(3, 2);
        X.setRandom();
        TransformSpec spec;
        spec.kind = TransformKind::PCA;
        spec.pca_components = 3;
        CHECK_THROWS_AS(fit_plain(spec, X), ValueError);
    }
}

TEST_CASE("downsample keeps a seeded subset in original row order") {
    Eigen::MatrixXd X(20, 1);
    Eigen::VectorXd y(20);
    for (Eigen::Index i = 0; i < 20; ++i) {
        X(i, 0) = static_cast<double>(i);
        y[i] = static_cast<double>(i);
    }
    TransformSpec spec;
    spec.kind = TransformKind::DOWNSAMPLE;
    spec.downsample_ratio = 0.5;
    spec.seed = 77;
    const FitResult a = fit(spec, X, y, {});
    const FitResult b = fit(spec, X, y, {});
    CHECK(a.X.rows() == 10);
    CHECK(a.X == b.X);  // seeded determinism
    for (Eigen::Index i = 1; i < a.X.rows(); ++i) CHECK(a.X(i, 0) > a.X(i - 1, 0));
    CHECK(a.fitted.transform(X).rows() == 20);  // identity at predict time
}

TEST_CASE("no leakage: transform statistics ignore non-fit rows") {
    Rng rng(10);
    Eigen::MatrixXd X(25, 2);
    for (Eigen::Index i = 0; i < 25; ++i) {
        X(i, 0) = rng.uniform(0.0, 1.0);
        X(i, 1) = rng.uniform(-3.0, 3.0);
    }
    TransformSpec spec;
    spec.kind = TransformKind::STANDARDIZE;
    const FitResult r = fit_plain(spec, X.topRows(20));
    // refitting on the same 20 rows after removing unrelated rows changes nothing
    const FitResult r2 = fit_plain(spec, X.topRows(20));
    CHECK(r.fitted.col_a == r2.fitted.col_a);
    const Eigen::MatrixXd t1 = r.fitted.transform(X.topRows(20));
    const Eigen::MatrixXd t2 = r2.fitted.transform(X.topRows(20));
    CHECK(t1 == t2);  // bit-identical repeatability
}

TEST_CASE("schema width is checked at transform time") {
    Eigen::MatrixXd X(4, 2);
    X.setRandom();
    TransformSpec spec;
    spec.kind = TransformKind::MINMAX_SYM;
    const FitResult r = fit_plain(spec, X);
    Eigen::MatrixXd bad(4, 3);
    bad.setRandom();
    CHECK_THROWS_AS(r.fitted.transform(bad), DimensionError);
}

TEST_CASE("sliding window") {
    Eigen::VectorXd series(5);
    series << 1, 2, 3, 4, 5;
    SUBCASE("lag-4 window of a 5-point series") {
        const WindowedSeries w = sliding_window(series, 4);
        REQUIRE(w.X.rows() == 1);
        CHECK(w.X(0, 0) == 1.0);
        CHECK(w.X(0, 1) == 2.0);
        CHECK(w.X(0, 2) == 3.0);
        CHECK(w.X(0, 3) == 4.0);
        CHECK(w.y[0] == 5.0);
    }
    SUBCASE("constant series windows to constants") {
        const WindowedSeries w = sliding_window(Eigen::VectorXd::Constant(10, 2.5), 4);
        CHECK(w.X.minCoeff() == 2.5);
        CHECK(w.X.maxCoeff() == 2.5);
        CHECK(w.y.minCoeff() == 2.5);
    }
    SUBCASE("too-short series and bad lags throw") {
        CHECK_THROWS_AS(sliding_window(series, 5), ValueError);
        CHECK_THROWS_AS(sliding_window(series, 0), ValueError);
    }
}
