#include <benchmark/benchmark.h>

#include "qaml/kernels.hpp"
#include "qaml/rng.hpp"
#include "qaml/smo.hpp"

using namespace qaml;

namespace {

Eigen::MatrixXd random_points(Rng& rng, int n, int d) {
    Eigen::MatrixXd X(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) X(i, j) = rng.uniform(-1.0, 1.0);
    }
    return X;
}

kernels::KernelSpec spec_for(int qubits, kernels::KernelKind kind) {
    kernels::KernelSpec spec;
    spec.kind = kind;
    spec.encoding.family = encoding::Family::YZ_CX;
    spec.encoding.n_qubits = qubits;
    spec.encoding.n_layers = 2;
    if (kind == kernels::KernelKind::PQK) {
        spec.pqk_paulis = {sim::Pauli::X, sim::Pauli::Z};
        spec.outer.kind = kernels::OuterKind::GAUSSIAN;
        spec.outer.gamma = 0.7;
    }
    return spec;
}

}  // namespace

static void BM_FqkGram(benchmark::State& state) {
    Rng rng(1);
    const int n = static_cast<int>(state.range(0));
    const auto spec = spec_for(8, kernels::KernelKind::FQK);
    const Eigen::MatrixXd X = random_points(rng, n, 8);
    for (auto _ : state) {
        const auto g = kernels::gram_symmetric(spec, X);
        benchmark::DoNotOptimize(g.values.data());
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_FqkGram)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_PqkGram(benchmark::State& state) {
    Rng rng(2);
    const int n = static_cast<int>(state.range(0));
    const auto spec = spec_for(8, kernels::KernelKind::PQK);
    const Eigen::MatrixXd X = random_points(rng, n, 8);
    for (auto _ : state) {
        const auto g = kernels::gram_symmetric(spec, X);
        benchmark::DoNotOptimize(g.values.data());
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_PqkGram)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_SmoSolve(benchmark::State& state) {
    Rng rng(3);
    const int n = static_cast<int>(state.range(0));
    const Eigen::MatrixXd X = random_points(rng, n, 4);
    const Eigen::MatrixXd K = kernels::rbf_gram(X, X, 1.0);
    std::vector<double> y(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = X(static_cast<Eigen::Index>(i), 0) > 0 ? 1.0 : -1.0;
    const Eigen::VectorXd p = Eigen::VectorXd::Constant(n, -1.0);
    for (auto _ : state) {
        const auto r = models::smo_solve(K, y, p, 10.0);
        benchmark::DoNotOptimize(r.alpha.data());
    }
}
BENCHMARK(BM_SmoSolve)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_PsdRepair(benchmark::State& state) {
    Rng rng(4);
    const int n = static_cast<int>(state.range(0));
    const Eigen::MatrixXd A = random_points(rng, n, n);
    kernels::GramMatrix K{A * A.transpose() / static_cast<double>(n), true};
    K.values.diagonal().array() -= 1e-5;  // force a slightly indefinite input
    for (auto _ : state) {
        const auto r = kernels::psd_repair(K);
        benchmark::DoNotOptimize(r.values.data());
    }
}
BENCHMARK(BM_PsdRepair)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
