#include <benchmark/benchmark.h>

#include "qaml/encoding.hpp"
#include "qaml/rng.hpp"
#include "qaml/simulator.hpp"

using namespace qaml;

static void BM_GateApplication(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    sim::StateVector psi(n);
    const auto gate =
        sim::Gate::rotation(sim::GateKind::RY, n / 2, sim::AngleSource::from_literal(0.7));
    for (auto _ : state) {
        sim::apply_gate(psi, gate, 0.7);
        benchmark::DoNotOptimize(psi.amplitudes().data());
    }
    state.SetItemsProcessed(state.iterations() << n);
}
BENCHMARK(BM_GateApplication)->Arg(6)->Arg(10)->Arg(14);

static void BM_EncodingSimulation(benchmark::State& state) {
    encoding::EncodingCircuitSpec spec;
    spec.family = encoding::Family::YZ_CX;
    spec.n_qubits = static_cast<int>(state.range(0));
    spec.n_layers = 3;
    const auto circuit = encoding::build(spec, spec.n_qubits);
    std::vector<double> x(static_cast<std::size_t>(spec.n_qubits), 0.4);
    for (auto _ : state) {
        const auto psi = sim::simulate(circuit, x);
        benchmark::DoNotOptimize(psi[0]);
    }
}
BENCHMARK(BM_EncodingSimulation)->Arg(4)->Arg(8)->Arg(12);

static void BM_IsingExpectation(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    encoding::EncodingCircuitSpec spec;
    spec.family = encoding::Family::HW_EFFICIENT;
    spec.n_qubits = n;
    spec.n_layers = 2;
    const auto circuit = encoding::build(spec, n);
    std::vector<double> x(static_cast<std::size_t>(n), 0.3);
    const auto psi = sim::simulate(circuit, x);
    const auto obs = sim::PauliObservable::ising(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sim::expectation(psi, obs));
    }
}
BENCHMARK(BM_IsingExpectation)->Arg(6)->Arg(10);

BENCHMARK_MAIN();
