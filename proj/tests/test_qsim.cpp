#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qaml/simulator.hpp"

using namespace qaml;
using namespace qaml::sim;
using std::numbers::pi;

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;

StateVector run(const Circuit& c, std::vector<double> features = {},
                std::vector<double> trainables = {}) {
    return simulate(c, features, trainables);
}
}  // namespace

TEST_CASE("hadamard on |0> gives the equal superposition") {
    StateVector s(1);
    apply_gate(s, Gate::one_qubit(GateKind::H, 0), 0.0);
    CHECK(s[0].real() == doctest::Approx(kInvSqrt2).epsilon(1e-14));
    CHECK(s[1].real() == doctest::Approx(kInvSqrt2).epsilon(1e-14));
    CHECK(std::abs(s[0].imag()) < 1e-15);
}

TEST_CASE("RY(0) is the identity") {
    StateVector s(2);
    apply_gate(s, Gate::one_qubit(GateKind::H, 0), 0.0);
    const auto before = s.amplitudes();
    apply_gate(s, Gate::rotation(GateKind::RY, 1, AngleSource::from_literal(0.0)), 0.0);
    for (std::size_t i = 0; i < s.dim(); ++i) {
        CHECK(std::abs(s[i] - before[i]) < 1e-15);
    }
}

TEST_CASE("CX after H builds the Bell state") {
    StateVector s(2);
    apply_gate(s, Gate::one_qubit(GateKind::H, 0), 0.0);
    apply_gate(s, Gate::controlled(GateKind::CX, 0, 1), 0.0);
    CHECK(std::abs(s[0b00] - std::complex<double>(kInvSqrt2, 0)) < 1e-12);
    CHECK(std::abs(s[0b11] - std::complex<double>(kInvSqrt2, 0)) < 1e-12);
    CHECK(std::abs(s[0b01]) < 1e-15);
    CHECK(std::abs(s[0b10]) < 1e-15);
}

TEST_CASE("apply_gate rejects out-of-range targets") {
    StateVector s(2);
    CHECK_THROWS_AS(apply_gate(s, Gate::one_qubit(GateKind::H, 2), 0.0), ValueError);
    CHECK_THROWS_AS(apply_gate(s, Gate::controlled(GateKind::CX, 1, 1), 0.0), ValueError);
}

TEST_CASE("empty circuit leaves |0...0>") {
    Circuit c;
    c.n_qubits = 3;
    const StateVector s = run(c);
    CHECK(s[0] == std::complex<double>(1.0, 0.0));
    CHECK(s.norm_sq() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("RY(pi) on a feature flips |0> to |1>") {
    Circuit c;
    c.n_qubits = 1;
    c.n_features = 1;
    c.gates.push_back(Gate::rotation(GateKind::RY, 0, AngleSource::from_feature(0)));
    const StateVector s = run(c, {pi});
    CHECK(std::abs(s[0]) < 1e-12);
    CHECK(std::abs(s[1] - std::complex<double>(1.0, 0.0)) < 1e-12);
}

TEST_CASE("simulate validates input lengths and angle finiteness") {
    Circuit c;
    c.n_qubits = 1;
    c.n_features = 1;
    c.gates.push_back(Gate::rotation(GateKind::RY, 0, AngleSource::from_feature(0)));
    CHECK_THROWS_AS(run(c, {}), DimensionError);
    CHECK_THROWS_AS(run(c, {1.0, 2.0}), DimensionError);
    CHECK_THROWS_AS(run(c, {std::numeric_limits<double>::infinity()}), ValueError);
}

TEST_CASE("expectation examples") {
    SUBCASE("Z on |0> is +1") {
        StateVector s(1);
        CHECK(expectation(s, PauliObservable::single(Pauli::Z, 0)) ==
              doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("Z after RY(theta) equals cos(theta)") {
        for (const double theta : {0.0, pi / 3.0, pi / 2.0}) {
            StateVector s(1);
            apply_gate(s, Gate::rotation(GateKind::RY, 0, AngleSource::from_literal(theta)),
                       theta);
            CHECK(expectation(s, PauliObservable::single(Pauli::Z, 0)) ==
                  doctest::Approx(std::cos(theta)).epsilon(1e-12));
        }
    }
    SUBCASE("ZZ on the Bell state is +1") {
        StateVector s(2);
        apply_gate(s, Gate::one_qubit(GateKind::H, 0), 0.0);
        apply_gate(s, Gate::controlled(GateKind::CX, 0, 1), 0.0);
        PauliObservable zz;
        zz.terms.push_back({1.0, {{0, Pauli::Z}, {1, Pauli::Z}}});
        CHECK(expectation(s, zz) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("observable qubit out of range throws") {
        StateVector s(1);
        CHECK_THROWS_AS(expectation(s, PauliObservable::single(Pauli::X, 1)), ValueError);
    }
}

TEST_CASE("fidelity examples") {
    StateVector zero(1);
    SUBCASE("identical states") {
        CHECK(fidelity(zero, zero) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("orthogonal states") {
        StateVector one(1);
        apply_gate(one, Gate::rotation(GateKind::RY, 0, AngleSource::from_literal(pi)), pi);
        CHECK(fidelity(zero, one) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("RY(pi/2) overlap is 1/2") {
        StateVector half(1);
        apply_gate(half, Gate::rotation(GateKind::RY, 0, AngleSource::from_literal(pi / 2)),
                   pi / 2);
        CHECK(fidelity(zero, half) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("dimension mismatch throws") {
        StateVector two(2);
        CHECK_THROWS_AS(fidelity(zero, two), DimensionError);
    }
}

TEST_CASE("parameter-shift gradient analytic cases") {
    Circuit c;
    c.n_qubits = 1;
    c.n_trainable = 1;
    c.gates.push_back(Gate::rotation(GateKind::RY, 0, AngleSource::from_trainable(0)));
    const auto z = PauliObservable::single(Pauli::Z, 0);
    // d cos(theta) / d theta
    const std::vector<double> at_zero = {0.0};
    const std::vector<double> at_half = {pi / 2};
    CHECK(param_shift_gradient(c, {}, at_zero, z)[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(param_shift_gradient(c, {}, at_half, z)[0] ==
          doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("parameter-shift matches finite differences on random 4-qubit circuits") {
    Rng rng(2024);
    for (int rep = 0; rep < 12; ++rep) {
        const int n_theta = 3 + static_cast<int>(rng.index(3));
        const Circuit c = oracle::random_circuit(rng, 4, 18, n_theta);
        std::vector<double> theta(static_cast<std::size_t>(n_theta));
        for (auto& t : theta) t = rng.uniform(-1.5, 1.5);
        PauliObservable obs;
        obs.terms.push_back({0.7, {{0, Pauli::Z}, {2, Pauli::X}}});
        obs.terms.push_back({-0.4, {{1, Pauli::Y}}});
        obs.identity_weight = 0.2;

        const auto analytic = param_shift_gradient(c, {}, theta, obs);
        const auto numeric = oracle::finite_difference(
            [&](const std::vector<double>& th) {
                return expectation(simulate(c, {}, th), obs);
            },
            theta);
        for (std::size_t j = 0; j < theta.size(); ++j) {
            const double scale = std::max(1.0, std::abs(numeric[j]));
            CHECK(std::abs(analytic[j] - numeric[j]) / scale < 1e-6);
        }
    }
}

TEST_CASE("simulator agrees with the dense Kronecker oracle") {
    Rng rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 1 + static_cast<int>(rng.index(4));
        const Circuit c = oracle::random_circuit(rng, n, 12);
        const StateVector fast = run(c);
        const oracle::CVec dense = oracle::simulate_dense(c, {}, {});
        for (std::size_t i = 0; i < fast.dim(); ++i) {
            CHECK(std::abs(fast[i] - dense[static_cast<Eigen::Index>(i)]) < 1e-10);
        }
    }
}

TEST_CASE("norm is preserved over 1000 random circuits") {
    Rng rng(99);
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = 1 + static_cast<int>(rng.index(6));
        const int g = 1 + static_cast<int>(rng.index(40));
        const Circuit c = oracle::random_circuit(rng, n, g);
        CHECK(std::abs(run(c).norm_sq() - 1.0) < 1e-10);
    }
}

TEST_CASE("gate followed by its inverse restores the state") {
    Rng rng(4242);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 2 + static_cast<int>(rng.index(3));
        StateVector s(n);
        // randomize the state a bit first
        const Circuit pre = oracle::random_circuit(rng, n, 6);
        s = run(pre);
        const auto before = s.amplitudes();

        const Circuit step = oracle::random_circuit(rng, n, 1);
        const Gate& gate = step.gates.at(0);
        double angle = 0.0;
        if (is_rotation(gate.kind)) angle = resolve_angle(gate, {}, {});
        apply_gate(s, gate, angle);
        apply_gate(s, gate, -angle);  // rotations invert by negation; H/CX/CZ self-invert
        for (std::size_t i = 0; i < s.dim(); ++i) {
            CHECK(std::abs(s[i] - before[i]) < 1e-12);
        }
    }
}

TEST_CASE("expectation magnitude is bounded by the coefficient sum") {
    Rng rng(5);
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 2 + static_cast<int>(rng.index(3));
        const Circuit c = oracle::random_circuit(rng, n, 15);
        const StateVector s = run(c);
        PauliObservable obs;
        for (int t = 0; t < 3; ++t) {
            PauliTerm term;
            term.coefficient = rng.uniform(-2.0, 2.0);
            term.factors[static_cast<int>(rng.index(static_cast<std::size_t>(n)))] =
                static_cast<Pauli>(rng.index(3));
            obs.terms.push_back(term);
        }
        CHECK(std::abs(expectation(s, obs)) <= obs.coefficient_bound() + 1e-12);
    }
}

TEST_CASE("trainable angles on non-rotation gates are rejected") {
    Circuit c;
    c.n_qubits = 2;
    c.n_trainable = 1;
    Gate bad = Gate::controlled(GateKind::CX, 0, 1);
    bad.source = AngleSource::from_trainable(0);
    c.gates.push_back(bad);
    CHECK_THROWS_AS(c.validate(), ValueError);
}

TEST_CASE("statevector caps at 16 qubits") {
    CHECK_THROWS_AS(StateVector(17), ValueError);
    CHECK_THROWS_AS(StateVector(0), ValueError);
    CHECK(StateVector(16).dim() == 65536);
}
