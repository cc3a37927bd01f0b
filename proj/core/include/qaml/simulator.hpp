// Statevector simulation: gate application, circuit execution, Pauli
// expectations, fidelities and parameter-shift gradients.

#pragma once

#include <span>
#include <vector>

#include "qaml/circuit.hpp"
#include "qaml/observable.hpp"
#include "qaml/statevector.hpp"

namespace qaml::sim {

// Resolved angle of a gate given bound feature/trainable vectors:
// scale * (literal + feature part + trainable part).
double resolve_angle(const Gate& gate, std::span<const double> features,
                     std::span<const double> trainables);

// Applies a single gate in place. `angle` is the already-resolved angle and
// is ignored for non-rotation kinds. Norm is preserved to 1e-12.
void apply_gate(StateVector& state, const Gate& gate, double angle);

// Runs the circuit on |0...0>. Deterministic for fixed inputs.
StateVector simulate(const Circuit& circuit, std::span<const double> features,
                     std::span<const double> trainables = {});

// As simulate(), but adds `angle_offset` to the resolved angle of the gate at
// `shift_gate` (used by the parameter-shift rule).
StateVector simulate_shifted(const Circuit& circuit, std::span<const double> features,
                             std::span<const double> trainables, std::size_t shift_gate,
                             double angle_offset);

// <psi|O|psi>. Throws ConsistencyError if the imaginary residue exceeds 1e-10.
double expectation(const StateVector& state, const PauliObservable& obs);

// |<a|b>|^2, clamped into [0, 1] (values up to 1 + 1e-12 tolerated).
double fidelity(const StateVector& a, const StateVector& b);

// d<O>/d(theta_j) for every trainable j via the parameter-shift rule.
std::vector<double> param_shift_gradient(const Circuit& circuit,
                                         std::span<const double> features,
                                         std::span<const double> trainables,
                                         const PauliObservable& obs);

}  // namespace qaml::sim
