#include "qaml/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>

namespace qaml::sim {

namespace {

using cplx = std::complex<double>;

// Applies the 2x2 unitary [[u00, u01], [u10, u11]] to the target qubit,
// optionally restricted to the control-set subspace.
void apply_two_by_two(StateVector& state, int target, int control, cplx u00, cplx u01,
                      cplx u10, cplx u11) {
    const std::size_t dim = state.dim();
    const std::size_t tbit = std::size_t{1} << target;
    const std::size_t cbit = control >= 0 ? (std::size_t{1} << control) : 0;
    auto& amps = state.amplitudes();
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & tbit) continue;
        if (cbit && !(i & cbit)) continue;
        const std::size_t j = i | tbit;
        const cplx a0 = amps[i];
        const cplx a1 = amps[j];
        amps[i] = u00 * a0 + u01 * a1;
        amps[j] = u10 * a0 + u11 * a1;
    }
}

void check_qubit(const StateVector& state, int q, const char* what) {
    if (q < 0 || q >= state.n_qubits()) {
        throw ValueError(std::string("apply_gate: ") + what + " index out of range");
    }
}

double term_expectation(const StateVector& state, const PauliTerm& term, double* imag_acc) {
    std::size_t mask_flip = 0;  // X and Y factors flip the bit
    std::size_t mask_sign = 0;  // Y and Z factors contribute (-1)^bit
    int n_y = 0;
    for (const auto& [q, p] : term.factors) {
        const std::size_t bit = std::size_t{1} << q;
        switch (p) {
            case Pauli::X: mask_flip |= bit; break;
            case Pauli::Y:
                mask_flip |= bit;
                mask_sign |= bit;
                ++n_y;
                break;
            case Pauli::Z: mask_sign |= bit; break;
        }
    }
    // i^n_y as a complex phase
    static constexpr cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const cplx y_phase = i_pow[n_y & 3];

    cplx acc{0.0, 0.0};
    const auto& amps = state.amplitudes();
    const std::size_t dim = state.dim();
    for (std::size_t j = 0; j < dim; ++j) {
        const std::size_t k = j ^ mask_flip;  // P|k> lands on |j>
        const double sign = (std::popcount(k & mask_sign) & 1) ? -1.0 : 1.0;
        acc += std::conj(amps[j]) * (sign * amps[k]);
    }
    acc *= y_phase;
    *imag_acc += std::abs(acc.imag()) * std::abs(term.coefficient);
    return term.coefficient * acc.real();
}

}  // namespace

double resolve_angle(const Gate& gate, std::span<const double> features,
                     std::span<const double> trainables) {
    double a = gate.source.literal;
    if (gate.source.feature >= 0) a += features[static_cast<std::size_t>(gate.source.feature)];
    if (gate.source.trainable >= 0) {
        a += trainables[static_cast<std::size_t>(gate.source.trainable)];
    }
    return gate.scale * a;
}

void apply_gate(StateVector& state, const Gate& gate, double angle) {
    check_qubit(state, gate.target, "target");
    if (is_two_qubit(gate.kind)) {
        check_qubit(state, gate.control, "control");
        if (gate.control == gate.target) {
            throw ValueError("apply_gate: control and target must be distinct");
        }
    }

    const double half = 0.5 * angle;
    const double c = std::cos(half);
    const double s = std::sin(half);
    switch (gate.kind) {
        case GateKind::H: {
            const double inv = 1.0 / std::numbers::sqrt2;
            apply_two_by_two(state, gate.target, -1, {inv, 0}, {inv, 0}, {inv, 0}, {-inv, 0});
            break;
        }
        case GateKind::RX:
            apply_two_by_two(state, gate.target, -1, {c, 0}, {0, -s}, {0, -s}, {c, 0});
            break;
        case GateKind::RY:
            apply_two_by_two(state, gate.target, -1, {c, 0}, {-s, 0}, {s, 0}, {c, 0});
            break;
        case GateKind::RZ:
            apply_two_by_two(state, gate.target, -1, {c, -s}, {0, 0}, {0, 0}, {c, s});
            break;
        case GateKind::CX:
            apply_two_by_two(state, gate.target, gate.control, {0, 0}, {1, 0}, {1, 0}, {0, 0});
            break;
        case GateKind::CZ:
            apply_two_by_two(state, gate.target, gate.control, {1, 0}, {0, 0}, {0, 0}, {-1, 0});
            break;
        case GateKind::CRX:
            apply_two_by_two(state, gate.target, gate.control, {c, 0}, {0, -s}, {0, -s}, {c, 0});
            break;
        case GateKind::CRZ:
            apply_two_by_two(state, gate.target, gate.control, {c, -s}, {0, 0}, {0, 0}, {c, s});
            break;
    }
}

StateVector simulate(const Circuit& circuit, std::span<const double> features,
                     std::span<const double> trainables) {
    return simulate_shifted(circuit, features, trainables, circuit.gates.size(), 0.0);
}

StateVector simulate_shifted(const Circuit& circuit, std::span<const double> features,
                             std::span<const double> trainables, std::size_t shift_gate,
                             double angle_offset) {
    if (static_cast<int>(features.size()) != circuit.n_features) {
        throw DimensionError("simulate: feature vector length mismatch");
    }
    if (static_cast<int>(trainables.size()) != circuit.n_trainable) {
        throw DimensionError("simulate: trainable vector length mismatch");
    }
    StateVector state(circuit.n_qubits);
    for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
        const Gate& gate = circuit.gates[g];
        double angle = 0.0;
        if (is_rotation(gate.kind)) {
            angle = resolve_angle(gate, features, trainables);
            if (g == shift_gate) angle += angle_offset;
            if (!std::isfinite(angle)) throw ValueError("simulate: non-finite gate angle");
        }
        apply_gate(state, gate, angle);
    }
    return state;
}

double expectation(const StateVector& state, const PauliObservable& obs) {
    if (obs.max_qubit() >= state.n_qubits()) {
        throw ValueError("expectation: observable qubit index out of range");
    }
    double imag_residue = 0.0;
    double value = obs.identity_weight * state.norm_sq();
    for (const auto& term : obs.terms) value += term_expectation(state, term, &imag_residue);
    if (imag_residue > 1e-10) {
        throw ConsistencyError("expectation: imaginary residue " +
                               std::to_string(imag_residue) + " exceeds 1e-10");
    }
    return value;
}

double fidelity(const StateVector& a, const StateVector& b) {
    double f = std::norm(inner_product(a, b));
    if (f > 1.0 + 1e-12) {
        throw ConsistencyError("fidelity: value " + std::to_string(f) + " above 1");
    }
    return std::clamp(f, 0.0, 1.0);
}

std::vector<double> param_shift_gradient(const Circuit& circuit,
                                         std::span<const double> features,
                                         std::span<const double> trainables,
                                         const PauliObservable& obs) {
    circuit.validate();
    std::vector<double> grad(static_cast<std::size_t>(circuit.n_trainable), 0.0);
    constexpr double half_pi = std::numbers::pi / 2.0;
    // Controlled rotations have generator eigenvalues {0, +-1/2}; the exact
    // rule there needs two shift pairs.
    const double d_plus = (std::numbers::sqrt2 + 1.0) / (4.0 * std::numbers::sqrt2);
    const double d_minus = (std::numbers::sqrt2 - 1.0) / (4.0 * std::numbers::sqrt2);

    auto shifted = [&](std::size_t g, double offset) {
        return expectation(simulate_shifted(circuit, features, trainables, g, offset), obs);
    };

    for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
        const Gate& gate = circuit.gates[g];
        if (gate.source.trainable < 0) continue;
        double d_angle;
        if (is_two_qubit(gate.kind)) {
            d_angle = d_plus * (shifted(g, half_pi) - shifted(g, -half_pi)) -
                      d_minus * (shifted(g, 3.0 * half_pi) - shifted(g, -3.0 * half_pi));
        } else {
            d_angle = 0.5 * (shifted(g, half_pi) - shifted(g, -half_pi));
        }
        grad[static_cast<std::size_t>(gate.source.trainable)] += gate.scale * d_angle;
    }
    return grad;
}

}  // namespace qaml::sim
