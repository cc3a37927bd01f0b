// Weighted sums of Pauli strings.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qaml/errors.hpp"

namespace qaml::sim {

enum class Pauli : std::uint8_t { X, Y, Z };

inline char pauli_char(Pauli p) {
    switch (p) {
        case Pauli::X: return 'X';
        case Pauli::Y: return 'Y';
        case Pauli::Z: return 'Z';
    }
    return '?';
}

// One term: coefficient times a tensor product of Paulis on distinct qubits.
struct PauliTerm {
    double coefficient = 1.0;
    std::map<int, Pauli> factors;  // qubit -> Pauli; each qubit at most once
};

struct PauliObservable {
    std::vector<PauliTerm> terms;
    double identity_weight = 0.0;

    int max_qubit() const {
        int m = -1;
        for (const auto& t : terms) {
            for (const auto& [q, p] : t.factors) m = std::max(m, q);
        }
        return m;
    }

    double coefficient_bound() const {
        double s = std::abs(identity_weight);
        for (const auto& t : terms) s += std::abs(t.coefficient);
        return s;
    }

    void validate() const {
        for (const auto& t : terms) {
            if (!std::isfinite(t.coefficient)) {
                throw ValueError("PauliObservable: non-finite coefficient");
            }
            for (const auto& [q, p] : t.factors) {
                if (q < 0) throw ValueError("PauliObservable: negative qubit index");
            }
        }
        if (!std::isfinite(identity_weight)) {
            throw ValueError("PauliObservable: non-finite identity weight");
        }
    }

    // Single-qubit Pauli.
    static PauliObservable single(Pauli p, int qubit, double coeff = 1.0) {
        PauliObservable o;
        o.terms.push_back({coeff, {{qubit, p}}});
        return o;
    }

    // Sum of the given Pauli over every qubit.
    static PauliObservable pauli_sum(Pauli p, int n_qubits) {
        PauliObservable o;
        for (int q = 0; q < n_qubits; ++q) o.terms.push_back({1.0, {{q, p}}});
        return o;
    }

    // Sum Z_i + sum Z_i Z_{i+1} over a chain.
    static PauliObservable ising(int n_qubits) {
        PauliObservable o;
        for (int q = 0; q < n_qubits; ++q) o.terms.push_back({1.0, {{q, Pauli::Z}}});
        for (int q = 0; q + 1 < n_qubits; ++q) {
            o.terms.push_back({1.0, {{q, Pauli::Z}, {q + 1, Pauli::Z}}});
        }
        return o;
    }
};

}  // namespace qaml::sim
