// Dense statevector over n qubits.
//
// Qubit ordering is little-endian throughout the library: qubit 0 is the
// least-significant bit of the amplitude index. The dense representation is
// capped at 16 qubits (65536 amplitudes).

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qaml/errors.hpp"

namespace qaml::sim {

inline constexpr int kMaxQubits = 16;

class StateVector {
public:
    explicit StateVector(int n_qubits) : n_qubits_(n_qubits) {
        if (n_qubits < 1 || n_qubits > kMaxQubits) {
            throw ValueError("StateVector: n_qubits must be in [1, 16], got " +
                             std::to_string(n_qubits));
        }
        amplitudes_.assign(std::size_t{1} << n_qubits, {0.0, 0.0});
        amplitudes_[0] = {1.0, 0.0};
    }

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amplitudes_.size(); }

    const std::complex<double>& operator[](std::size_t i) const { return amplitudes_[i]; }
    std::complex<double>& operator[](std::size_t i) { return amplitudes_[i]; }

    const std::vector<std::complex<double>>& amplitudes() const { return amplitudes_; }
    std::vector<std::complex<double>>& amplitudes() { return amplitudes_; }

    double norm_sq() const {
        double s = 0.0;
        for (const auto& a : amplitudes_) s += std::norm(a);
        return s;
    }

private:
    int n_qubits_;
    std::vector<std::complex<double>> amplitudes_;
};

inline std::complex<double> inner_product(const StateVector& a, const StateVector& b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw DimensionError("inner_product: qubit counts differ");
    }
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

}  // namespace qaml::sim
