// Parameterized angle-encoding circuit families.
//
// Every family encodes feature f(l, i) = (l * n_qubits + i) mod n_features on
// qubit i of layer l, so each feature is covered whenever
// n_layers * n_qubits >= n_features. The bandwidth c multiplies every encoded
// angle; trainable offsets (QNN only) share the same scale.

#pragma once

#include <string>

#include "qaml/circuit.hpp"

namespace qaml::encoding {

enum class Family { YZ_CX, MULTI_CONTROL, HW_EFFICIENT, SEPARABLE_RX };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

struct EncodingCircuitSpec {
    Family family = Family::SEPARABLE_RX;
    int n_qubits = 2;
    int n_layers = 1;
    double bandwidth = 1.0;    // c in (0, 4*pi]
    bool trainable = false;    // add per-rotation trainable offsets

    void validate() const;
};

// Number of trainable angle slots build() will emit (0 if trainable=false).
int trainable_count(const EncodingCircuitSpec& spec, int n_features);

// Deterministic gate-for-gate construction of the family layout.
sim::Circuit build(const EncodingCircuitSpec& spec, int n_features);

}  // namespace qaml::encoding
