#include "qaml/encoding.hpp"

#include <numbers>

#include "qaml/errors.hpp"

namespace qaml::encoding {

using sim::AngleSource;
using sim::Circuit;
using sim::Gate;
using sim::GateKind;

std::string family_name(Family f) {
    switch (f) {
        case Family::YZ_CX: return "YZ_CX";
        case Family::MULTI_CONTROL: return "MULTI_CONTROL";
        case Family::HW_EFFICIENT: return "HW_EFFICIENT";
        case Family::SEPARABLE_RX: return "SEPARABLE_RX";
    }
    throw ValueError("unknown encoding family");
}

Family family_from_name(const std::string& name) {
    if (name == "YZ_CX") return Family::YZ_CX;
    if (name == "MULTI_CONTROL") return Family::MULTI_CONTROL;
    if (name == "HW_EFFICIENT") return Family::HW_EFFICIENT;
    if (name == "SEPARABLE_RX") return Family::SEPARABLE_RX;
    throw ValueError("unknown encoding family: " + name);
}

void EncodingCircuitSpec::validate() const {
    if (n_qubits < 1 || n_qubits > sim::kMaxQubits) {
        throw ValueError("EncodingCircuitSpec: n_qubits must be in [1, 16]");
    }
    if (n_layers < 1 || n_layers > 8) {
        throw ValueError("EncodingCircuitSpec: n_layers must be in [1, 8]");
    }
    if (!(bandwidth > 0.0) || bandwidth > 4.0 * std::numbers::pi) {
        throw ValueError("EncodingCircuitSpec: bandwidth must be in (0, 4*pi]");
    }
}

namespace {

int rotations_per_layer(Family f, int n_qubits) {
    return f == Family::YZ_CX ? 2 * n_qubits : n_qubits;
}

AngleSource encoded(int feature, bool trainable, int* next_theta) {
    if (!trainable) return AngleSource::from_feature(feature);
    return AngleSource::sum(feature, (*next_theta)++);
}

}  // namespace

int trainable_count(const EncodingCircuitSpec& spec, int /*n_features*/) {
    spec.validate();
    if (!spec.trainable) return 0;
    return spec.n_layers * rotations_per_layer(spec.family, spec.n_qubits);
}

sim::Circuit build(const EncodingCircuitSpec& spec, int n_features) {
    spec.validate();
    if (n_features < 1) throw ValueError("encoding::build: n_features must be >= 1");

    const int n = spec.n_qubits;
    const double c = spec.bandwidth;
    Circuit circuit;
    circuit.n_qubits = n;
    circuit.n_features = n_features;
    circuit.n_trainable = trainable_count(spec, n_features);

    int next_theta = 0;
    auto feature_of = [&](int layer, int qubit) { return (layer * n + qubit) % n_features; };

    for (int l = 0; l < spec.n_layers; ++l) {
        switch (spec.family) {
            case Family::YZ_CX:
                for (int i = 0; i < n; ++i) {
                    const int f = feature_of(l, i);
                    circuit.gates.push_back(Gate::rotation(
                        GateKind::RY, i, encoded(f, spec.trainable, &next_theta), c));
                    circuit.gates.push_back(Gate::rotation(
                        GateKind::RZ, i, encoded(f, spec.trainable, &next_theta), c));
                }
                for (int i = 0; i + 1 < n; ++i) {
                    circuit.gates.push_back(Gate::controlled(GateKind::CX, i, i + 1));
                }
                break;
            case Family::MULTI_CONTROL:
                for (int i = 0; i < n; ++i) {
                    circuit.gates.push_back(Gate::rotation(
                        GateKind::RX, i, encoded(feature_of(l, i), spec.trainable, &next_theta),
                        c));
                }
                if (n > 1) {
                    for (int i = 0; i < n; ++i) {
                        const int j = (i + 1) % n;
                        if (n == 2 && i == 1) break;  // avoid the duplicate (1, 0) pair
                        circuit.gates.push_back(Gate::controlled_rotation(
                            GateKind::CRZ, i, j,
                            AngleSource::from_feature(feature_of(l, j)), c));
                    }
                }
                break;
            case Family::HW_EFFICIENT:
                for (int i = 0; i < n; ++i) {
                    circuit.gates.push_back(Gate::rotation(
                        GateKind::RY, i, encoded(feature_of(l, i), spec.trainable, &next_theta),
                        c));
                }
                if (n > 1) {
                    for (int i = 0; i < n; ++i) {
                        const int j = (i + 1) % n;
                        if (n == 2 && i == 1) break;
                        circuit.gates.push_back(Gate::controlled(GateKind::CZ, i, j));
                    }
                }
                break;
            case Family::SEPARABLE_RX:
                for (int i = 0; i < n; ++i) {
                    circuit.gates.push_back(Gate::rotation(
                        GateKind::RX, i, encoded(feature_of(l, i), spec.trainable, &next_theta),
                        c));
                }
                break;
        }
    }
    circuit.validate();
    return circuit;
}

}  // namespace qaml::encoding
