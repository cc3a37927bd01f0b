// Gate programs with feature-bound and trainable-parameter-bound angles.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qaml/errors.hpp"
#include "qaml/statevector.hpp"

namespace qaml::sim {

enum class GateKind : std::uint8_t { H, RX, RY, RZ, CX, CZ, CRX, CRZ };

inline bool is_rotation(GateKind k) {
    return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ ||
           k == GateKind::CRX || k == GateKind::CRZ;
}

inline bool is_two_qubit(GateKind k) {
    return k == GateKind::CX || k == GateKind::CZ || k == GateKind::CRX || k == GateKind::CRZ;
}

inline std::string gate_name(GateKind k) {
    switch (k) {
        case GateKind::H: return "H";
        case GateKind::RX: return "RX";
        case GateKind::RY: return "RY";
        case GateKind::RZ: return "RZ";
        case GateKind::CX: return "CX";
        case GateKind::CZ: return "CZ";
        case GateKind::CRX: return "CRX";
        case GateKind::CRZ: return "CRZ";
    }
    return "?";
}

// Where a rotation's angle comes from. The resolved angle is
// scale * (feature value + trainable value), each part present only if its
// index is set. Non-rotation gates carry no angle source.
struct AngleSource {
    int feature = -1;    // index into the feature vector, -1 if unused
    int trainable = -1;  // index into the trainable vector, -1 if unused
    double literal = 0.0;

    static AngleSource none() { return {}; }
    static AngleSource from_literal(double v) {
        AngleSource s;
        s.literal = v;
        return s;
    }
    static AngleSource from_feature(int i) {
        AngleSource s;
        s.feature = i;
        return s;
    }
    static AngleSource from_trainable(int j) {
        AngleSource s;
        s.trainable = j;
        return s;
    }
    static AngleSource sum(int feature_i, int trainable_j) {
        AngleSource s;
        s.feature = feature_i;
        s.trainable = trainable_j;
        return s;
    }
};

struct Gate {
    GateKind kind = GateKind::H;
    int target = 0;
    int control = -1;  // set for two-qubit gates
    AngleSource source;
    double scale = 1.0;  // multiplies the resolved angle

    static Gate one_qubit(GateKind k, int target) {
        Gate g;
        g.kind = k;
        g.target = target;
        return g;
    }
    static Gate rotation(GateKind k, int target, AngleSource src, double scale = 1.0) {
        Gate g;
        g.kind = k;
        g.target = target;
        g.source = src;
        g.scale = scale;
        return g;
    }
    static Gate controlled(GateKind k, int control, int target) {
        Gate g;
        g.kind = k;
        g.control = control;
        g.target = target;
        return g;
    }
    static Gate controlled_rotation(GateKind k, int control, int target, AngleSource src,
                                    double scale = 1.0) {
        Gate g;
        g.kind = k;
        g.control = control;
        g.target = target;
        g.source = src;
        g.scale = scale;
        return g;
    }
};

struct Circuit {
    int n_qubits = 1;
    int n_features = 0;
    int n_trainable = 0;
    std::vector<Gate> gates;

    // Checks target ranges, angle-source arity and parameter index bounds.
    void validate() const {
        if (n_qubits < 1 || n_qubits > kMaxQubits) {
            throw ValueError("Circuit: n_qubits out of range");
        }
        for (const auto& g : gates) {
            if (g.target < 0 || g.target >= n_qubits) {
                throw ValueError("Circuit: gate target out of range");
            }
            if (is_two_qubit(g.kind)) {
                if (g.control < 0 || g.control >= n_qubits) {
                    throw ValueError("Circuit: gate control out of range");
                }
                if (g.control == g.target) {
                    throw ValueError("Circuit: control and target must be distinct");
                }
            }
            const bool has_source = g.source.feature >= 0 || g.source.trainable >= 0 ||
                                    g.source.literal != 0.0;
            if (!is_rotation(g.kind) && has_source) {
                throw ValueError("Circuit: " + gate_name(g.kind) + " carries no angle");
            }
            if (g.source.feature >= n_features && g.source.feature >= 0) {
                throw ValueError("Circuit: feature index out of range");
            }
            if (g.source.trainable >= n_trainable && g.source.trainable >= 0) {
                throw ValueError("Circuit: trainable index out of range");
            }
        }
    }
};

}  // namespace qaml::sim
