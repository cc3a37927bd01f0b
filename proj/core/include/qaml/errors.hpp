// Exception types shared across the library.

#pragma once

#include <stdexcept>
#include <string>

namespace qaml {

// Invalid argument or violated precondition.
struct ValueError : std::invalid_argument {
    explicit ValueError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Shape/dimension mismatch between operands.
struct DimensionError : std::invalid_argument {
    explicit DimensionError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Internal numerical consistency violated (e.g. imaginary residue of a
// supposedly real expectation value exceeds tolerance).
struct ConsistencyError : std::runtime_error {
    explicit ConsistencyError(const std::string& msg) : std::runtime_error(msg) {}
};

// Predict called before fit.
struct NotFittedError : std::runtime_error {
    explicit NotFittedError(const std::string& msg) : std::runtime_error(msg) {}
};

// Serialized document malformed or of an unknown schema version.
struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

// Input data unusable (bad CSV, missing column, ...).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Cooperative per-trial wall-clock cap exceeded.
struct TrialTimeout : std::runtime_error {
    TrialTimeout() : std::runtime_error("trial wall-clock cap exceeded") {}
};

}  // namespace qaml
