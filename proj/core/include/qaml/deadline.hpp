// Cooperative wall-clock cap for a unit of work (one search trial).
// Long-running loops call check() at safe points; breaching the cap raises
// TrialTimeout, which the search loop records as a TIMEOUT trial.

#pragma once

#include <chrono>
#include <optional>

#include "qaml/errors.hpp"

namespace qaml {

class Deadline {
public:
    Deadline() = default;

    static Deadline after(double seconds) {
        Deadline d;
        d.at_ = std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(seconds));
        return d;
    }

    bool active() const { return at_.has_value(); }

    bool expired() const {
        return at_.has_value() && std::chrono::steady_clock::now() >= *at_;
    }

    void check() const {
        if (expired()) throw TrialTimeout();
    }

private:
    std::optional<std::chrono::steady_clock::time_point> at_;
};

// Shared fitting context threaded through pipeline steps and models.
struct FitContext {
    int workers = 1;
    std::uint64_t seed = 0;  // for fit-time randomness (init, subsampling)
    Deadline deadline;
};

}  // namespace qaml
