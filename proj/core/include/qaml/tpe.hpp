// Tree-structured Parzen estimator over a conditional search space, plus the
// budgeted suggest-evaluate-record loop.
//
// Trials below the startup count fall back to random search. Afterwards the
// completed trials are split at the gamma loss quantile into good/bad sets;
// candidates are drawn from the good densities and ranked by the
// good-to-bad density ratio, scoring conditional parameters only where
// active.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qaml/deadline.hpp"
#include "qaml/search_space.hpp"

namespace qaml::search {

// Frozen TPE constants.
inline constexpr int kTpeStartupTrials = 10;
inline constexpr double kTpeGamma = 0.25;
inline constexpr int kTpeCandidates = 24;

enum class TrialStatus { OK, FAILED, TIMEOUT };

std::string trial_status_name(TrialStatus s);

struct TrialRecord {
    Configuration config;
    double loss = 0.0;  // +inf sentinel for FAILED/TIMEOUT, excluded from TPE
    TrialStatus status = TrialStatus::OK;
    double seconds = 0.0;
    std::uint64_t seed = 0;
};

struct Budget {
    std::optional<int> max_trials;
    std::optional<double> max_seconds;
    // Per-trial wall-clock cap; defaults to max_seconds / 20 when a time
    // budget is set, unlimited otherwise.
    std::optional<double> max_trial_seconds;

    void validate() const;
    double trial_cap() const;  // +inf when uncapped
};

Configuration tpe_suggest(const SearchSpace& space, const std::vector<TrialRecord>& history,
                          Rng& rng);

struct ObjectiveOutcome {
    double loss = 0.0;
    TrialStatus status = TrialStatus::OK;
};

// Evaluates one configuration; gets a per-trial deadline and a derived seed.
using Objective =
    std::function<ObjectiveOutcome(const Configuration&, const Deadline&, std::uint64_t)>;

struct OptimizeResult {
    Configuration best_config;
    double best_loss = 0.0;
    std::vector<TrialRecord> history;
};

// Thrown when a run completes zero OK trials.
struct NoResultError : std::runtime_error {
    NoResultError() : std::runtime_error("optimization produced no successful trial") {}
};

OptimizeResult optimize(const SearchSpace& space, const Objective& objective,
                        const Budget& budget, std::uint64_t seed,
                        const std::function<void(const TrialRecord&)>& on_trial = {});

// Trial history as CSV: index,status,loss,seconds plus one column per space
// parameter (blank when inactive). The seconds column is written as 0.000 so
// seeded single-worker reruns are byte-identical; measured times are
// reported through the run report instead.
std::string trials_to_csv(const SearchSpace& space, const std::vector<TrialRecord>& history);

}  // namespace qaml::search
