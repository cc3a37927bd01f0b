// Fixed, named pipeline configurations: the best-found pipeline per use case
// and the hand-built baseline per use case. Usable directly with
// pipeline::instantiate; some baselines sit outside the default search
// ranges (e.g. 15 qubits, 6 layers) on purpose.

#pragma once

#include <string>
#include <vector>

#include "qaml/models.hpp"
#include "qaml/search_space.hpp"

namespace qaml::pipeline {

struct NamedConfig {
    std::string name;
    models::Task task;
    search::Configuration config;
};

// Best-pipeline presets per use case (vibration tiles, latent images,
// equipment prices, engine forecasting).
std::vector<NamedConfig> best_pipeline_presets();

// Hand-built reference baselines: PQK-SVC (5 qubits, 6 layers), Ising-cost
// QNN (8 qubits), FQK-SVR (15 qubits), 4-qubit reservoir with 54 observables.
std::vector<NamedConfig> manual_baselines();

// Lookup across both lists; throws ValueError for unknown names.
NamedConfig reference_config(const std::string& name);

}  // namespace qaml::pipeline
