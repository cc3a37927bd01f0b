// Synthetic desk-scale benchmark generators, one per use-case shape:
// vibration-spectrogram tiles (7-class classification, d=210), latent image
// vectors (binary classification, d=8), equipment prices (tabular regression,
// 6 raw / 16 one-hot columns) and engine dynamics (univariate forecasting).
// Generators are pure functions of the seed.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qaml/dataset.hpp"
#include "qaml/models.hpp"

namespace qaml::data {

struct GeneratedDataset {
    std::string name;
    models::Task task = models::Task::TABULAR_REGRESSION;
    Table train;
    Table test;
    std::string target;
    std::vector<std::string> categorical;  // declared categorical columns
    std::string quantum_preset;            // matching search preset
};

// Multi-sine spectrogram tiles, 7 classes, stratified 758-row training split
// and 2533-row test split (both divided by 4 under `fast`).
GeneratedDataset gen_tiles(std::uint64_t seed, bool fast = false);

// Two overlapping 8-D Gaussian classes, 400 training / 100 test rows.
GeneratedDataset gen_latent(std::uint64_t seed);

// Construction-machine price table: 132 training / 33 test rows, 4 numeric
// columns plus 9-value location and 3-value extension categoricals.
GeneratedDataset gen_price(std::uint64_t seed);

// Damped driven nonlinear oscillator sampled to 704 raw points; split by
// time into 560 training / 144 test points (556 / 140 lag-4 windows).
GeneratedDataset gen_engine(std::uint64_t seed);

GeneratedDataset generate(const std::string& name, std::uint64_t seed, bool fast = false);

std::vector<std::string> generator_names();

}  // namespace qaml::data
