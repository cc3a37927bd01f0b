#include "qaml/generators.hpp"

#include <cmath>
#include <numbers>

#include "qaml/errors.hpp"
#include "qaml/rng.hpp"

namespace qaml::data {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

std::string fmt(double v) { return format_double(v); }

// --- vibration tiles ------------------------------------------------------

constexpr int kTileRows = 7;
constexpr int kTileCols = 30;
constexpr int kTileDim = kTileRows * kTileCols;  // 210
constexpr int kTileClasses = 7;

// Class signatures: active spectrogram rows and their tone frequencies.
// Class 0 is background only.
struct TileSignature {
    int rows[2];
    double freqs[2];
};

constexpr TileSignature kSignatures[kTileClasses] = {
    {{-1, -1}, {0.0, 0.0}},  {{0, 3}, {2.0, 5.0}}, {{1, 4}, {3.0, 7.0}},
    {{2, 5}, {4.0, 6.0}},    {{3, 6}, {2.5, 8.0}}, {{0, 5}, {6.0, 3.5}},
    {{1, 6}, {5.0, 9.0}},
};

std::vector<double> make_tile(int label, Rng& rng) {
    std::vector<double> tile(kTileDim, 0.0);
    // Broadband background on every row.
    for (int r = 0; r < kTileRows; ++r) {
        const double base = 0.12 + 0.05 * rng.uniform();
        for (int t = 0; t < kTileCols; ++t) {
            tile[static_cast<std::size_t>(r * kTileCols + t)] =
                base + 0.72 * rng.normal();
        }
    }
    const TileSignature& sig = kSignatures[label];
    for (int k = 0; k < 2; ++k) {
        if (sig.rows[k] < 0) continue;
        const double phase = rng.uniform(0.0, kTau);
        const double amp = 0.85 + 0.3 * rng.normal();
        for (int t = 0; t < kTileCols; ++t) {
            const double wave =
                std::abs(std::sin(kTau * sig.freqs[k] * t / kTileCols + phase));
            tile[static_cast<std::size_t>(sig.rows[k] * kTileCols + t)] += amp * wave;
        }
    }
    return tile;
}

Table tile_table() {
    Table t;
    for (int p = 0; p < kTileDim; ++p) {
        char name[16];
        std::snprintf(name, sizeof(name), "px_%03d", p);
        t.columns.emplace_back(name);
    }
    t.columns.emplace_back("state");
    return t;
}

void append_tile_row(Table& t, const std::vector<double>& tile, int label) {
    std::vector<std::string> row;
    row.reserve(tile.size() + 1);
    for (const double v : tile) row.push_back(fmt(v));
    row.push_back(std::to_string(label));
    t.cells.push_back(std::move(row));
}

// --- engine dynamics -------------------------------------------------------

// Duffing-style oscillator x'' = -delta x' - a x - b x^3 + A cos(w t).
std::vector<double> duffing_series(int n, double dt, Rng& rng) {
    double x = 0.5 + 0.1 * rng.uniform();
    double v = 0.0;
    const double delta = 0.18, a = 1.0, b = 0.6, amp = 1.15, w = 0.9;
    double t = 0.0;
    auto accel = [&](double xx, double vv, double tt) {
        return -delta * vv - a * xx - b * xx * xx * xx + amp * std::cos(w * tt);
    };
    // burn-in to land on the attractor
    for (int i = 0; i < 400; ++i) {
        const double k1x = v, k1v = accel(x, v, t);
        const double k2x = v + 0.5 * dt * k1v, k2v = accel(x + 0.5 * dt * k1x, v + 0.5 * dt * k1v, t + 0.5 * dt);
        const double k3x = v + 0.5 * dt * k2v, k3v = accel(x + 0.5 * dt * k2x, v + 0.5 * dt * k2v, t + 0.5 * dt);
        const double k4x = v + dt * k3v, k4v = accel(x + dt * k3x, v + dt * k3v, t + dt);
        x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        t += dt;
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double k1x = v, k1v = accel(x, v, t);
        const double k2x = v + 0.5 * dt * k1v, k2v = accel(x + 0.5 * dt * k1x, v + 0.5 * dt * k1v, t + 0.5 * dt);
        const double k3x = v + 0.5 * dt * k2v, k3v = accel(x + 0.5 * dt * k2x, v + 0.5 * dt * k2v, t + 0.5 * dt);
        const double k4x = v + dt * k3v, k4v = accel(x + dt * k3x, v + dt * k3v, t + dt);
        x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        t += dt;
        // relative-filling-like signal: bounded, positive
        out.push_back(0.55 + 0.35 * x + 0.004 * rng.normal());
    }
    return out;
}

}  // namespace

GeneratedDataset gen_tiles(std::uint64_t seed, bool fast) {
    const int n_train = fast ? 758 / 4 : 758;
    const int n_test = fast ? 2533 / 4 : 2533;
    Rng rng(derive_seed(seed, 0x7175));

    GeneratedDataset out;
    out.name = "tiles";
    out.task = models::Task::TS_CLASSIFICATION;
    out.target = "state";
    out.quantum_preset = "quantum_classification";
    out.train = tile_table();
    out.test = tile_table();

    // Stratified training split: class counts within +-1 of each other.
    for (int i = 0; i < n_train; ++i) {
        const int label = i % kTileClasses;
        append_tile_row(out.train, make_tile(label, rng), label);
    }
    // Test split skews toward the idle class, like raw tiling would.
    for (int i = 0; i < n_test; ++i) {
        const double u = rng.uniform();
        int label = 0;
        if (u >= 0.55) label = 1 + static_cast<int>(rng.index(kTileClasses - 1));
        append_tile_row(out.test, make_tile(label, rng), label);
    }
    return out;
}

GeneratedDataset gen_latent(std::uint64_t seed) {
    constexpr int kDim = 8;
    Rng rng(derive_seed(seed, 0x1A7E));

    GeneratedDataset out;
    out.name = "latent";
    out.task = models::Task::TABULAR_CLASSIFICATION;
    out.target = "slat";
    out.quantum_preset = "quantum_classification";
    for (int c = 0; c < kDim; ++c) out.train.columns.push_back("z" + std::to_string(c));
    out.train.columns.emplace_back("slat");
    out.test.columns = out.train.columns;

    // Class means +-separation/2 along a random unit direction; isotropic
    // noise. Separation 3.6 sigma puts the optimal boundary around 0.96.
    Eigen::VectorXd direction(kDim);
    for (int c = 0; c < kDim; ++c) direction[c] = rng.normal();
    direction.normalize();
    const double separation = 3.6;

    auto emit = [&](Table& t, int n_per_class) {
        for (int label = 0; label < 2; ++label) {
            const double sign = label == 0 ? -0.5 : 0.5;
            for (int i = 0; i < n_per_class; ++i) {
                std::vector<std::string> row;
                for (int c = 0; c < kDim; ++c) {
                    const double v = sign * separation * direction[c] + rng.normal();
                    row.push_back(fmt(v));
                }
                row.push_back(std::to_string(label));
                t.cells.push_back(std::move(row));
            }
        }
    };
    emit(out.train, 200);
    emit(out.test, 50);
    return out;
}

GeneratedDataset gen_price(std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0x9B1C));
    const std::vector<std::string> locations = {"AT", "BE", "CH", "CZ", "DE",
                                                "ES", "FR", "IT", "PL"};
    const std::vector<std::string> extensions = {"long_stick", "standard", "vario"};
    const double loc_factor[9] = {1.04, 0.99, 1.10, 0.93, 1.02, 0.96, 1.00, 0.97, 0.91};
    const double ext_factor[3] = {1.06, 1.00, 1.11};

    GeneratedDataset out;
    out.name = "price";
    out.task = models::Task::TABULAR_REGRESSION;
    out.target = "price";
    out.categorical = {"location", "extension"};
    out.quantum_preset = "quantum_regression";
    out.train.columns = {"year", "hours", "power_kw", "weight_t",
                         "location", "extension", "price"};
    out.test.columns = out.train.columns;

    auto emit = [&](Table& t, int n) {
        for (int i = 0; i < n; ++i) {
            const int year = 2004 + static_cast<int>(rng.index(20));
            const double age = 2024.0 - year;
            const double hours = std::round(rng.uniform(150.0, 1050.0) * age +
                                            rng.uniform(0.0, 800.0));
            const double power = std::round(rng.uniform(40.0, 75.0) * 10.0) / 10.0;
            const double weight = std::round(rng.uniform(7.5, 9.6) * 100.0) / 100.0;
            const std::size_t loc = rng.index(locations.size());
            const std::size_t ext = rng.index(extensions.size());

            const double base = 26000.0 + 850.0 * (power - 40.0) + 2400.0 * (weight - 7.5);
            double price = base * std::pow(0.93, age);
            price *= 1.0 - 0.30 * hours / (hours + 9000.0);
            price *= loc_factor[loc] * ext_factor[ext];
            price *= 1.0 + 0.06 * rng.normal();
            price = std::max(price, 1500.0);

            t.cells.push_back({std::to_string(year), fmt(hours), fmt(power), fmt(weight),
                               locations[loc], extensions[ext], fmt(std::round(price))});
        }
    };
    emit(out.train, 132);
    emit(out.test, 33);
    return out;
}

GeneratedDataset gen_engine(std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0xE17));
    const std::vector<double> series = duffing_series(704, 0.35, rng);

    GeneratedDataset out;
    out.name = "engine";
    out.task = models::Task::TS_FORECASTING;
    out.target = "filling";
    out.quantum_preset = "quantum_regression";
    out.train.columns = {"filling"};
    out.test.columns = {"filling"};

    // Time split: 560 raw training points (556 lag-4 windows) and 144 raw
    // test points (140 windows).
    for (int i = 0; i < 560; ++i) out.train.cells.push_back({fmt(series[i])});
    for (int i = 560; i < 704; ++i) {
        out.test.cells.push_back({fmt(series[static_cast<std::size_t>(i)])});
    }
    return out;
}

GeneratedDataset generate(const std::string& name, std::uint64_t seed, bool fast) {
    if (name == "tiles") return gen_tiles(seed, fast);
    if (name == "latent") return gen_latent(seed);
    if (name == "price") return gen_price(seed);
    if (name == "engine") return gen_engine(seed);
    throw ValueError("unknown generator: " + name);
}

std::vector<std::string> generator_names() { return {"tiles", "latent", "price", "engine"}; }

}  // namespace qaml::data
