#include "qaml/tpe.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "qaml/errors.hpp"

namespace qaml::search {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Numeric parameters are modeled in their sampling space: log for
// LOG_UNIFORM, linear otherwise.
double to_model_space(const Parameter& p, double v) {
    return p.kind == ParamKind::LOG_UNIFORM ? std::log(v) : v;
}

double from_model_space(const Parameter& p, double v) {
    double out = p.kind == ParamKind::LOG_UNIFORM ? std::exp(v) : v;
    if (p.kind == ParamKind::INT_UNIFORM) out = std::round(out);
    return std::clamp(out, p.lo, p.hi);
}

struct Bounds {
    double lo, hi;
};

Bounds model_bounds(const Parameter& p) {
    if (p.kind == ParamKind::LOG_UNIFORM) return {std::log(p.lo), std::log(p.hi)};
    return {p.lo, p.hi};
}

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Parzen mixture of truncated Gaussians at the observations; uniform over the
// bounds when there are no observations.
struct ParzenDensity {
    std::vector<double> mus;
    double sigma = 1.0;
    Bounds bounds{0.0, 1.0};

    static ParzenDensity build(const Parameter& p, const std::vector<double>& observed) {
        ParzenDensity d;
        d.bounds = model_bounds(p);
        const double range = d.bounds.hi - d.bounds.lo;
        d.mus = observed;
        d.sigma = std::max(range / std::sqrt(static_cast<double>(
                                       std::max<std::size_t>(observed.size(), 1))),
                           1e-3 * range);
        return d;
    }

    double pdf(double v) const {
        const double range = bounds.hi - bounds.lo;
        if (mus.empty()) return 1.0 / range;
        double acc = 0.0;
        for (const double mu : mus) {
            const double z_norm = normal_cdf((bounds.hi - mu) / sigma) -
                                  normal_cdf((bounds.lo - mu) / sigma);
            if (z_norm <= 0.0) continue;
            acc += normal_pdf((v - mu) / sigma) / (sigma * z_norm);
        }
        return std::max(acc / static_cast<double>(mus.size()),
                        std::numeric_limits<double>::min());
    }

    double sample(Rng& rng) const {
        if (mus.empty()) return rng.uniform(bounds.lo, bounds.hi);
        const double mu = mus[rng.index(mus.size())];
        for (int attempt = 0; attempt < 100; ++attempt) {
            const double v = rng.normal(mu, sigma);
            if (v >= bounds.lo && v <= bounds.hi) return v;
        }
        return std::clamp(mu, bounds.lo, bounds.hi);
    }
};

struct CategoricalDensity {
    std::vector<double> weights;  // add-one smoothed, normalized

    static CategoricalDensity build(const Parameter& p,
                                    const std::vector<std::string>& observed) {
        CategoricalDensity d;
        d.weights.assign(p.options.size(), 1.0);  // add-one smoothing
        for (const auto& v : observed) {
            const auto it = std::find(p.options.begin(), p.options.end(), v);
            if (it != p.options.end()) {
                d.weights[static_cast<std::size_t>(it - p.options.begin())] += 1.0;
            }
        }
        double total = 0.0;
        for (const double w : d.weights) total += w;
        for (double& w : d.weights) w /= total;
        return d;
    }

    double pmf(const Parameter& p, const std::string& v) const {
        const auto it = std::find(p.options.begin(), p.options.end(), v);
        if (it == p.options.end()) return std::numeric_limits<double>::min();
        return weights[static_cast<std::size_t>(it - p.options.begin())];
    }

    std::size_t sample(Rng& rng) const {
        const double u = rng.uniform();
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return weights.size() - 1;
    }
};

struct ParamDensities {
    ParzenDensity good_num, bad_num;
    CategoricalDensity good_cat, bad_cat;
};

}  // namespace

std::string trial_status_name(TrialStatus s) {
    switch (s) {
        case TrialStatus::OK: return "OK";
        case TrialStatus::FAILED: return "FAILED";
        case TrialStatus::TIMEOUT: return "TIMEOUT";
    }
    return "?";
}

void Budget::validate() const {
    if (!max_trials && !max_seconds) {
        throw ValueError("budget: set max_trials and/or max_seconds");
    }
    if (max_trials && *max_trials < 1) throw ValueError("budget: max_trials must be >= 1");
    if (max_seconds && !(*max_seconds > 0.0)) {
        throw ValueError("budget: max_seconds must be > 0");
    }
    if (max_trial_seconds && !(*max_trial_seconds > 0.0)) {
        throw ValueError("budget: max_trial_seconds must be > 0");
    }
}

double Budget::trial_cap() const {
    if (max_trial_seconds) return *max_trial_seconds;
    if (max_seconds) return *max_seconds / 20.0;
    return kInf;
}

Configuration tpe_suggest(const SearchSpace& space, const std::vector<TrialRecord>& history,
                          Rng& rng) {
    std::vector<const TrialRecord*> ok;
    for (const auto& t : history) {
        if (t.status == TrialStatus::OK && std::isfinite(t.loss)) ok.push_back(&t);
    }
    if (static_cast<int>(ok.size()) < kTpeStartupTrials) return sample_random(space, rng);

    // Split at the gamma loss quantile, at least one trial in the good set.
    std::stable_sort(ok.begin(), ok.end(),
                     [](const TrialRecord* a, const TrialRecord* b) { return a->loss < b->loss; });
    const auto n_good = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(kTpeGamma * static_cast<double>(ok.size()))));

    // Per-parameter densities over the trials where the parameter was active.
    std::vector<ParamDensities> densities;
    densities.reserve(space.parameters().size());
    for (const auto& p : space.parameters()) {
        ParamDensities d;
        if (p.kind == ParamKind::CATEGORICAL) {
            std::vector<std::string> good_obs, bad_obs;
            for (std::size_t i = 0; i < ok.size(); ++i) {
                const auto it = ok[i]->config.find(p.id);
                if (it == ok[i]->config.end()) continue;
                (i < n_good ? good_obs : bad_obs).push_back(it->second.category);
            }
            d.good_cat = CategoricalDensity::build(p, good_obs);
            d.bad_cat = CategoricalDensity::build(p, bad_obs);
        } else {
            std::vector<double> good_obs, bad_obs;
            for (std::size_t i = 0; i < ok.size(); ++i) {
                const auto it = ok[i]->config.find(p.id);
                if (it == ok[i]->config.end()) continue;
                (i < n_good ? good_obs : bad_obs)
                    .push_back(to_model_space(p, it->second.number));
            }
            d.good_num = ParzenDensity::build(p, good_obs);
            d.bad_num = ParzenDensity::build(p, bad_obs);
        }
        densities.push_back(std::move(d));
    }

    Configuration best;
    double best_score = -kInf;
    for (int c = 0; c < kTpeCandidates; ++c) {
        Configuration candidate;
        double score = 0.0;
        for (std::size_t pi = 0; pi < space.parameters().size(); ++pi) {
            const Parameter& p = space.parameters()[pi];
            if (!space.is_active(p, candidate)) continue;
            const ParamDensities& d = densities[pi];
            if (p.kind == ParamKind::CATEGORICAL) {
                const std::size_t choice = d.good_cat.sample(rng);
                const std::string& v = p.options[choice];
                candidate[p.id] = ParamValue::cat(v);
                score += std::log(d.good_cat.pmf(p, v)) - std::log(d.bad_cat.pmf(p, v));
            } else {
                const double mv = d.good_num.sample(rng);
                const double v = from_model_space(p, mv);
                candidate[p.id] = ParamValue::num(v);
                const double at = to_model_space(p, v);
                score += std::log(d.good_num.pdf(at)) - std::log(d.bad_num.pdf(at));
            }
        }
        if (score > best_score) {
            best_score = score;
            best = std::move(candidate);
        }
    }
    return best;
}

OptimizeResult optimize(const SearchSpace& space, const Objective& objective,
                        const Budget& budget, std::uint64_t seed,
                        const std::function<void(const TrialRecord&)>& on_trial) {
    space.validate();
    budget.validate();
    Rng rng(derive_seed(seed, 0x791AA5ULL));

    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    };

    OptimizeResult result;
    result.best_loss = kInf;
    int index = 0;
    for (;;) {
        if (budget.max_trials && index >= *budget.max_trials) break;
        if (budget.max_seconds && elapsed() >= *budget.max_seconds) break;

        TrialRecord record;
        record.config = tpe_suggest(space, result.history, rng);
        record.seed = derive_seed(seed, static_cast<std::uint64_t>(index) + 1);

        Deadline deadline;
        const double cap = budget.trial_cap();
        if (std::isfinite(cap)) {
            double allow = cap;
            if (budget.max_seconds) {
                allow = std::min(allow, *budget.max_seconds - elapsed());
            }
            deadline = Deadline::after(std::max(allow, 1e-3));
        }

        const auto t0 = std::chrono::steady_clock::now();
        try {
            const ObjectiveOutcome outcome = objective(record.config, deadline, record.seed);
            record.loss = outcome.loss;
            record.status = outcome.status;
            if (record.status == TrialStatus::OK && !std::isfinite(record.loss)) {
                record.status = TrialStatus::FAILED;
            }
        } catch (const TrialTimeout&) {
            record.status = TrialStatus::TIMEOUT;
        } catch (const std::exception&) {
            record.status = TrialStatus::FAILED;
        }
        if (record.status != TrialStatus::OK) record.loss = kInf;
        record.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        if (record.status == TrialStatus::OK && record.loss < result.best_loss) {
            result.best_loss = record.loss;
            result.best_config = record.config;
        }
        result.history.push_back(record);
        if (on_trial) on_trial(result.history.back());
        ++index;
    }

    if (!std::isfinite(result.best_loss)) throw NoResultError();
    return result;
}

std::string trials_to_csv(const SearchSpace& space, const std::vector<TrialRecord>& history) {
    std::string out = "index,status,loss,seconds";
    for (const auto& p : space.parameters()) out += "," + p.id;
    out += "\n";
    char buf[64];
    for (std::size_t i = 0; i < history.size(); ++i) {
        const TrialRecord& t = history[i];
        out += std::to_string(i) + "," + trial_status_name(t.status) + ",";
        if (std::isfinite(t.loss)) {
            std::snprintf(buf, sizeof(buf), "%.17g", t.loss);
            out += buf;
        } else {
            out += "inf";
        }
        out += ",0.000";  // wall time kept out of the deterministic artifact
        for (const auto& p : space.parameters()) {
            out += ",";
            const auto it = t.config.find(p.id);
            if (it == t.config.end()) continue;
            if (it->second.type == ParamValue::Type::CATEGORY) {
                out += it->second.category;
            } else {
                std::snprintf(buf, sizeof(buf), "%.17g", it->second.number);
                out += buf;
            }
        }
        out += "\n";
    }
    return out;
}

}  // namespace qaml::search
