#include "qaml/search_space.hpp"

#include <algorithm>
#include <cmath>

#include "qaml/errors.hpp"

namespace qaml::search {

void SearchSpace::add(Parameter p) {
    if (p.id.empty()) throw ValueError("search space: parameter id must not be empty");
    if (index_.count(p.id) != 0) {
        throw ValueError("search space: duplicate parameter id " + p.id);
    }
    if (p.kind == ParamKind::CATEGORICAL) {
        if (p.options.empty()) {
            throw ValueError("search space: categorical " + p.id + " has no options");
        }
    } else if (!(p.lo < p.hi)) {
        throw ValueError("search space: bounds lo < hi violated for " + p.id);
    }
    if (p.kind == ParamKind::LOG_UNIFORM && !(p.lo > 0.0)) {
        throw ValueError("search space: log-uniform lower bound must be > 0 for " + p.id);
    }
    if (!p.parent_id.empty()) {
        const auto it = index_.find(p.parent_id);
        if (it == index_.end()) {
            throw ValueError("search space: parent of " + p.id + " must be declared first");
        }
        const Parameter& parent = params_[it->second];
        if (parent.kind != ParamKind::CATEGORICAL) {
            throw ValueError("search space: parent of " + p.id + " must be categorical");
        }
        if (std::find(parent.options.begin(), parent.options.end(), p.parent_value) ==
            parent.options.end()) {
            throw ValueError("search space: activation value of " + p.id +
                             " is not an option of " + p.parent_id);
        }
    }
    index_[p.id] = params_.size();
    params_.push_back(std::move(p));
}

const Parameter& SearchSpace::parameter(const std::string& id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) throw ValueError("search space: unknown parameter " + id);
    return params_[it->second];
}

bool SearchSpace::has(const std::string& id) const { return index_.count(id) != 0; }

bool SearchSpace::is_active(const Parameter& p, const Configuration& config) const {
    const Parameter* cur = &p;
    while (!cur->parent_id.empty()) {
        const auto it = config.find(cur->parent_id);
        if (it == config.end() || it->second.type != ParamValue::Type::CATEGORY ||
            it->second.category != cur->parent_value) {
            return false;
        }
        cur = &parameter(cur->parent_id);
    }
    return true;
}

void SearchSpace::validate() const {
    if (params_.empty()) throw ValueError("search space: empty");
    // add() enforces ids/bounds/parent ordering; every parameter is reachable
    // because its activation value is a real option of an earlier parameter.
}

Configuration sample_random(const SearchSpace& space, Rng& rng) {
    Configuration config;
    for (const auto& p : space.parameters()) {
        if (!space.is_active(p, config)) continue;
        switch (p.kind) {
            case ParamKind::CATEGORICAL:
                config[p.id] = ParamValue::cat(p.options[rng.index(p.options.size())]);
                break;
            case ParamKind::UNIFORM:
                config[p.id] = ParamValue::num(rng.uniform(p.lo, p.hi));
                break;
            case ParamKind::LOG_UNIFORM:
                config[p.id] = ParamValue::num(rng.log_uniform(p.lo, p.hi));
                break;
            case ParamKind::INT_UNIFORM:
                config[p.id] = ParamValue::num(static_cast<double>(rng.uniform_int(
                    static_cast<long long>(p.lo), static_cast<long long>(p.hi))));
                break;
        }
    }
    return config;
}

void validate_configuration(const SearchSpace& space, const Configuration& config) {
    for (const auto& p : space.parameters()) {
        const bool active = space.is_active(p, config);
        const auto it = config.find(p.id);
        if (!active) {
            if (it != config.end()) {
                throw ValueError("configuration: inactive parameter " + p.id + " present");
            }
            continue;
        }
        if (it == config.end()) {
            throw ValueError("configuration: active parameter " + p.id + " missing");
        }
        const ParamValue& v = it->second;
        if (p.kind == ParamKind::CATEGORICAL) {
            if (v.type != ParamValue::Type::CATEGORY ||
                std::find(p.options.begin(), p.options.end(), v.category) ==
                    p.options.end()) {
                throw ValueError("configuration: bad category for " + p.id);
            }
        } else {
            if (v.type != ParamValue::Type::NUMBER || !std::isfinite(v.number) ||
                v.number < p.lo || v.number > p.hi) {
                throw ValueError("configuration: value out of bounds for " + p.id);
            }
        }
    }
    for (const auto& [id, value] : config) {
        if (!space.has(id)) throw ValueError("configuration: unknown parameter " + id);
    }
}

}  // namespace qaml::search
