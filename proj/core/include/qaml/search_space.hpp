// Conditional hyperparameter space and configurations drawn from it.
//
// Parameters are declared in topological order (a parameter's activation
// parent must be declared before it). A configuration holds exactly the
// active parameters of its choice path.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qaml/rng.hpp"

namespace qaml::search {

struct ParamValue {
    enum class Type { NUMBER, CATEGORY };
    Type type = Type::NUMBER;
    double number = 0.0;
    std::string category;

    static ParamValue num(double v) {
        ParamValue p;
        p.type = Type::NUMBER;
        p.number = v;
        return p;
    }
    static ParamValue cat(std::string v) {
        ParamValue p;
        p.type = Type::CATEGORY;
        p.category = std::move(v);
        return p;
    }
    bool operator==(const ParamValue& o) const {
        return type == o.type && number == o.number && category == o.category;
    }
};

using Configuration = std::map<std::string, ParamValue>;

enum class ParamKind { CATEGORICAL, UNIFORM, LOG_UNIFORM, INT_UNIFORM };

struct Parameter {
    std::string id;
    ParamKind kind = ParamKind::UNIFORM;
    std::vector<std::string> options;  // CATEGORICAL
    double lo = 0.0;
    double hi = 1.0;
    // Active iff parent (a categorical parameter) takes parent_value; empty
    // parent_id means always active. Activation is transitive through the
    // parent chain.
    std::string parent_id;
    std::string parent_value;

    static Parameter categorical(std::string id, std::vector<std::string> options,
                                 std::string parent = {}, std::string when = {}) {
        Parameter p;
        p.id = std::move(id);
        p.kind = ParamKind::CATEGORICAL;
        p.options = std::move(options);
        p.parent_id = std::move(parent);
        p.parent_value = std::move(when);
        return p;
    }
    static Parameter uniform(std::string id, double lo, double hi, std::string parent = {},
                             std::string when = {}) {
        Parameter p;
        p.id = std::move(id);
        p.kind = ParamKind::UNIFORM;
        p.lo = lo;
        p.hi = hi;
        p.parent_id = std::move(parent);
        p.parent_value = std::move(when);
        return p;
    }
    static Parameter log_uniform(std::string id, double lo, double hi,
                                 std::string parent = {}, std::string when = {}) {
        Parameter p = uniform(std::move(id), lo, hi, std::move(parent), std::move(when));
        p.kind = ParamKind::LOG_UNIFORM;
        return p;
    }
    static Parameter int_uniform(std::string id, long long lo, long long hi,
                                 std::string parent = {}, std::string when = {}) {
        Parameter p = uniform(std::move(id), static_cast<double>(lo),
                              static_cast<double>(hi), std::move(parent), std::move(when));
        p.kind = ParamKind::INT_UNIFORM;
        return p;
    }
};

class SearchSpace {
public:
    void add(Parameter p);
    const std::vector<Parameter>& parameters() const { return params_; }
    const Parameter& parameter(const std::string& id) const;
    bool has(const std::string& id) const;

    // True when the parameter's full parent chain is satisfied by `config`.
    bool is_active(const Parameter& p, const Configuration& config) const;

    // Bounds, uniqueness and reachability checks.
    void validate() const;

private:
    std::vector<Parameter> params_;
    std::map<std::string, std::size_t> index_;
};

// Top-down draw: choices uniform, numeric parameters from their
// distributions, conditional parameters only where active.
Configuration sample_random(const SearchSpace& space, Rng& rng);

// Value within bounds / option membership check for a full configuration.
void validate_configuration(const SearchSpace& space, const Configuration& config);

}  // namespace qaml::search
