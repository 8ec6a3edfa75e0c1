#pragma once

// JSON descriptors for languages, classes, schedules, distributions and
// mechanisms, as used in suite configs and summaries.

#include "learnlab/arena.hpp"
#include "learnlab/enumeration.hpp"
#include "learnlab/mechanisms.hpp"
#include "learnlab/risk.hpp"
#include "learnlab/universe.hpp"
#include "learnlab/vcdim.hpp"

#include "json.hpp"

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace learnlab {

using Json = nlohmann::json;

/// A config problem pinned to a key path such as "blocks[2].params.eps".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

std::string key_path(const std::string& parent, const std::string& key);

/// Rejects keys outside `allowed` and a non-object `obj`.
void expect_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& path);

const Json& require(const Json& obj, const char* key, const std::string& path);
std::uint64_t get_u64(const Json& obj, const char* key, const std::string& path);
std::uint64_t get_u64_or(const Json& obj, const char* key, std::uint64_t fallback, const std::string& path);
double get_double(const Json& obj, const char* key, const std::string& path);
double get_double_or(const Json& obj, const char* key, double fallback, const std::string& path);
bool get_bool_or(const Json& obj, const char* key, bool fallback, const std::string& path);
std::string get_string(const Json& obj, const char* key, const std::string& path);
std::string get_string_or(const Json& obj, const char* key, const std::string& fallback, const std::string& path);
std::vector<Instance> get_instances(const Json& value, const std::string& path);

// {"kind": "threshold", "min": 4}, {"kind": "multiples", "period": 6},
// {"kind": "cofinite", "excluded": [7]}, {"kind": "finite", "elements": [...]},
// {"kind": "all"}, {"kind": "dfa", "states": n, "transitions": [...], "accepting": [...]},
// {"kind": "lookup", "table": [[x, 0|1], ...], "fallback": false}
LanguageSpec parse_language(const Json& j, const std::string& path);
Json language_to_json(const LanguageSpec& lang);

// "thresholds" | "multiples" | "cofinite" | "superfinite" |
// {"kind": "regular_small", "max_states": 1..3}
ConceptClass parse_class(const Json& j, const std::string& path);
Json class_to_json(const ConceptClass& cls);

// [x, ...] or {"from": a, "to": b} (inclusive)
std::vector<Instance> parse_universe(const Json& j, const std::string& path);

// {"kind": "fair"} | {"kind": "shuffled", "window": w, "seed": s} |
// {"kind": "padded", "after": n}
Schedule parse_schedule(const Json& j, const LanguageSpec& target, const std::string& path);

// {"kind": "uniform"} over the given universe |
// {"kind": "uniform", "points": [...]} |
// {"kind": "point_mass", "x": x} |
// {"kind": "explicit", "support": [[x, p], ...]} |
// {"kind": "boundary_mix", "points": [...], "weights": [...], "background": b}
//     weights on the points, the remaining b spread uniformly over the universe
Distribution parse_distribution(const Json& j, const std::vector<Instance>& universe, const std::string& path);

// {"family": "thresholds"|"intervals"|"unions_of_intervals"|"lookup_tables",
//  "k": 2, "universe": ...}
HypothesisClass parse_hypothesis_class(const Json& j, const std::string& path);

LearnerStrategy parse_learner(const Json& j, const std::string& path);
GeneratorStrategy parse_generator(const Json& j, const std::string& path);
RiskKind parse_risk_kind(const Json& j, const std::string& path);

// {"mechanism": "hypothesis", "language": L, "flip": [...]} |
// {"mechanism": "decider", "language": L, "diverge_on": [...]} |
// {"mechanism": "erm", "family": ..., "k": ..., "universe": ...} |
// {"mechanism": "generator", "strategy": ..., "class": C}
Mechanism parse_mechanism(const Json& j, const std::string& path);

} // namespace learnlab
