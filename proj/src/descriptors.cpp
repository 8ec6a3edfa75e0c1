#include "learnlab/descriptors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>

namespace learnlab {

std::string key_path(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

void expect_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
    if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
    for (const auto& item : obj.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; });
        if (!known) throw ConfigError(key_path(path, item.key()), fmt::format("unknown key \"{}\"", item.key()));
    }
}

const Json& require(const Json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw ConfigError(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(key_path(path, key), "missing required key");
    return *it;
}

namespace {

std::uint64_t as_u64(const Json& v, const std::string& path) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        throw ConfigError(path, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

double as_double(const Json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    return v.get<double>();
}

} // namespace

std::uint64_t get_u64(const Json& obj, const char* key, const std::string& path) {
    return as_u64(require(obj, key, path), key_path(path, key));
}

std::uint64_t get_u64_or(const Json& obj, const char* key, std::uint64_t fallback, const std::string& path) {
    return obj.contains(key) ? get_u64(obj, key, path) : fallback;
}

double get_double(const Json& obj, const char* key, const std::string& path) {
    return as_double(require(obj, key, path), key_path(path, key));
}

double get_double_or(const Json& obj, const char* key, double fallback, const std::string& path) {
    return obj.contains(key) ? get_double(obj, key, path) : fallback;
}

bool get_bool_or(const Json& obj, const char* key, bool fallback, const std::string& path) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_boolean()) throw ConfigError(key_path(path, key), "expected true or false");
    return v.get<bool>();
}

std::string get_string(const Json& obj, const char* key, const std::string& path) {
    const auto& v = require(obj, key, path);
    if (!v.is_string()) throw ConfigError(key_path(path, key), "expected a string");
    return v.get<std::string>();
}

std::string get_string_or(const Json& obj, const char* key, const std::string& fallback, const std::string& path) {
    return obj.contains(key) ? get_string(obj, key, path) : fallback;
}

std::vector<Instance> get_instances(const Json& value, const std::string& path) {
    if (!value.is_array()) throw ConfigError(path, "expected an array of non-negative integers");
    std::vector<Instance> out;
    out.reserve(value.size());
    for (std::size_t i = 0; i < value.size(); ++i) out.push_back(as_u64(value[i], fmt::format("{}[{}]", path, i)));
    return out;
}

LanguageSpec parse_language(const Json& j, const std::string& path) {
    const auto kind = get_string(j, "kind", path);
    try {
        if (kind == "threshold") {
            expect_keys(j, {"kind", "min"}, path);
            return LanguageSpec::threshold(get_u64(j, "min", path));
        }
        if (kind == "multiples") {
            expect_keys(j, {"kind", "period"}, path);
            return LanguageSpec::multiples(get_u64(j, "period", path));
        }
        if (kind == "cofinite") {
            expect_keys(j, {"kind", "excluded"}, path);
            return LanguageSpec::cofinite(get_instances(require(j, "excluded", path), key_path(path, "excluded")));
        }
        if (kind == "finite") {
            expect_keys(j, {"kind", "elements"}, path);
            return LanguageSpec::finite(get_instances(require(j, "elements", path), key_path(path, "elements")));
        }
        if (kind == "all") {
            expect_keys(j, {"kind"}, path);
            return LanguageSpec::all();
        }
        if (kind == "dfa") {
            expect_keys(j, {"kind", "states", "transitions", "accepting"}, path);
            const auto states = get_u64(j, "states", path);
            const auto tr = get_instances(require(j, "transitions", path), key_path(path, "transitions"));
            const auto acc = get_instances(require(j, "accepting", path), key_path(path, "accepting"));
            if (states == 0 || states > 64) throw ConfigError(key_path(path, "states"), "expected 1..64 states");
            std::vector<bool> accepting(states, false);
            for (auto q : acc) {
                if (q >= states) throw ConfigError(key_path(path, "accepting"), fmt::format("state {} out of range", q));
                accepting[q] = true;
            }
            std::vector<std::uint32_t> table(tr.begin(), tr.end());
            return LanguageSpec::dfa(Dfa(static_cast<std::uint32_t>(states), std::move(table), std::move(accepting)));
        }
        if (kind == "lookup") {
            expect_keys(j, {"kind", "table", "fallback"}, path);
            const auto& t = require(j, "table", path);
            if (!t.is_array()) throw ConfigError(key_path(path, "table"), "expected [[x, 0|1], ...]");
            std::map<Instance, bool> table;
            for (std::size_t i = 0; i < t.size(); ++i) {
                const auto p = fmt::format("{}[{}]", key_path(path, "table"), i);
                if (!t[i].is_array() || t[i].size() != 2) throw ConfigError(p, "expected a pair [x, 0|1]");
                const auto x = as_u64(t[i][0], p);
                const auto b = as_u64(t[i][1], p);
                if (b > 1) throw ConfigError(p, "label must be 0 or 1");
                table[x] = b == 1;
            }
            return LanguageSpec::lookup(std::move(table), get_bool_or(j, "fallback", false, path));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(key_path(path, "kind"), fmt::format("unknown language kind \"{}\"", kind));
}

Json language_to_json(const LanguageSpec& lang) {
    return std::visit(
        [](const auto& v) -> Json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Threshold>) {
                return {{"kind", "threshold"}, {"min", v.min}};
            } else if constexpr (std::is_same_v<T, Multiples>) {
                return {{"kind", "multiples"}, {"period", v.period}};
            } else if constexpr (std::is_same_v<T, CoFinite>) {
                return {{"kind", "cofinite"}, {"excluded", v.excluded}};
            } else if constexpr (std::is_same_v<T, FiniteSet>) {
                return {{"kind", "finite"}, {"elements", v.elements}};
            } else if constexpr (std::is_same_v<T, AllInstances>) {
                return {{"kind", "all"}};
            } else if constexpr (std::is_same_v<T, Dfa>) {
                std::vector<std::uint32_t> acc;
                for (std::uint32_t q = 0; q < v.states(); ++q)
                    if (v.accepting(q)) acc.push_back(q);
                return {{"kind", "dfa"}, {"states", v.states()}, {"transitions", v.transitions()}, {"accepting", acc}};
            } else {
                Json table = Json::array();
                for (const auto& [x, b] : v.table) table.push_back({x, b ? 1 : 0});
                return {{"kind", "lookup"}, {"table", table}, {"fallback", v.fallback}};
            }
        },
        lang.variant());
}

ConceptClass parse_class(const Json& j, const std::string& path) {
    std::string kind;
    if (j.is_string()) {
        kind = j.get<std::string>();
    } else if (j.is_object()) {
        kind = get_string(j, "kind", path);
        if (kind == "regular_small") {
            expect_keys(j, {"kind", "max_states"}, path);
            const auto n = get_u64(j, "max_states", path);
            if (n < 1 || n > 3) throw ConfigError(key_path(path, "max_states"), "expected 1..3");
            return ConceptClass::regular_small(static_cast<std::uint32_t>(n));
        }
        expect_keys(j, {"kind"}, path);
    } else {
        throw ConfigError(path, "expected a class name or {\"kind\": ...}");
    }
    if (kind == "thresholds") return ConceptClass::thresholds();
    if (kind == "multiples") return ConceptClass::multiples();
    if (kind == "cofinite") return ConceptClass::cofinite();
    if (kind == "superfinite") return ConceptClass::superfinite();
    if (kind == "regular_small") throw ConfigError(path, "regular_small needs {\"kind\", \"max_states\"}");
    throw ConfigError(path, fmt::format("unknown class \"{}\"", kind));
}

Json class_to_json(const ConceptClass& cls) {
    if (cls.kind() == ClassKind::regular_small) return {{"kind", "regular_small"}, {"max_states", cls.max_states()}};
    return std::string(to_string(cls.kind()));
}

std::vector<Instance> parse_universe(const Json& j, const std::string& path) {
    std::vector<Instance> out;
    if (j.is_array()) {
        out = get_instances(j, path);
    } else if (j.is_object()) {
        expect_keys(j, {"from", "to"}, path);
        const auto a = get_u64(j, "from", path);
        const auto b = get_u64(j, "to", path);
        if (b < a) throw ConfigError(key_path(path, "to"), "must be >= from");
        if (b - a >= (std::uint64_t{1} << 20)) throw ConfigError(path, "universe larger than 2^20 points");
        for (Instance x = a; x <= b; ++x) out.push_back(x);
    } else {
        throw ConfigError(path, "expected [x, ...] or {\"from\", \"to\"}");
    }
    if (out.empty()) throw ConfigError(path, "universe is empty");
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Schedule parse_schedule(const Json& j, const LanguageSpec& target, const std::string& path) {
    const auto kind = get_string(j, "kind", path);
    if (kind == "fair") {
        expect_keys(j, {"kind"}, path);
        return Schedule::fair(target);
    }
    if (kind == "shuffled") {
        expect_keys(j, {"kind", "window", "seed"}, path);
        const auto w = get_u64(j, "window", path);
        if (w == 0) throw ConfigError(key_path(path, "window"), "must be >= 1");
        return Schedule::shuffled(target, w, get_u64(j, "seed", path));
    }
    if (kind == "padded") {
        expect_keys(j, {"kind", "after"}, path);
        const auto after = get_u64(j, "after", path);
        if (after == 0) throw ConfigError(key_path(path, "after"), "must be >= 1");
        return Schedule::padded(target, after);
    }
    throw ConfigError(key_path(path, "kind"), fmt::format("unknown schedule kind \"{}\"", kind));
}

Distribution parse_distribution(const Json& j, const std::vector<Instance>& universe, const std::string& path) {
    const auto kind = get_string(j, "kind", path);
    try {
        if (kind == "uniform") {
            expect_keys(j, {"kind", "points"}, path);
            if (j.contains("points")) {
                const auto pts = get_instances(j.at("points"), key_path(path, "points"));
                if (pts.empty()) throw ConfigError(key_path(path, "points"), "empty");
                return Distribution::uniform(pts);
            }
            return Distribution::uniform(universe);
        }
        if (kind == "point_mass") {
            expect_keys(j, {"kind", "x"}, path);
            return Distribution::point_mass(get_u64(j, "x", path));
        }
        if (kind == "explicit") {
            expect_keys(j, {"kind", "support"}, path);
            const auto& s = require(j, "support", path);
            if (!s.is_array()) throw ConfigError(key_path(path, "support"), "expected [[x, p], ...]");
            std::vector<std::pair<Instance, double>> support;
            for (std::size_t i = 0; i < s.size(); ++i) {
                const auto p = fmt::format("{}[{}]", key_path(path, "support"), i);
                if (!s[i].is_array() || s[i].size() != 2) throw ConfigError(p, "expected a pair [x, p]");
                support.emplace_back(as_u64(s[i][0], p), as_double(s[i][1], p));
            }
            return Distribution::make(std::move(support));
        }
        if (kind == "boundary_mix") {
            expect_keys(j, {"kind", "points", "weights", "background"}, path);
            const auto pts = get_instances(require(j, "points", path), key_path(path, "points"));
            const auto& w = require(j, "weights", path);
            if (!w.is_array() || w.size() != pts.size())
                throw ConfigError(key_path(path, "weights"), "expected one weight per point");
            const double background = get_double_or(j, "background", 0.0, path);
            if (background < 0.0 || background > 1.0)
                throw ConfigError(key_path(path, "background"), "expected a mass in [0, 1]");
            std::map<Instance, double> mass;
            for (std::size_t i = 0; i < pts.size(); ++i)
                mass[pts[i]] += as_double(w[i], fmt::format("{}[{}]", key_path(path, "weights"), i));
            if (background > 0.0)
                for (Instance x : universe) mass[x] += background / static_cast<double>(universe.size());
            return Distribution::make({mass.begin(), mass.end()});
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(key_path(path, "kind"), fmt::format("unknown distribution kind \"{}\"", kind));
}

HypothesisClass parse_hypothesis_class(const Json& j, const std::string& path) {
    const auto family = get_string(j, "family", path);
    const auto universe = parse_universe(require(j, "universe", path), key_path(path, "universe"));
    try {
        if (family == "thresholds") return HypothesisClass::thresholds(universe);
        if (family == "intervals") return HypothesisClass::intervals(universe);
        if (family == "unions_of_intervals") {
            const auto k = get_u64(j, "k", path);
            if (k == 0) throw ConfigError(key_path(path, "k"), "must be >= 1");
            return HypothesisClass::unions_of_intervals(k, universe);
        }
        if (family == "lookup_tables") return HypothesisClass::lookup_tables(universe);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(key_path(path, "family"), fmt::format("unknown hypothesis family \"{}\"", family));
}

LearnerStrategy parse_learner(const Json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a learner name");
    const auto s = j.get<std::string>();
    if (s == "least_within_prefix") return LearnerStrategy::least_within_prefix;
    if (s == "greatest") return LearnerStrategy::greatest;
    if (s == "echo_sample") return LearnerStrategy::echo_sample;
    if (s == "constant_all") return LearnerStrategy::constant;
    throw ConfigError(path, fmt::format("unknown learner \"{}\"", s));
}

GeneratorStrategy parse_generator(const Json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a generator name");
    const auto s = j.get<std::string>();
    if (s == "intersection") return GeneratorStrategy::intersection;
    if (s == "least_consistent_index") return GeneratorStrategy::least_consistent_index;
    throw ConfigError(path, fmt::format("unknown generator \"{}\"", s));
}

RiskKind parse_risk_kind(const Json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a risk name");
    const auto s = j.get<std::string>();
    for (RiskKind k : {RiskKind::expr, RiskKind::comp, RiskKind::pac_exact, RiskKind::pac_mc, RiskKind::gen,
                       RiskKind::nov})
        if (to_string(k) == s) return k;
    throw ConfigError(path, fmt::format("unknown risk \"{}\"", s));
}

Mechanism parse_mechanism(const Json& j, const std::string& path) {
    const auto kind = get_string(j, "mechanism", path);
    if (kind == "hypothesis") {
        expect_keys(j, {"mechanism", "language", "flip"}, path);
        const auto lang = parse_language(require(j, "language", path), key_path(path, "language"));
        std::vector<Instance> flip;
        if (j.contains("flip")) flip = get_instances(j.at("flip"), key_path(path, "flip"));
        return HypothesisMechanism{Hypothesis::flipped(lang, flip)};
    }
    if (kind == "decider") {
        expect_keys(j, {"mechanism", "language", "diverge_on"}, path);
        const auto lang = parse_language(require(j, "language", path), key_path(path, "language"));
        std::set<Instance> diverge;
        if (j.contains("diverge_on")) {
            const auto xs = get_instances(j.at("diverge_on"), key_path(path, "diverge_on"));
            diverge.insert(xs.begin(), xs.end());
        }
        return DeciderMechanism{BoundedDecider(Hypothesis(lang), std::move(diverge))};
    }
    if (kind == "erm") {
        expect_keys(j, {"mechanism", "family", "k", "universe"}, path);
        return ErmMechanism{parse_hypothesis_class(j, path)};
    }
    if (kind == "generator") {
        expect_keys(j, {"mechanism", "strategy", "class"}, path);
        return GeneratorMechanism{Generator(parse_class(require(j, "class", path), key_path(path, "class")),
                                            parse_generator(require(j, "strategy", path), key_path(path, "strategy")))};
    }
    throw ConfigError(key_path(path, "mechanism"), fmt::format("unknown mechanism \"{}\"", kind));
}

} // namespace learnlab
