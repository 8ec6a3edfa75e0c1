#pragma once

#include "learnlab/universe.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace learnlab {

/// A total binary function on instances: a language's indicator, optionally
/// overridden at finitely many points.
class Hypothesis {
public:
    explicit Hypothesis(LanguageSpec predicate, std::map<Instance, bool> overrides = {})
        : predicate_(std::move(predicate)), overrides_(std::move(overrides)) {}

    static Hypothesis indicator(const LanguageSpec& lang) { return Hypothesis(lang); }
    static Hypothesis constant(bool value) {
        return Hypothesis(value ? LanguageSpec::all() : LanguageSpec::finite({}));
    }
    /// chi_lang with its value negated at the given points.
    static Hypothesis flipped(const LanguageSpec& lang, std::span<const Instance> points);

    bool operator()(Instance x) const {
        if (!overrides_.empty()) {
            auto it = overrides_.find(x);
            if (it != overrides_.end()) return it->second;
        }
        return predicate_.contains(x);
    }
    const LanguageSpec& predicate() const { return predicate_; }
    const std::map<Instance, bool>& overrides() const { return overrides_; }
    std::uint64_t evaluation_steps(Instance x) const;
    std::string describe() const;

private:
    LanguageSpec predicate_;
    std::map<Instance, bool> overrides_;
};

enum class Decision { zero, one, diverged };

std::string_view to_string(Decision d);

/// A decider that fails to halt on a finite set of inputs. With an empty
/// divergence set it is total.
class BoundedDecider {
public:
    explicit BoundedDecider(Hypothesis base, std::set<Instance> diverge_on = {})
        : base_(std::move(base)), diverge_on_(std::move(diverge_on)) {}

    const Hypothesis& base() const { return base_; }
    const std::set<Instance>& diverge_on() const { return diverge_on_; }
    bool is_total() const { return diverge_on_.empty(); }

private:
    Hypothesis base_;
    std::set<Instance> diverge_on_;
};

/// Runs the decider on x with a step budget. Diverged when x is in the
/// divergence set or the base evaluation needs more than `fuel` steps.
Decision decide_bounded(const BoundedDecider& d, Instance x, std::uint64_t fuel);

struct LabeledPoint {
    Instance x = 0;
    bool label = false;
    friend bool operator==(const LabeledPoint&, const LabeledPoint&) = default;
};

/// Least index minimizing the empirical error count. Empty sample -> 0.
std::size_t erm(std::span<const Hypothesis> hypotheses, std::span<const LabeledPoint> sample);

std::size_t empirical_errors(const Hypothesis& h, std::span<const LabeledPoint> sample);

enum class LearnerStrategy {
    least_within_prefix, ///< least consistent index in {0..t}
    greatest,            ///< closed form on THRESHOLDS / MULTIPLES, else greatest consistent in {0..t}
    constant,            ///< always the configured index
    echo_sample,         ///< SUPERFINITE only: the finite set observed so far
};

std::string_view to_string(LearnerStrategy s);

/// Identification-by-enumeration learner. Conjectures are language indices;
/// nullopt is the "no consistent index in range" sentinel.
class Learner {
public:
    Learner(ConceptClass cls, LearnerStrategy strategy, Index constant_index = 0);

    /// Appends x to the observations and returns the new conjecture.
    std::optional<Index> observe(Instance x);

    const ConceptClass& concept_class() const { return class_; }
    LearnerStrategy strategy() const { return strategy_; }
    const std::optional<Index>& conjecture() const { return conjecture_; }
    std::uint64_t mind_changes() const { return mind_changes_; }
    const Sample& sample() const { return sample_; }
    std::uint64_t observations() const { return sample_.observations(); }

private:
    std::optional<Index> compute() const;

    ConceptClass class_;
    LearnerStrategy strategy_;
    Index constant_index_;
    Sample sample_;
    std::optional<Index> conjecture_;
    bool has_conjectured_ = false;
    std::uint64_t mind_changes_ = 0;
};

inline std::optional<Index> observe_and_conjecture(Learner& learner, Instance x) { return learner.observe(x); }

enum class GeneratorStrategy { intersection, least_consistent_index };

std::string_view to_string(GeneratorStrategy s);

/// Thrown when no unseen element lies in the searched languages.
class GenerationExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Generator {
public:
    Generator(ConceptClass cls, GeneratorStrategy strategy) : class_(std::move(cls)), strategy_(strategy) {}

    /// Least instance outside `prefix` (and outside `also_exclude`, when
    /// given) in the strategy's target set over indices <= n_bound.
    Instance next(const Sample& prefix, std::uint64_t n_bound, const Sample* also_exclude = nullptr) const;

    const ConceptClass& concept_class() const { return class_; }
    GeneratorStrategy strategy() const { return strategy_; }

    static constexpr std::uint64_t kCandidateLimit = std::uint64_t{1} << 22;

private:
    ConceptClass class_;
    GeneratorStrategy strategy_;
};

Instance generate_next(const Generator& gen, std::span<const Instance> prefix, std::uint64_t n_bound);

} // namespace learnlab
