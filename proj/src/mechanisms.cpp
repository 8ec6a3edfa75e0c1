#include "learnlab/mechanisms.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <bit>
#include <limits>

namespace learnlab {

Hypothesis Hypothesis::flipped(const LanguageSpec& lang, std::span<const Instance> points) {
    std::map<Instance, bool> overrides;
    for (Instance x : points) overrides[x] = !lang.contains(x);
    return Hypothesis(lang, std::move(overrides));
}

std::uint64_t Hypothesis::evaluation_steps(Instance x) const {
    std::uint64_t steps = predicate_.evaluation_steps(x);
    if (!overrides_.empty()) steps += 1 + std::bit_width(overrides_.size());
    return steps;
}

std::string Hypothesis::describe() const {
    if (overrides_.empty()) return predicate_.describe();
    std::vector<std::string> cells;
    for (auto [x, b] : overrides_) cells.push_back(fmt::format("{}:{}", x, b ? 1 : 0));
    return fmt::format("{} with {{{}}}", predicate_.describe(), fmt::join(cells, ","));
}

std::string_view to_string(Decision d) {
    switch (d) {
    case Decision::zero: return "0";
    case Decision::one: return "1";
    case Decision::diverged: return "diverged";
    }
    return "?";
}

Decision decide_bounded(const BoundedDecider& d, Instance x, std::uint64_t fuel) {
    if (fuel == 0) throw std::invalid_argument("decide_bounded: fuel must be >= 1");
    if (d.diverge_on().contains(x)) return Decision::diverged;
    if (d.base().evaluation_steps(x) > fuel) return Decision::diverged;
    return d.base()(x) ? Decision::one : Decision::zero;
}

std::size_t empirical_errors(const Hypothesis& h, std::span<const LabeledPoint> sample) {
    return static_cast<std::size_t>(
        std::count_if(sample.begin(), sample.end(), [&](const LabeledPoint& p) { return h(p.x) != p.label; }));
}

std::size_t erm(std::span<const Hypothesis> hypotheses, std::span<const LabeledPoint> sample) {
    if (hypotheses.empty()) throw std::invalid_argument("erm: empty hypothesis list");
    std::size_t best = 0;
    std::size_t best_errors = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < hypotheses.size(); ++i) {
        const auto e = empirical_errors(hypotheses[i], sample);
        if (e < best_errors) {
            best = i;
            best_errors = e;
            if (e == 0) break;
        }
    }
    return best;
}

std::string_view to_string(LearnerStrategy s) {
    switch (s) {
    case LearnerStrategy::least_within_prefix: return "least_within_prefix";
    case LearnerStrategy::greatest: return "greatest";
    case LearnerStrategy::constant: return "constant";
    case LearnerStrategy::echo_sample: return "echo_sample";
    }
    return "?";
}

std::string_view to_string(GeneratorStrategy s) {
    switch (s) {
    case GeneratorStrategy::intersection: return "intersection";
    case GeneratorStrategy::least_consistent_index: return "least_consistent_index";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Learner

Learner::Learner(ConceptClass cls, LearnerStrategy strategy, Index constant_index)
    : class_(std::move(cls)), strategy_(strategy), constant_index_(std::move(constant_index)) {
    if (strategy_ == LearnerStrategy::echo_sample && class_.kind() != ClassKind::superfinite)
        throw std::invalid_argument("echo_sample learner requires the superfinite class");
    if (strategy_ == LearnerStrategy::constant && !class_.in_range(constant_index_))
        throw IndexOutOfRange(fmt::format("constant learner: index {} outside {}", constant_index_.str(), class_.name()));
}

std::optional<Index> Learner::observe(Instance x) {
    sample_.insert(x);
    auto next = compute();
    if (has_conjectured_ && next != conjecture_) ++mind_changes_;
    conjecture_ = std::move(next);
    has_conjectured_ = true;
    return conjecture_;
}

std::optional<Index> Learner::compute() const {
    // searched range {0..t}, clipped to the class for finite indexings
    std::uint64_t top = sample_.observations();
    if (auto n = class_.size()) top = std::min<std::uint64_t>(top, static_cast<std::uint64_t>(*n - 1));

    switch (strategy_) {
    case LearnerStrategy::least_within_prefix:
        for (std::uint64_t i = 0; i <= top; ++i)
            if (class_.consistent(i, sample_)) return Index(i);
        return std::nullopt;

    case LearnerStrategy::greatest:
        if (class_.kind() == ClassKind::thresholds) return Index(sample_.min());
        // an all-zero sample fits every period; fall through to the bounded scan
        if (class_.kind() == ClassKind::multiples && sample_.gcd() != 0) return Index(sample_.gcd() - 1);
        for (std::uint64_t i = top + 1; i-- > 0;)
            if (class_.consistent(i, sample_)) return Index(i);
        return std::nullopt;

    case LearnerStrategy::constant: return constant_index_;

    case LearnerStrategy::echo_sample: {
        auto elements = sample_.elements();
        return encode_finite_set(elements) + 1;
    }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Generator

Instance Generator::next(const Sample& prefix, std::uint64_t n_bound, const Sample* also_exclude) const {
    if (n_bound == 0) throw std::invalid_argument("generate_next: n_bound must be >= 1");

    std::vector<LanguageSpec> parts;
    if (strategy_ == GeneratorStrategy::intersection) {
        parts = class_.window_intersection(prefix, n_bound);
    } else {
        std::uint64_t top = n_bound;
        if (auto n = class_.size()) top = std::min<std::uint64_t>(top, static_cast<std::uint64_t>(*n - 1));
        for (std::uint64_t i = 0; i <= top; ++i) {
            if (class_.consistent(i, prefix)) {
                parts.push_back(class_.language(Index(i)));
                break;
            }
        }
    }
    if (parts.empty())
        throw GenerationExhausted(fmt::format("no index <= {} of {} is consistent with the prefix", n_bound, class_.name()));

    auto seen = [&](Instance x) { return prefix.contains(x) || (also_exclude && also_exclude->contains(x)); };
    auto skip_seen = [&](Instance x) {
        while (seen(x)) {
            x = prefix.least_unseen_from(x);
            if (also_exclude) x = also_exclude->least_unseen_from(x);
        }
        return x;
    };

    Instance from = 0;
    for (std::uint64_t tries = 0; tries < kCandidateLimit; ++tries) {
        auto candidate = parts.front().next_member(skip_seen(from));
        if (!candidate) break;
        if (seen(*candidate)) {
            from = *candidate;
            continue;
        }
        const bool in_all = std::all_of(parts.begin() + 1, parts.end(),
                                        [&](const LanguageSpec& l) { return l.contains(*candidate); });
        if (in_all) return *candidate;
        if (*candidate == UINT64_MAX) break;
        from = *candidate + 1;
    }
    throw GenerationExhausted(
        fmt::format("no unseen element in the searched languages of {} (n_bound {})", class_.name(), n_bound));
}

Instance generate_next(const Generator& gen, std::span<const Instance> prefix, std::uint64_t n_bound) {
    return gen.next(Sample(prefix), n_bound);
}

} // namespace learnlab
