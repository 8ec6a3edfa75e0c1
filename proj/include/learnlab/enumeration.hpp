#pragma once

// Enumerations (texts) of a target language and the step-by-step
// generation loop shared by the risk evaluator and the arena.

#include "learnlab/mechanisms.hpp"
#include "learnlab/universe.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace learnlab {

enum class ScheduleKind { fair, seeded_shuffle, padded_repeat, adversarial_superfinite };

std::string_view to_string(ScheduleKind kind);

/// A static enumeration of a committed target. Positions start at 1.
///
///   fair            position p delivers the rank-(p-1) element; finite
///                   targets cycle through their elements
///   seeded_shuffle  fair order permuted inside consecutive windows
///   padded_repeat   fair up to `after`, then every fresh element is
///                   preceded by a repeat of the previous one
///
/// The adversarial kind is reactive and lives in the arena; it exists here
/// only as a label for traces.
class Schedule {
public:
    static Schedule fair(LanguageSpec target);
    static Schedule shuffled(LanguageSpec target, std::uint64_t window, std::uint64_t seed);
    static Schedule padded(LanguageSpec target, std::uint64_t after);

    Instance at(std::uint64_t position) const;
    std::vector<Instance> prefix(std::uint64_t n) const;

    ScheduleKind kind() const { return kind_; }
    const LanguageSpec& target() const { return target_; }
    std::uint64_t window() const { return window_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t after() const { return after_; }
    std::string describe() const;

private:
    Schedule(ScheduleKind kind, LanguageSpec target) : kind_(kind), target_(std::move(target)) {}

    Instance by_rank(std::uint64_t rank) const;
    std::vector<std::uint64_t> block_permutation(std::uint64_t block) const;

    ScheduleKind kind_;
    LanguageSpec target_;
    std::uint64_t window_ = 1;
    std::uint64_t seed_ = 0;
    std::uint64_t after_ = 0;
    std::optional<std::uint64_t> finite_size_;
    // cache for the window currently being read
    mutable std::uint64_t cached_block_ = UINT64_MAX;
    mutable std::vector<std::uint64_t> cached_perm_;
};

struct GenerationStep {
    std::uint64_t position = 0;
    Instance delivered = 0;
    std::optional<Instance> emitted; // nullopt: generator exhausted
    bool valid = false;
    bool novel = false;
    std::uint64_t rejected = 0; // proposals refused by the verifier
};

/// Runs the generator along the schedule for `horizon` positions. At
/// position n the generator sees the first n delivered instances and the
/// window bound max(n, 1). With `verify`, each proposal is checked against
/// the target first; refused proposals are withheld and the generator asked
/// again with them excluded, up to `max_rejections` times per position.
std::vector<GenerationStep> simulate_generation(const Generator& gen, const LanguageSpec& target,
                                                const Schedule& schedule, std::uint64_t horizon,
                                                bool verify = false, std::uint64_t max_rejections = 1 << 16);

} // namespace learnlab
