#include "learnlab/enumeration.hpp"

#include "learnlab/rng.hpp"

#include <fmt/format.h>

#include <numeric>

namespace learnlab {

std::string_view to_string(ScheduleKind kind) {
    switch (kind) {
    case ScheduleKind::fair: return "fair";
    case ScheduleKind::seeded_shuffle: return "shuffle";
    case ScheduleKind::padded_repeat: return "padded";
    case ScheduleKind::adversarial_superfinite: return "adversarial_superfinite";
    }
    return "?";
}

namespace {

std::optional<std::uint64_t> finite_size(const LanguageSpec& target) {
    if (!target.is_finite()) return std::nullopt;
    if (auto f = target.as<FiniteSet>()) {
        if (f->elements.empty()) throw std::invalid_argument("Schedule: the empty language has no enumeration");
        return f->elements.size();
    }
    std::uint64_t n = 0;
    for (Instance x = 0;; ++n) {
        auto m = target.next_member(x);
        if (!m) break;
        x = *m + 1;
    }
    if (n == 0) throw std::invalid_argument("Schedule: the empty language has no enumeration");
    return n;
}

} // namespace

Schedule Schedule::fair(LanguageSpec target) {
    Schedule s(ScheduleKind::fair, std::move(target));
    s.finite_size_ = finite_size(s.target_);
    return s;
}

Schedule Schedule::shuffled(LanguageSpec target, std::uint64_t window, std::uint64_t seed) {
    if (window == 0) throw std::invalid_argument("Schedule: shuffle window must be >= 1");
    Schedule s(ScheduleKind::seeded_shuffle, std::move(target));
    s.window_ = window;
    s.seed_ = seed;
    s.finite_size_ = finite_size(s.target_);
    return s;
}

Schedule Schedule::padded(LanguageSpec target, std::uint64_t after) {
    if (after == 0) throw std::invalid_argument("Schedule: padding starts after at least one fresh element");
    Schedule s(ScheduleKind::padded_repeat, std::move(target));
    s.after_ = after;
    s.finite_size_ = finite_size(s.target_);
    return s;
}

Instance Schedule::by_rank(std::uint64_t rank) const {
    if (finite_size_) rank %= *finite_size_;
    return enumerate_element(target_, rank);
}

std::vector<std::uint64_t> Schedule::block_permutation(std::uint64_t block) const {
    std::vector<std::uint64_t> perm(window_);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng = Rng::substream(seed_, block);
    rng.shuffle(perm);
    return perm;
}

Instance Schedule::at(std::uint64_t position) const {
    if (position == 0) throw std::invalid_argument("Schedule: positions start at 1");
    const std::uint64_t r = position - 1;
    switch (kind_) {
    case ScheduleKind::fair: return by_rank(r);
    case ScheduleKind::seeded_shuffle: {
        const std::uint64_t block = r / window_;
        if (block != cached_block_) {
            cached_perm_ = block_permutation(block);
            cached_block_ = block;
        }
        return by_rank(block * window_ + cached_perm_[r % window_]);
    }
    case ScheduleKind::padded_repeat: {
        if (position <= after_) return by_rank(r);
        const std::uint64_t q = position - after_;
        // odd offsets repeat the latest fresh element, even offsets advance
        return by_rank(after_ - 1 + q / 2);
    }
    case ScheduleKind::adversarial_superfinite: break;
    }
    throw std::logic_error("Schedule: adversarial enumerations are produced by the arena");
}

std::vector<Instance> Schedule::prefix(std::uint64_t n) const {
    std::vector<Instance> out;
    out.reserve(n);
    for (std::uint64_t p = 1; p <= n; ++p) out.push_back(at(p));
    return out;
}

std::string Schedule::describe() const {
    switch (kind_) {
    case ScheduleKind::fair: return fmt::format("fair({})", target_.describe());
    case ScheduleKind::seeded_shuffle:
        return fmt::format("shuffle({},window={},seed={})", target_.describe(), window_, seed_);
    case ScheduleKind::padded_repeat: return fmt::format("padded({},after={})", target_.describe(), after_);
    case ScheduleKind::adversarial_superfinite: return "adversarial_superfinite";
    }
    return "?";
}

std::vector<GenerationStep> simulate_generation(const Generator& gen, const LanguageSpec& target,
                                                const Schedule& schedule, std::uint64_t horizon, bool verify,
                                                std::uint64_t max_rejections) {
    std::vector<GenerationStep> steps;
    steps.reserve(horizon);
    Sample prefix;
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        GenerationStep step;
        step.position = n;
        step.delivered = schedule.at(n);
        prefix.insert(step.delivered);
        const std::uint64_t n_bound = std::max<std::uint64_t>(n, 1);
        try {
            if (!verify) {
                step.emitted = gen.next(prefix, n_bound);
            } else {
                Sample refused;
                while (step.rejected <= max_rejections) {
                    Instance proposal = gen.next(prefix, n_bound, &refused);
                    if (target.contains(proposal)) {
                        step.emitted = proposal;
                        break;
                    }
                    refused.insert(proposal);
                    ++step.rejected;
                }
            }
        } catch (const GenerationExhausted&) {
            step.emitted.reset();
        }
        if (step.emitted) {
            step.valid = target.contains(*step.emitted);
            step.novel = !prefix.contains(*step.emitted);
        }
        steps.push_back(step);
    }
    return steps;
}

} // namespace learnlab
