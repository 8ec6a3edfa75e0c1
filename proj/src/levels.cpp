#include "learnlab/arena.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace learnlab {

std::string_view to_string(Distinguisher d) {
    switch (d) {
    case Distinguisher::always_first: return "always_first";
    case Distinguisher::seeded_coin: return "seeded_coin";
    case Distinguisher::majority_membership: return "majority_membership";
    case Distinguisher::parity_of_sum: return "parity_of_sum";
    }
    return "?";
}

namespace {

double three_sigma(double p, std::uint64_t n) { return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n)); }

// Level 0 ---------------------------------------------------------------------

int distinguish(Distinguisher d, const Level0Params& p, const std::vector<Instance>& obs, Rng& guess_rng) {
    switch (d) {
    case Distinguisher::always_first: return 0;
    case Distinguisher::seeded_coin: return guess_rng.bernoulli(0.5) ? 1 : 0;
    case Distinguisher::majority_membership: {
        std::size_t a = 0, b = 0;
        for (Instance x : obs) {
            a += p.first.contains(x);
            b += p.second.contains(x);
        }
        return b > a ? 1 : 0;
    }
    case Distinguisher::parity_of_sum: {
        std::uint64_t sum = 0;
        for (Instance x : obs) sum += x;
        return static_cast<int>(sum & 1);
    }
    }
    return 0;
}

// Level 1 ---------------------------------------------------------------------

/// Thresholds on {0..n-1}: member k accepts x >= k, k = 0..n. Errors are
/// tracked incrementally from per-point label counts.
class ThresholdErm {
public:
    explicit ThresholdErm(std::uint64_t n) : n_(n), errors_(n + 1, 0) {}

    void add(Instance x, bool label) {
        for (std::uint64_t k = 0; k <= n_; ++k)
            if ((x >= k) != label) ++errors_[k];
    }
    /// Least member with the fewest errors.
    std::uint64_t best() const {
        return static_cast<std::uint64_t>(std::min_element(errors_.begin(), errors_.end()) - errors_.begin());
    }
    static bool predict(std::uint64_t k, Instance x) { return x >= k; }

private:
    std::uint64_t n_;
    std::vector<std::uint64_t> errors_;
};

/// Longest run of consecutive steps in [1, horizon] containing no mind change.
std::uint64_t longest_quiet_run(const ExperimentTrace& t) {
    std::uint64_t longest = 0, last = 0;
    for (const auto& r : t.steps)
        if (r.mind_change) {
            longest = std::max(longest, r.step - last - 1);
            last = r.step;
        }
    return std::max(longest, t.steps.size() - last);
}

} // namespace

LevelResult run_level0(const Level0Params& p, std::uint64_t seed) {
    if (p.trials == 0 || p.observations_per_trial == 0 || p.channel_support.empty() || p.distinguishers.empty())
        throw std::invalid_argument("level 0: trials, observations, channel support and distinguishers must be non-empty");
    LevelResult out;
    out.level = 0;
    out.feedback = "None";
    out.expectation_met = true;
    std::vector<std::string> parts;
    std::vector<Instance> obs(p.observations_per_trial);
    for (std::size_t k = 0; k < p.distinguishers.size(); ++k) {
        const auto d = p.distinguishers[k];
        // separate streams: which language is active, what the channel
        // emits, and the distinguisher's own coin never share state
        Rng truth = Rng::substream(seed, 3 * k);
        Rng channel = Rng::substream(seed, 3 * k + 1);
        Rng guess = Rng::substream(seed, 3 * k + 2);
        std::uint64_t correct = 0;
        for (std::uint64_t t = 0; t < p.trials; ++t) {
            const int active = truth.bernoulli(0.5) ? 1 : 0;
            // The channel is the same unlabeled stream for either language.
            for (auto& x : obs) x = p.channel_support[channel.uniform_below(p.channel_support.size())];
            correct += distinguish(d, p, obs, guess) == active;
        }
        const double acc = static_cast<double>(correct) / static_cast<double>(p.trials);
        const double band = three_sigma(0.5, p.trials);
        out.metrics[fmt::format("accuracy.{}", to_string(d))] = acc;
        out.metrics["three_sigma"] = band;
        if (std::abs(acc - 0.5) > band) out.expectation_met = false;
        parts.push_back(fmt::format("{} {:.4f}", to_string(d), acc));
    }
    out.observed = fmt::format("distinguisher accuracy at chance: {}", fmt::join(parts, ", "));
    return out;
}

LevelResult run_level1(const Level1Params& p, std::uint64_t seed) {
    if (p.universe_size < 2 || p.horizon < p.window || p.window == 0 || p.control_seeds == 0)
        throw std::invalid_argument("level 1: need universe >= 2, horizon >= window >= 1, control seeds >= 1");
    LevelResult out;
    out.level = 1;
    out.feedback = "Adversarial";

    // Reflexive run: x_t uniform, label chosen to contradict h_t.
    ExperimentTrace reflexive;
    reflexive.kind = TraceKind::reflexive;
    reflexive.description = fmt::format("reflexive labels 1 - h_t(x) over thresholds on {{0..{}}}", p.universe_size - 1);
    {
        Rng rng = Rng::substream(seed, 0);
        ThresholdErm erm(p.universe_size);
        std::uint64_t h = erm.best();
        for (std::uint64_t t = 1; t <= p.horizon; ++t) {
            const Instance x = rng.uniform_below(p.universe_size);
            const bool y = !ThresholdErm::predict(h, x);
            erm.add(x, y);
            const std::uint64_t next = erm.best();
            StepRecord r;
            r.step = t;
            r.delivered = x;
            r.conjecture = Index(next);
            r.mind_change = t > 1 && next != h;
            r.valid = y; // label carried in the validity column
            h = next;
            reflexive.steps.push_back(std::move(r));
        }
        summarize_mind_changes(reflexive, p.window);
    }
    const std::uint64_t quiet = longest_quiet_run(reflexive);

    // Control: fixed uniform D, labels from a fixed threshold drawn per seed.
    std::uint64_t locked = 0;
    std::uint64_t worst_lock = 0;
    ExperimentTrace control_example;
    for (std::uint64_t s = 0; s < p.control_seeds; ++s) {
        Rng rng = Rng::substream(seed, 1 + s);
        const std::uint64_t target = rng.uniform_below(p.universe_size + 1);
        ThresholdErm erm(p.universe_size);
        ExperimentTrace tr;
        tr.kind = TraceKind::identification;
        tr.description = fmt::format("fixed-D control, target threshold {}", target);
        tr.summary.target_index = Index(target);
        std::uint64_t h = erm.best();
        for (std::uint64_t t = 1; t <= p.horizon; ++t) {
            const Instance x = rng.uniform_below(p.universe_size);
            const bool y = ThresholdErm::predict(target, x);
            erm.add(x, y);
            const std::uint64_t next = erm.best();
            StepRecord r;
            r.step = t;
            r.delivered = x;
            r.conjecture = Index(next);
            r.mind_change = t > 1 && next != h;
            r.valid = y;
            h = next;
            tr.steps.push_back(std::move(r));
        }
        summarize_mind_changes(tr, p.window);
        if (tr.summary.lock_step <= p.lock_by) ++locked;
        worst_lock = std::max(worst_lock, tr.summary.lock_step);
        if (s == 0) control_example = std::move(tr);
    }
    const double locked_fraction = static_cast<double>(locked) / static_cast<double>(p.control_seeds);

    out.metrics["reflexive.mind_changes"] = static_cast<double>(reflexive.summary.mind_changes);
    out.metrics["reflexive.longest_quiet_run"] = static_cast<double>(quiet);
    out.metrics["control.locked_fraction"] = locked_fraction;
    out.metrics["control.worst_lock_step"] = static_cast<double>(worst_lock);
    out.expectation_met = quiet < p.window && locked_fraction >= 0.95;
    out.observed = fmt::format(
        "reflexive: {} mind changes, longest quiet run {} steps; fixed-D control locked by step {} in {:.0f}% of seeds",
        reflexive.summary.mind_changes, quiet, p.lock_by, 100.0 * locked_fraction);
    out.traces.push_back(std::move(reflexive));
    out.traces.push_back(std::move(control_example));
    return out;
}

double coin_discrimination_probability(double p0, double p1, std::uint64_t m) {
    if (!(0.0 < p0 && p0 < p1 && p1 < 1.0))
        throw std::invalid_argument(fmt::format("coin discrimination: need 0 < p0 < p1 < 1 (got {}, {})", p0, p1));
    if (m == 0) return 0.5;
    // Decide p1 when the head count exceeds the midpoint m(p0+p1)/2, p0 when
    // below it, and split an exact tie.
    const double mid = static_cast<double>(m) * (p0 + p1) / 2.0;
    const double md = static_cast<double>(m);
    const double lg_m1 = std::lgamma(md + 1.0);
    const double l0 = std::log(p0), q0 = std::log1p(-p0), l1 = std::log(p1), q1 = std::log1p(-p1);
    double correct_given_1 = 0.0, correct_given_0 = 0.0;
    for (std::uint64_t k = 0; k <= m; ++k) {
        const double kd = static_cast<double>(k);
        const double lc = lg_m1 - std::lgamma(kd + 1.0) - std::lgamma(md - kd + 1.0);
        const double pmf1 = std::exp(lc + kd * l1 + (md - kd) * q1);
        const double pmf0 = std::exp(lc + kd * l0 + (md - kd) * q0);
        if (kd > mid) {
            correct_given_1 += pmf1;
        } else if (kd < mid) {
            correct_given_0 += pmf0;
        } else {
            correct_given_1 += 0.5 * pmf1;
            correct_given_0 += 0.5 * pmf0;
        }
    }
    return std::clamp(0.5 * (correct_given_0 + correct_given_1), 0.0, 1.0);
}

double coin_discrimination_normal(double p0, double p1, std::uint64_t m) {
    if (m == 0) return 0.5;
    const double md = static_cast<double>(m);
    const double gap = md * (p1 - p0) / 2.0;
    auto phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
    const double z1 = gap / std::sqrt(md * p1 * (1 - p1));
    const double z0 = gap / std::sqrt(md * p0 * (1 - p0));
    return 0.5 * (phi(z0) + phi(z1));
}

std::optional<std::uint64_t> smallest_discriminating_m(double p0, double p1, double target, std::uint64_t limit) {
    if (coin_discrimination_probability(p0, p1, limit) < target) return std::nullopt;
    // Accuracy is nondecreasing in m, so bisection finds the first crossing.
    std::uint64_t lo = 0, hi = limit;
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (coin_discrimination_probability(p0, p1, mid) >= target) hi = mid;
        else lo = mid;
    }
    return hi;
}

LevelResult run_level2(const Level2Params& p, std::uint64_t seed) {
    if (p.m == 0 || p.trials == 0) throw std::invalid_argument("level 2: m and trials must be >= 1");
    LevelResult out;
    out.level = 2;
    out.feedback = "Noisy";
    const double exact = coin_discrimination_probability(p.p0, p.p1, p.m);
    const double normal = coin_discrimination_normal(p.p0, p.p1, p.m);

    Rng rng = Rng::substream(seed, 0);
    const double mid = static_cast<double>(p.m) * (p.p0 + p.p1) / 2.0;
    double correct = 0.0;
    for (std::uint64_t t = 0; t < p.trials; ++t) {
        const bool is_p1 = rng.bernoulli(0.5);
        const double prob = is_p1 ? p.p1 : p.p0;
        std::uint64_t heads = 0;
        for (std::uint64_t i = 0; i < p.m; ++i) heads += rng.bernoulli(prob);
        const double h = static_cast<double>(heads);
        if (h == mid) correct += 0.5;
        else if ((h > mid) == is_p1) correct += 1.0;
    }
    const double simulated = correct / static_cast<double>(p.trials);
    const double sigma = std::sqrt(exact * (1 - exact) / static_cast<double>(p.trials));
    const auto m_star = smallest_discriminating_m(p.p0, p.p1, p.target_probability, p.search_limit);

    out.metrics["exact"] = exact;
    out.metrics["normal_approx"] = normal;
    out.metrics["simulated"] = simulated;
    out.metrics["sigma"] = sigma;
    out.metrics["m"] = static_cast<double>(p.m);
    if (m_star) out.metrics["smallest_m_for_target"] = static_cast<double>(*m_star);
    out.expectation_met = std::abs(simulated - exact) <= 3.0 * sigma && m_star.has_value();
    out.observed = fmt::format("p={} vs {}: exact {:.4f} at m={} (simulated {:.4f}); {} flips needed for {:.0f}%",
                               p.p0, p.p1, exact, p.m, simulated,
                               m_star ? fmt::format("{}", *m_star) : std::string(">limit"),
                               100.0 * p.target_probability);
    return out;
}

LevelResult run_level3(const Level3Params& p, std::uint64_t /*seed*/) {
    if (p.horizon < 10) throw std::invalid_argument("level 3: horizon must be >= 10");
    LevelResult out;
    out.level = 3;
    out.feedback = "Indirect";
    const std::uint64_t w = std::max<std::uint64_t>(1, p.horizon / 5);

    const auto thr = ConceptClass::thresholds();
    const auto thr_target = LanguageSpec::threshold(p.threshold_target);
    auto id_thr = run_identification(thr, thr_target, Learner(thr, LearnerStrategy::greatest), Schedule::fair(thr_target),
                                     p.horizon, w);

    const auto cof = ConceptClass::cofinite();
    const auto cof_target = LanguageSpec::cofinite(p.cofinite_excluded);
    auto id_cof = run_identification(cof, cof_target, Learner(cof, LearnerStrategy::least_within_prefix),
                                     Schedule::fair(cof_target), p.horizon, w);
    auto gen_cof = run_generation(cof, cof_target, Generator(cof, GeneratorStrategy::intersection),
                                  Schedule::fair(cof_target), p.horizon, 1);

    out.metrics["thresholds.converged_correct"] = id_thr.summary.converged_correct;
    out.metrics["thresholds.lock_step"] = static_cast<double>(id_thr.summary.lock_step);
    out.metrics["cofinite.identified"] = id_cof.summary.converged_correct;
    out.metrics["cofinite.generation_clean_from"] = static_cast<double>(gen_cof.summary.clean_from);
    out.expectation_met = id_thr.summary.converged_correct && !id_cof.summary.converged_correct &&
                          gen_cof.summary.clean_from <= p.horizon;
    out.observed = fmt::format(
        "thresholds identified (lock step {}); cofinite never identified, yet generation clean from step {}",
        id_thr.summary.lock_step, gen_cof.summary.clean_from);
    out.traces.push_back(std::move(id_thr));
    out.traces.push_back(std::move(id_cof));
    out.traces.push_back(std::move(gen_cof));
    return out;
}

LevelResult run_level4(const Level4Params& p, std::uint64_t /*seed*/) {
    if (p.horizon < 1) throw std::invalid_argument("level 4: horizon must be >= 1");
    LevelResult out;
    out.level = 4;
    out.feedback = "Direct";
    const auto cls = ConceptClass::cofinite();
    const auto target = LanguageSpec::cofinite(p.cofinite_excluded);
    const Generator gen(cls, p.strategy);
    const auto schedule = Schedule::fair(target);
    const auto steps = simulate_generation(gen, target, schedule, p.horizon, /*verify=*/true);

    ExperimentTrace tr;
    tr.kind = TraceKind::generation;
    tr.description = fmt::format("verified generation from {} with {}", target.describe(), to_string(p.strategy));
    tr.summary.target_index = cls.index_of(target);
    std::uint64_t invalid = 0, rejected = 0;
    for (const auto& g : steps) {
        StepRecord r;
        r.step = g.position;
        r.delivered = g.delivered;
        r.emission = g.emitted;
        r.valid = g.valid;
        r.novel = g.novel;
        if (!g.valid) {
            ++invalid;
            tr.summary.validity_violations.push_back(g.position);
        }
        if (!g.novel) tr.summary.novelty_violations.push_back(g.position);
        rejected += g.rejected;
        tr.steps.push_back(std::move(r));
    }
    tr.summary.horizon = p.horizon;
    tr.summary.lock_step = 1;
    tr.summary.window_start = 1;
    tr.summary.window_clean = invalid == 0 && tr.summary.novelty_violations.empty();
    tr.summary.clean_from = 1;
    if (!tr.summary.validity_violations.empty()) tr.summary.clean_from = tr.summary.validity_violations.back() + 1;
    if (!tr.summary.novelty_violations.empty())
        tr.summary.clean_from = std::max(tr.summary.clean_from, tr.summary.novelty_violations.back() + 1);

    out.metrics["invalid_emissions"] = static_cast<double>(invalid);
    out.metrics["rejected_proposals"] = static_cast<double>(rejected);
    out.expectation_met = invalid == 0;
    out.observed = fmt::format("{} invalid emissions in {} steps; verifier rejected {} proposals", invalid, p.horizon,
                               rejected);
    out.traces.push_back(std::move(tr));
    return out;
}

} // namespace learnlab
