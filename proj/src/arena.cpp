#include "learnlab/arena.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace learnlab {

void summarize_mind_changes(ExperimentTrace& trace, std::uint64_t stability_window) {
    auto& s = trace.summary;
    s.horizon = trace.steps.size();
    s.stability_window = stability_window;
    s.mind_changes = 0;
    s.lock_step = 1;
    for (const auto& r : trace.steps) {
        if (!r.mind_change) continue;
        ++s.mind_changes;
        s.lock_step = r.step;
    }
    const std::uint64_t window_begin = s.horizon >= stability_window ? s.horizon - stability_window + 1 : 1;
    s.converged = s.mind_changes == 0 || s.lock_step < window_begin;
    s.final_conjecture = trace.steps.empty() ? std::nullopt : trace.steps.back().conjecture;
    s.converged_correct = s.converged && s.final_conjecture && s.target_index && *s.final_conjecture == *s.target_index;
}

ExperimentTrace run_identification(const ConceptClass& cls, const LanguageSpec& target, Learner learner,
                                   const Schedule& schedule, std::uint64_t horizon, std::uint64_t stability_window) {
    if (stability_window < 1 || horizon < stability_window)
        throw std::invalid_argument(
            fmt::format("run_identification: need horizon >= window >= 1 (got {} and {})", horizon, stability_window));
    auto target_index = cls.index_of(target);
    if (!target_index)
        throw TargetNotInClass(fmt::format("{} is not a member of {}", target.describe(), cls.name()));
    if (!(learner.concept_class() == cls))
        throw std::invalid_argument("run_identification: learner studies a different class");

    ExperimentTrace trace;
    trace.kind = TraceKind::identification;
    trace.description = fmt::format("identify {} in {} with {} under {}", target.describe(), cls.name(),
                                    to_string(learner.strategy()), schedule.describe());
    trace.summary.target_index = target_index;
    trace.steps.reserve(horizon);

    std::optional<Index> previous;
    for (std::uint64_t p = 1; p <= horizon; ++p) {
        StepRecord r;
        r.step = p;
        r.delivered = schedule.at(p);
        r.conjecture = learner.observe(r.delivered);
        r.mind_change = p > 1 && r.conjecture != previous;
        previous = r.conjecture;
        trace.steps.push_back(std::move(r));
    }
    summarize_mind_changes(trace, stability_window);
    return trace;
}

ExperimentTrace run_generation(const ConceptClass& cls, const LanguageSpec& target, const Generator& generator,
                               const Schedule& schedule, std::uint64_t horizon, std::uint64_t n0) {
    if (!cls.all_languages_infinite())
        throw FiniteLanguageInClass(fmt::format("{} contains finite languages; generation needs infinite ones",
                                                cls.name()));
    if (!cls.index_of(target))
        throw TargetNotInClass(fmt::format("{} is not a member of {}", target.describe(), cls.name()));
    if (!(schedule.target() == target))
        throw TargetNotInClass(fmt::format("schedule enumerates {}, not the target {}", schedule.target().describe(),
                                           target.describe()));
    if (!(generator.concept_class() == cls))
        throw std::invalid_argument("run_generation: generator targets a different class");

    ExperimentTrace trace;
    trace.kind = TraceKind::generation;
    trace.description = fmt::format("generate from {} in {} with {} under {}", target.describe(), cls.name(),
                                    to_string(generator.strategy()), schedule.describe());
    trace.summary.target_index = cls.index_of(target);

    const auto steps = simulate_generation(generator, target, schedule, horizon);
    auto& s = trace.summary;
    trace.steps.reserve(steps.size());
    for (const auto& g : steps) {
        StepRecord r;
        r.step = g.position;
        r.delivered = g.delivered;
        r.emission = g.emitted;
        r.valid = g.valid;
        r.novel = g.novel;
        if (!g.valid) s.validity_violations.push_back(g.position);
        if (!g.novel) s.novelty_violations.push_back(g.position);
        trace.steps.push_back(std::move(r));
    }
    s.horizon = horizon;
    s.lock_step = 1;
    s.window_start = n0;
    std::uint64_t last_violation = 0;
    if (!s.validity_violations.empty()) last_violation = std::max(last_violation, s.validity_violations.back());
    if (!s.novelty_violations.empty()) last_violation = std::max(last_violation, s.novelty_violations.back());
    s.clean_from = last_violation + 1;
    s.window_clean = last_violation < n0;
    return trace;
}

AdversaryOutcome adversarial_superfinite_run(Learner learner, std::uint64_t horizon) {
    if (horizon < 10) throw std::invalid_argument(fmt::format("adversary: horizon {} below 10", horizon));
    const auto& cls = learner.concept_class();
    if (cls.kind() != ClassKind::superfinite)
        throw std::invalid_argument("adversary: the learner must study the superfinite class");

    ExperimentTrace trace;
    trace.kind = TraceKind::identification;
    trace.description = fmt::format("superfinite adversary vs {}", to_string(learner.strategy()));
    trace.steps.reserve(horizon);

    Instance next_fresh = 0;
    Instance last_fresh = 0;
    bool padding = false; // the learner currently conjectures All
    std::optional<Index> previous;
    for (std::uint64_t p = 1; p <= horizon; ++p) {
        StepRecord r;
        r.step = p;
        if (padding) {
            r.delivered = last_fresh;
        } else {
            r.delivered = next_fresh;
            last_fresh = next_fresh++;
        }
        r.conjecture = learner.observe(r.delivered);
        r.mind_change = p > 1 && r.conjecture != previous;
        previous = r.conjecture;
        padding = r.conjecture && *r.conjecture == 0;
        trace.steps.push_back(std::move(r));
    }

    // Freeze the limit target: stalling forever makes the seen set the
    // language, fresh deliveries forever make it All.
    std::vector<Instance> seen(next_fresh);
    std::iota(seen.begin(), seen.end(), Instance{0});
    LanguageSpec committed = padding ? LanguageSpec::finite(std::move(seen)) : LanguageSpec::all();

    trace.summary.target_index = cls.index_of(committed);
    trace.summary.committed_target = committed;
    summarize_mind_changes(trace, std::max<std::uint64_t>(1, horizon / 5));

    AdversaryOutcome out{committed, std::move(trace), false};
    const auto& s = out.trace.summary;
    out.learner_defeated = !s.converged_correct;
    return out;
}

// ---------------------------------------------------------------------------
// PAC

namespace {

void check_realizable(const HypothesisClass& hc, const LanguageSpec& target, const Distribution& dist) {
    if (!hc.find(target))
        throw NotRealizable(fmt::format("{} is not realized by {} on its universe", target.describe(), hc.name()));
    for (const auto& [x, p] : dist.support())
        if (!hc.in_universe(x))
            throw NotRealizable(fmt::format("distribution point {} lies outside the universe of {}", x, hc.name()));
}

double member_risk(const HypothesisClass& hc, std::size_t member, const LanguageSpec& target, const Distribution& d) {
    double mass = 0.0;
    for (const auto& [x, p] : d.support())
        if (hc.evaluate(member, x) != target.contains(x)) mass += p;
    return std::clamp(mass, 0.0, 1.0);
}

} // namespace

PacSummary pac_experiment(const HypothesisClass& hc, const LanguageSpec& target,
                          const std::vector<Distribution>& distributions, double eps, double delta,
                          std::uint64_t m, std::uint64_t trials, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("pac_experiment: m must be >= 1");
    if (trials < 1) throw std::invalid_argument("pac_experiment: trials must be >= 1");
    if (distributions.empty()) throw std::invalid_argument("pac_experiment: no distributions");
    for (const auto& d : distributions) check_realizable(hc, target, d);

    PacSummary out;
    out.hypothesis_class = hc.name();
    out.target = target.describe();
    out.eps = eps;
    out.delta = delta;
    out.m = m;

    std::vector<LabeledPoint> sample(m);
    for (std::size_t k = 0; k < distributions.size(); ++k) {
        const auto& dist = distributions[k];
        Rng rng = Rng::substream(seed, k);
        PacDistributionSummary ds;
        ds.distribution = dist.describe();
        ds.trials = trials;
        ds.risks.reserve(trials);
        for (std::uint64_t t = 0; t < trials; ++t) {
            for (auto& pt : sample) {
                pt.x = dist.sample(rng);
                pt.label = target.contains(pt.x);
            }
            const auto chosen = hc.erm(sample);
            const double risk = risk_pac_exact(hc.hypothesis(chosen), target, dist).value;
            ds.risks.push_back(risk);
            if (risk > eps) ++ds.failures;
            ds.mean_risk += risk;
            ds.max_risk = std::max(ds.max_risk, risk);
        }
        ds.mean_risk /= static_cast<double>(trials);
        ds.failure_rate = static_cast<double>(ds.failures) / static_cast<double>(trials);
        ds.ci_halfwidth = kZ99 * std::sqrt(ds.failure_rate * (1.0 - ds.failure_rate) / static_cast<double>(trials));
        out.worst_failure_rate = std::max(out.worst_failure_rate, ds.failure_rate);
        out.per_distribution.push_back(std::move(ds));
    }
    return out;
}

std::vector<std::uint64_t> samples_to_reach(const HypothesisClass& hc, const LanguageSpec& target,
                                            const Distribution& dist, double eps, std::uint64_t trials,
                                            std::uint64_t m_max, std::uint64_t seed) {
    check_realizable(hc, target, dist);
    std::vector<std::uint64_t> out;
    out.reserve(trials);
    std::vector<LabeledPoint> sample;
    for (std::uint64_t t = 0; t < trials; ++t) {
        Rng rng = Rng::substream(seed, t);
        sample.clear();
        // In the realizable case the least zero-error member only moves when
        // the newest point contradicts it, so ERM is re-run only then.
        std::size_t current = hc.erm(sample);
        double risk = member_risk(hc, current, target, dist);
        std::uint64_t reached = m_max;
        for (std::uint64_t m = 1; m <= m_max; ++m) {
            const Instance x = dist.sample(rng);
            sample.push_back({x, target.contains(x)});
            if (hc.evaluate(current, x) != sample.back().label) {
                current = hc.erm(sample);
                risk = member_risk(hc, current, target, dist);
            }
            if (risk <= eps) {
                reached = m;
                break;
            }
        }
        out.push_back(reached);
    }
    return out;
}

double median(std::vector<std::uint64_t> values) {
    if (values.empty()) throw std::invalid_argument("median of an empty list");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return static_cast<double>(values[n / 2]);
    return (static_cast<double>(values[n / 2 - 1]) + static_cast<double>(values[n / 2])) / 2.0;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 paired points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0 && y[i] > 0)) throw std::invalid_argument("loglog_slope: values must be positive");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("loglog_slope: x values are all equal");
    return (n * sxy - sx * sy) / denom;
}

} // namespace learnlab
