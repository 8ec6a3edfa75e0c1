#pragma once

// Dynamic experiments: identification and generation in the limit, the
// superfinite adversary, the PAC harness, and the five feedback levels.

#include "learnlab/enumeration.hpp"
#include "learnlab/mechanisms.hpp"
#include "learnlab/risk.hpp"
#include "learnlab/universe.hpp"
#include "learnlab/vcdim.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace learnlab {

struct StepRecord {
    std::uint64_t step = 0;
    Instance delivered = 0;
    std::optional<Index> conjecture;  // identification
    std::optional<Instance> emission; // generation
    bool mind_change = false;
    bool valid = true;
    bool novel = true;
};

enum class TraceKind { identification, generation, reflexive };

struct TraceSummary {
    std::uint64_t horizon = 0;
    std::uint64_t stability_window = 0;
    std::uint64_t mind_changes = 0;
    std::uint64_t lock_step = 0; // last mind change, 1 when there is none
    bool converged = false;      // no mind change inside the final window
    bool converged_correct = false;
    std::optional<Index> final_conjecture;
    std::optional<Index> target_index;
    std::vector<std::uint64_t> validity_violations;
    std::vector<std::uint64_t> novelty_violations;
    std::uint64_t clean_from = 1; // first position of the violation-free suffix
    std::uint64_t window_start = 0; // generation: N0
    bool window_clean = true;       // generation: no violation at positions >= N0
    std::optional<LanguageSpec> committed_target;
};

struct ExperimentTrace {
    TraceKind kind = TraceKind::identification;
    std::string description;
    std::vector<StepRecord> steps;
    TraceSummary summary;
};

/// Fills mind-change derived fields (lock step, convergence) from the steps.
void summarize_mind_changes(ExperimentTrace& trace, std::uint64_t stability_window);

class TargetNotInClass : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class FiniteLanguageInClass : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

ExperimentTrace run_identification(const ConceptClass& cls, const LanguageSpec& target, Learner learner,
                                   const Schedule& schedule, std::uint64_t horizon, std::uint64_t stability_window);

ExperimentTrace run_generation(const ConceptClass& cls, const LanguageSpec& target, const Generator& generator,
                               const Schedule& schedule, std::uint64_t horizon, std::uint64_t n0);

struct AdversaryOutcome {
    LanguageSpec committed_target;
    ExperimentTrace trace;
    bool learner_defeated = false; // wrong at the horizon, or changed its mind in the final window
};

/// Diagonal adversary against a SUPERFINITE learner. While the learner
/// conjectures All, the adversary re-delivers seen elements (target: the
/// finite seen set); otherwise it delivers the next fresh natural (target: All).
AdversaryOutcome adversarial_superfinite_run(Learner learner, std::uint64_t horizon);

// --- PAC harness --------------------------------------------------------------

struct PacDistributionSummary {
    std::string distribution;
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;
    double failure_rate = 0.0;
    double ci_halfwidth = 0.0; // 99% normal approximation
    double mean_risk = 0.0;
    double max_risk = 0.0;
    std::vector<double> risks; // per trial
};

struct PacSummary {
    std::string hypothesis_class;
    std::string target;
    double eps = 0, delta = 0;
    std::uint64_t m = 0;
    std::vector<PacDistributionSummary> per_distribution;
    double worst_failure_rate = 0.0;
};

class NotRealizable : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Realizable PAC trials: per trial draw m labeled points, run ERM, and
/// score the exact risk of its output. Each distribution in the sweep uses
/// an independent substream of `seed`.
PacSummary pac_experiment(const HypothesisClass& hc, const LanguageSpec& target,
                          const std::vector<Distribution>& distributions, double eps, double delta,
                          std::uint64_t m, std::uint64_t trials, std::uint64_t seed);

/// Per trial, the first sample size at which the ERM output has exact risk
/// <= eps (streaming draws, up to m_max). Returns the per-trial values.
std::vector<std::uint64_t> samples_to_reach(const HypothesisClass& hc, const LanguageSpec& target,
                                            const Distribution& dist, double eps, std::uint64_t trials,
                                            std::uint64_t m_max, std::uint64_t seed);

double median(std::vector<std::uint64_t> values);
/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

// --- Feedback levels ----------------------------------------------------------

enum class Distinguisher { always_first, seeded_coin, majority_membership, parity_of_sum };

std::string_view to_string(Distinguisher d);

struct Level0Params {
    LanguageSpec first = LanguageSpec::threshold(5);
    LanguageSpec second = LanguageSpec::multiples(2);
    std::vector<Instance> channel_support = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::uint64_t observations_per_trial = 20;
    std::uint64_t trials = 10'000;
    std::vector<Distinguisher> distinguishers = {Distinguisher::always_first, Distinguisher::seeded_coin,
                                                 Distinguisher::majority_membership, Distinguisher::parity_of_sum};
};

struct Level1Params {
    std::uint64_t universe_size = 10; // thresholds 0..universe_size-1 on {0..universe_size-1}
    std::uint64_t horizon = 2000;
    std::uint64_t window = 50;
    std::uint64_t control_seeds = 100;
    std::uint64_t lock_by = 500;
};

struct Level2Params {
    double p0 = 0.49;
    double p1 = 0.51;
    std::uint64_t m = 10'000;
    std::uint64_t trials = 2000;
    double target_probability = 0.95;
    std::uint64_t search_limit = 100'000;
};

struct Level3Params {
    std::uint64_t horizon = 1000;
    Instance threshold_target = 7;
    std::vector<Instance> cofinite_excluded = {3};
};

struct Level4Params {
    std::vector<Instance> cofinite_excluded = {7};
    std::uint64_t horizon = 1000;
    GeneratorStrategy strategy = GeneratorStrategy::intersection;
};

struct LevelResult {
    int level = 0;
    std::string feedback;        // None, Adversarial, ...
    std::string observed;        // one-line outcome for the report
    bool expectation_met = false; // the level's characteristic behaviour showed up
    std::map<std::string, double> metrics;
    std::vector<ExperimentTrace> traces;
};

LevelResult run_level0(const Level0Params& p, std::uint64_t seed);
LevelResult run_level1(const Level1Params& p, std::uint64_t seed);
LevelResult run_level2(const Level2Params& p, std::uint64_t seed);
LevelResult run_level3(const Level3Params& p, std::uint64_t seed);
LevelResult run_level4(const Level4Params& p, std::uint64_t seed);

/// Probability that a majority vote over m flips names the right coin when
/// p0 and p1 are equally likely a priori (ties split evenly). Computed by
/// summing the binomial pmf in log space.
double coin_discrimination_probability(double p0, double p1, std::uint64_t m);
/// Normal-approximation counterpart of the above, for reference.
double coin_discrimination_normal(double p0, double p1, std::uint64_t m);
/// Smallest m whose exact discrimination probability reaches `target`.
std::optional<std::uint64_t> smallest_discriminating_m(double p0, double p1, double target, std::uint64_t limit);

} // namespace learnlab
