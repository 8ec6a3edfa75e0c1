#pragma once

// Risk functionals on finite evaluation universes, finite-support
// distributions and finite enumeration windows.

#include "learnlab/enumeration.hpp"
#include "learnlab/mechanisms.hpp"
#include "learnlab/rng.hpp"
#include "learnlab/universe.hpp"
#include "learnlab/vcdim.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace learnlab {

inline constexpr double kProbabilityTolerance = 1e-12;
/// Two-sided 99% normal quantile used for every Monte Carlo half-width.
inline constexpr double kZ99 = 2.5758293035489004;

class Distribution {
public:
    /// Rejects negative masses, repeated instances, and totals further than
    /// kProbabilityTolerance from 1.
    static Distribution make(std::vector<std::pair<Instance, double>> support);
    static Distribution uniform(std::span<const Instance> points);
    static Distribution point_mass(Instance x) { return make({{x, 1.0}}); }

    const std::vector<std::pair<Instance, double>>& support() const { return support_; }
    Instance sample(Rng& rng) const;
    std::string describe() const;

private:
    explicit Distribution(std::vector<std::pair<Instance, double>> support);

    std::vector<std::pair<Instance, double>> support_;
    std::vector<double> cumulative_;
};

enum class RiskKind { expr, comp, pac_exact, pac_mc, gen, nov };

std::string_view to_string(RiskKind kind);

struct UniverseScope {
    std::vector<Instance> points;
};
struct SupportScope {
    std::vector<Instance> points;
};
struct WindowScope {
    std::uint64_t n0 = 0;
    std::uint64_t n1 = 0;
};
using RiskScope = std::variant<UniverseScope, SupportScope, WindowScope>;

struct RiskReport {
    RiskKind kind = RiskKind::expr;
    double value = 0.0;
    /// Disagreement instances (expr, comp, pac) or violation positions
    /// within [1, N1] (gen, nov).
    std::vector<std::uint64_t> witnesses;
    RiskScope scope;
    std::optional<std::uint64_t> m;
    std::optional<double> ci_halfwidth;
    std::optional<std::uint64_t> seed;
    std::string note;
};

/// Signalled instead of a number when the decider fails to halt somewhere on
/// the universe: the computability risk is undefined there.
struct TotalityViolation {
    std::vector<Instance> diverging;
};

RiskReport risk_expr(const Hypothesis& f, const LanguageSpec& lang, std::span<const Instance> universe);

std::variant<RiskReport, TotalityViolation> risk_comp(const BoundedDecider& d, const LanguageSpec& lang,
                                                      std::span<const Instance> universe, std::uint64_t fuel);

RiskReport risk_pac_exact(const Hypothesis& h, const LanguageSpec& lang, const Distribution& dist);

/// m i.i.d. draws from dist; value is the disagreement frequency with a 99%
/// normal-approximation half-width kZ99 * sqrt(p(1-p)/m).
RiskReport risk_pac_mc(const Hypothesis& h, const LanguageSpec& lang, const Distribution& dist, std::uint64_t m,
                       std::uint64_t seed);

/// Finite-window proxies for the generation and novelty risks. A value of 1
/// means a violation was seen at some position in [N0, N1]; 0 is evidence,
/// not proof, that the limsup vanishes.
std::pair<RiskReport, RiskReport> risk_limit_window(const Generator& gen, const LanguageSpec& target,
                                                    const Schedule& schedule, std::uint64_t n0, std::uint64_t n1);

/// Same evaluation over an already simulated run.
std::pair<RiskReport, RiskReport> window_risks(std::span<const GenerationStep> steps, std::uint64_t n0,
                                               std::uint64_t n1);

class FiniteLanguageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IncompatibleMechanism : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// --- Unified template -------------------------------------------------------

struct HypothesisMechanism {
    Hypothesis h;
};
struct DeciderMechanism {
    BoundedDecider d;
};
/// PAC learner: ERM over a finite hypothesis class.
struct ErmMechanism {
    HypothesisClass hc;
};
struct GeneratorMechanism {
    Generator g;
};
using Mechanism = std::variant<HypothesisMechanism, DeciderMechanism, ErmMechanism, GeneratorMechanism>;

std::string_view mechanism_class_name(const Mechanism& m);

struct TemplateParams {
    std::vector<Instance> universe;          // expr, comp
    std::uint64_t fuel = 1000;               // comp
    std::optional<Distribution> distribution; // pac
    std::uint64_t m = 0;                     // pac sample size
    std::uint64_t seed = 0;                  // pac sampling
    std::optional<Schedule> schedule;        // gen
    std::uint64_t n0 = 0, n1 = 0;            // gen window
    std::vector<RiskKind> requested;         // empty: every applicable kind
};

struct TemplateRow {
    std::string property;        // Expressibility, Computability, ...
    std::string mechanism_class; // F, M_total, A -> H, G
    std::string risk_formula;
    std::string quantifiers;
    RiskKind kind = RiskKind::expr;
    std::optional<RiskReport> report;        // nullopt when the risk is undefined
    std::optional<TotalityViolation> totality;
};

std::vector<TemplateRow> template_report(const Mechanism& mechanism, const LanguageSpec& lang,
                                         const TemplateParams& params);

} // namespace learnlab
