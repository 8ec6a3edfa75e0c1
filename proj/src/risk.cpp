#include "learnlab/risk.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace learnlab {

// ---------------------------------------------------------------------------
// Distribution

Distribution::Distribution(std::vector<std::pair<Instance, double>> support) : support_(std::move(support)) {
    cumulative_.reserve(support_.size());
    double acc = 0.0;
    for (const auto& [x, p] : support_) cumulative_.push_back(acc += p);
}

Distribution Distribution::make(std::vector<std::pair<Instance, double>> support) {
    if (support.empty()) throw std::invalid_argument("Distribution: empty support");
    std::set<Instance> seen;
    double total = 0.0;
    for (const auto& [x, p] : support) {
        if (!std::isfinite(p) || p < 0.0)
            throw std::invalid_argument(fmt::format("Distribution: mass {} at {} is not a probability", p, x));
        if (!seen.insert(x).second) throw std::invalid_argument(fmt::format("Distribution: instance {} repeated", x));
        total += p;
    }
    if (std::fabs(total - 1.0) > kProbabilityTolerance)
        throw std::invalid_argument(fmt::format("Distribution: masses sum to {:.17g}, not 1", total));
    return Distribution(std::move(support));
}

Distribution Distribution::uniform(std::span<const Instance> points) {
    std::vector<std::pair<Instance, double>> support;
    support.reserve(points.size());
    const double p = 1.0 / static_cast<double>(points.size());
    for (Instance x : points) support.emplace_back(x, p);
    return make(std::move(support));
}

Instance Distribution::sample(Rng& rng) const {
    const double u = rng.uniform01() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return support_[static_cast<std::size_t>(it - cumulative_.begin())].first;
}

std::string Distribution::describe() const {
    const bool equal_mass = std::all_of(support_.begin(), support_.end(),
                                        [&](const auto& e) { return e.second == support_.front().second; });
    const bool contiguous = support_.back().first - support_.front().first + 1 == support_.size();
    if (support_.size() > 1 && equal_mass && contiguous)
        return fmt::format("uniform[{}..{}]", support_.front().first, support_.back().first);
    if (support_.size() > 8) {
        auto heaviest = std::max_element(support_.begin(), support_.end(),
                                         [](const auto& a, const auto& b) { return a.second < b.second; });
        return fmt::format("{} points on [{}..{}], max mass {} at {}", support_.size(), support_.front().first,
                           support_.back().first, heaviest->second, heaviest->first);
    }
    std::vector<std::string> cells;
    for (const auto& [x, p] : support_) cells.push_back(fmt::format("{}:{}", x, p));
    return fmt::format("{{{}}}", fmt::join(cells, ","));
}

std::string_view to_string(RiskKind kind) {
    switch (kind) {
    case RiskKind::expr: return "expr";
    case RiskKind::comp: return "comp";
    case RiskKind::pac_exact: return "pac_exact";
    case RiskKind::pac_mc: return "pac_mc";
    case RiskKind::gen: return "gen";
    case RiskKind::nov: return "nov";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Pointwise risks

RiskReport risk_expr(const Hypothesis& f, const LanguageSpec& lang, std::span<const Instance> universe) {
    if (universe.empty()) throw std::invalid_argument("risk_expr: empty universe");
    RiskReport r;
    r.kind = RiskKind::expr;
    r.scope = UniverseScope{{universe.begin(), universe.end()}};
    for (Instance x : universe)
        if (f(x) != lang.contains(x)) r.witnesses.push_back(x);
    r.value = r.witnesses.empty() ? 0.0 : 1.0;
    r.note = "sup over the listed universe only";
    return r;
}

std::variant<RiskReport, TotalityViolation> risk_comp(const BoundedDecider& d, const LanguageSpec& lang,
                                                      std::span<const Instance> universe, std::uint64_t fuel) {
    if (universe.empty()) throw std::invalid_argument("risk_comp: empty universe");
    if (fuel == 0) throw std::invalid_argument("risk_comp: fuel must be >= 1");
    TotalityViolation violation;
    RiskReport r;
    r.kind = RiskKind::comp;
    r.scope = UniverseScope{{universe.begin(), universe.end()}};
    for (Instance x : universe) {
        const Decision out = decide_bounded(d, x, fuel);
        if (out == Decision::diverged) {
            violation.diverging.push_back(x);
            continue;
        }
        if ((out == Decision::one) != lang.contains(x)) r.witnesses.push_back(x);
    }
    if (!violation.diverging.empty()) return violation;
    r.value = r.witnesses.empty() ? 0.0 : 1.0;
    r.note = fmt::format("sup over the listed universe only; fuel {}", fuel);
    return r;
}

// ---------------------------------------------------------------------------
// Distributional risks

RiskReport risk_pac_exact(const Hypothesis& h, const LanguageSpec& lang, const Distribution& dist) {
    RiskReport r;
    r.kind = RiskKind::pac_exact;
    std::vector<Instance> points;
    double mass = 0.0;
    for (const auto& [x, p] : dist.support()) {
        points.push_back(x);
        if (h(x) != lang.contains(x)) {
            mass += p;
            r.witnesses.push_back(x);
        }
    }
    r.value = std::clamp(mass, 0.0, 1.0);
    r.scope = SupportScope{std::move(points)};
    return r;
}

RiskReport risk_pac_mc(const Hypothesis& h, const LanguageSpec& lang, const Distribution& dist, std::uint64_t m,
                       std::uint64_t seed) {
    if (m == 0) throw std::invalid_argument("risk_pac_mc: m must be >= 1");
    Rng rng(seed);
    std::uint64_t misses = 0;
    std::set<Instance> witnesses;
    for (std::uint64_t i = 0; i < m; ++i) {
        const Instance x = dist.sample(rng);
        if (h(x) != lang.contains(x)) {
            ++misses;
            witnesses.insert(x);
        }
    }
    RiskReport r;
    r.kind = RiskKind::pac_mc;
    const double p = static_cast<double>(misses) / static_cast<double>(m);
    r.value = p;
    r.m = m;
    r.seed = seed;
    r.ci_halfwidth = kZ99 * std::sqrt(p * (1.0 - p) / static_cast<double>(m));
    r.witnesses.assign(witnesses.begin(), witnesses.end());
    std::vector<Instance> points;
    for (const auto& [x, q] : dist.support()) points.push_back(x);
    r.scope = SupportScope{std::move(points)};
    r.note = "99% normal-approximation half-width";
    return r;
}

// ---------------------------------------------------------------------------
// Sequential risks

std::pair<RiskReport, RiskReport> window_risks(std::span<const GenerationStep> steps, std::uint64_t n0,
                                               std::uint64_t n1) {
    if (n0 > n1) throw std::invalid_argument(fmt::format("window: N0 {} exceeds N1 {}", n0, n1));
    RiskReport gen, nov;
    gen.kind = RiskKind::gen;
    nov.kind = RiskKind::nov;
    gen.scope = nov.scope = WindowScope{n0, n1};
    for (const auto& s : steps) {
        if (s.position > n1) break;
        if (!s.valid) {
            gen.witnesses.push_back(s.position);
            if (s.position >= n0) gen.value = 1.0;
        }
        if (!s.novel) {
            nov.witnesses.push_back(s.position);
            if (s.position >= n0) nov.value = 1.0;
        }
    }
    gen.note = nov.note = "finite-window proxy: 1 = violation seen in [N0, N1]; 0 = none seen, not a certified limit";
    return {gen, nov};
}

std::pair<RiskReport, RiskReport> risk_limit_window(const Generator& gen, const LanguageSpec& target,
                                                    const Schedule& schedule, std::uint64_t n0, std::uint64_t n1) {
    if (n0 > n1) throw std::invalid_argument(fmt::format("risk_limit_window: N0 {} exceeds N1 {}", n0, n1));
    if (target.is_finite())
        throw FiniteLanguageError(fmt::format("risk_limit_window: target {} is finite", target.describe()));
    const auto steps = simulate_generation(gen, target, schedule, n1);
    return window_risks(steps, n0, n1);
}

// ---------------------------------------------------------------------------
// Unified template

namespace {

struct RowText {
    const char* property;
    const char* mechanism_class;
    const char* formula;
    const char* quantifiers;
};

RowText row_text(RiskKind kind) {
    switch (kind) {
    case RiskKind::expr: return {"Expressibility", "F ⊆ {f: X → {0,1}}", "sup_x |f(x) − χ_L(x)|", "∃f ∀x"};
    case RiskKind::comp: return {"Computability", "M_total (total deciders)", "sup_x |M(enc(x)) − χ_L(x)|", "∃M ∀x"};
    case RiskKind::pac_exact:
    case RiskKind::pac_mc:
        return {"PAC learnability", "algorithms A → H", "Pr_{x∼D}[h(x) ≠ χ_L(x)], h = A(S)", "∃A ∀D ∀ε,δ ∃m"};
    case RiskKind::gen:
        return {"Generation", "G: X^{<∞} → X", "limsup_n 1{G(σ≤n) ∉ L}", "∃G ∀L ∀σ ∃N ∀n ≥ N"};
    case RiskKind::nov:
        return {"Generation (novelty)", "G: X^{<∞} → X", "limsup_n 1{G(σ≤n) ∈ {x1..xn}}", "∃G ∀L ∀σ ∃N ∀n ≥ N"};
    }
    return {"?", "?", "?", "?"};
}

TemplateRow make_row(RiskKind kind) {
    auto t = row_text(kind);
    TemplateRow row;
    row.property = t.property;
    row.mechanism_class = t.mechanism_class;
    row.risk_formula = t.formula;
    row.quantifiers = t.quantifiers;
    row.kind = kind;
    return row;
}

} // namespace

std::string_view mechanism_class_name(const Mechanism& m) {
    switch (m.index()) {
    case 0: return "hypothesis";
    case 1: return "decider";
    case 2: return "erm";
    case 3: return "generator";
    }
    return "?";
}

std::vector<TemplateRow> template_report(const Mechanism& mechanism, const LanguageSpec& lang,
                                         const TemplateParams& params) {
    std::vector<RiskKind> applicable;
    if (std::holds_alternative<HypothesisMechanism>(mechanism)) {
        applicable = {RiskKind::expr, RiskKind::pac_exact, RiskKind::pac_mc};
    } else if (std::holds_alternative<DeciderMechanism>(mechanism)) {
        applicable = {RiskKind::comp};
    } else if (std::holds_alternative<ErmMechanism>(mechanism)) {
        applicable = {RiskKind::pac_exact};
    } else {
        applicable = {RiskKind::gen, RiskKind::nov};
    }

    std::vector<RiskKind> kinds = params.requested;
    if (kinds.empty()) {
        // defaults: whatever the supplied parameters support
        for (RiskKind k : applicable) {
            const bool pac = k == RiskKind::pac_exact || k == RiskKind::pac_mc;
            if (pac && !params.distribution) continue;
            if (k == RiskKind::pac_mc && params.m == 0) continue;
            if (std::holds_alternative<HypothesisMechanism>(mechanism) && k == RiskKind::pac_mc) continue;
            kinds.push_back(k);
        }
    }
    for (RiskKind k : kinds)
        if (std::find(applicable.begin(), applicable.end(), k) == applicable.end())
            throw IncompatibleMechanism(fmt::format("risk '{}' does not apply to a {} mechanism", to_string(k),
                                                    mechanism_class_name(mechanism)));

    std::vector<TemplateRow> rows;
    std::optional<std::pair<RiskReport, RiskReport>> window;
    for (RiskKind k : kinds) {
        TemplateRow row = make_row(k);
        switch (k) {
        case RiskKind::expr:
            row.report = risk_expr(std::get<HypothesisMechanism>(mechanism).h, lang, params.universe);
            break;
        case RiskKind::comp: {
            auto out = risk_comp(std::get<DeciderMechanism>(mechanism).d, lang, params.universe, params.fuel);
            if (auto* rep = std::get_if<RiskReport>(&out))
                row.report = *rep;
            else
                row.totality = std::get<TotalityViolation>(out);
            break;
        }
        case RiskKind::pac_exact:
        case RiskKind::pac_mc: {
            if (!params.distribution) throw IncompatibleMechanism("PAC risk needs a distribution");
            if (auto* hm = std::get_if<HypothesisMechanism>(&mechanism)) {
                row.report = k == RiskKind::pac_exact
                                 ? risk_pac_exact(hm->h, lang, *params.distribution)
                                 : risk_pac_mc(hm->h, lang, *params.distribution, params.m, params.seed);
                break;
            }
            const auto& hc = std::get<ErmMechanism>(mechanism).hc;
            if (params.m == 0) throw IncompatibleMechanism("ERM risk needs a sample size m >= 1");
            Rng rng(params.seed);
            std::vector<LabeledPoint> sample;
            for (std::uint64_t i = 0; i < params.m; ++i) {
                const Instance x = params.distribution->sample(rng);
                sample.push_back({x, lang.contains(x)});
            }
            const auto chosen = hc.erm(sample);
            auto rep = risk_pac_exact(hc.hypothesis(chosen), lang, *params.distribution);
            rep.m = params.m;
            rep.seed = params.seed;
            rep.note = fmt::format("ERM over {} picked member {}", hc.name(), chosen);
            row.report = std::move(rep);
            break;
        }
        case RiskKind::gen:
        case RiskKind::nov: {
            if (!params.schedule) throw IncompatibleMechanism("generation risk needs a schedule");
            if (!window)
                window = risk_limit_window(std::get<GeneratorMechanism>(mechanism).g, lang, *params.schedule,
                                           params.n0, params.n1);
            row.report = k == RiskKind::gen ? window->first : window->second;
            break;
        }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace learnlab
