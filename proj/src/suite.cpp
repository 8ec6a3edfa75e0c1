#include "learnlab/suite.hpp"

#include "learnlab/report.hpp"
#include "learnlab/rng.hpp"

#include <fmt/format.h>

#include <chrono>
#include <fstream>
#include <functional>
#include <regex>
#include <set>
#include <sstream>

namespace learnlab {

namespace fs = std::filesystem;

namespace {

using Prepared = std::function<BlockOutput(std::uint64_t)>;

// --- serialization helpers ----------------------------------------------------

std::string csv_text(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string num(double v) { return fmt::format("{}", v); }

Json violation_json(const std::vector<std::uint64_t>& positions) {
    Json j = {{"count", positions.size()}};
    j["first"] = positions.empty() ? Json(nullptr) : Json(positions.front());
    j["last"] = positions.empty() ? Json(nullptr) : Json(positions.back());
    return j;
}

Json optional_index(const std::optional<Index>& i) { return i ? Json(index_to_string(*i)) : Json(nullptr); }

Json trace_summary_json(const ExperimentTrace& t) {
    const auto& s = t.summary;
    Json j;
    j["description"] = t.description;
    j["kind"] = t.kind == TraceKind::identification ? "identification"
                : t.kind == TraceKind::generation   ? "generation"
                                                    : "reflexive";
    j["horizon"] = s.horizon;
    j["stability_window"] = s.stability_window;
    j["lock_step"] = s.lock_step;
    j["mind_changes"] = s.mind_changes;
    j["converged"] = s.converged;
    j["converged_correct"] = s.converged_correct;
    j["final_conjecture"] = optional_index(s.final_conjecture);
    j["target_index"] = optional_index(s.target_index);
    j["violations"] = {{"validity", violation_json(s.validity_violations)},
                       {"novelty", violation_json(s.novelty_violations)}};
    j["clean_from"] = s.clean_from;
    j["window_start"] = s.window_start;
    j["window_clean"] = s.window_clean;
    j["committed_target"] = s.committed_target ? language_to_json(*s.committed_target) : Json(nullptr);
    return j;
}

constexpr const char* kTraceHeader = "step,delivered,conjecture_or_emission,mind_change,valid,novel\n";

void append_trace_rows(std::string& out, const ExperimentTrace& t, const std::string& prefix = {}) {
    for (const auto& r : t.steps) {
        std::string value;
        if (r.conjecture) value = index_to_string(*r.conjecture);
        else if (r.emission) value = fmt::format("{}", *r.emission);
        out += prefix;
        out += fmt::format("{},{},{},{},{},{}\n", r.step, r.delivered, value, int(r.mind_change), int(r.valid),
                           int(r.novel));
    }
}

std::string trace_csv(const ExperimentTrace& t) {
    std::string out = kTraceHeader;
    append_trace_rows(out, t);
    return out;
}

// --- vc -----------------------------------------------------------------------

Prepared prepare_vc(const Json& p, const std::string& path) {
    expect_keys(p, {"family", "k", "universe", "cap", "record_timing"}, path);
    auto hc = std::make_shared<HypothesisClass>(parse_hypothesis_class(p, path));
    const auto cap = get_u64_or(p, "cap", std::min<std::uint64_t>(10, hc->universe().size()), path);
    if (cap > kMaxVcCap) throw ConfigError(key_path(path, "cap"), fmt::format("must be <= {}", kMaxVcCap));
    const bool timing = get_bool_or(p, "record_timing", false, path);
    return [hc, cap, timing](std::uint64_t) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto r = vc_dimension(*hc, hc->universe(), cap);
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        const std::string witness = fmt::format("{}", fmt::join(r.witness, " "));
        BlockOutput out;
        out.trace_csv = "family,k,universe_size,cap,vc,at_cap,witness,subsets_checked,elapsed_ms\n";
        out.trace_csv += fmt::format("{},{},{},{},{},{},{},{},{}\n", hc->name(), hc->k(), hc->universe().size(), cap,
                                     r.dimension, int(!r.exact), witness, r.subsets_checked,
                                     timing ? fmt::format("{:.3f}", ms) : std::string());
        out.summary = {{"family", hc->name()},
                       {"k", hc->k()},
                       {"universe_size", hc->universe().size()},
                       {"members", hc->size()},
                       {"cap", cap},
                       {"vc", r.dimension},
                       {"at_cap", !r.exact},
                       {"witness", r.witness},
                       {"subsets_checked", r.subsets_checked}};
        return out;
    };
}

// --- pac ----------------------------------------------------------------------

std::size_t default_vc(const HypothesisClass& hc) {
    switch (hc.family()) {
    case HypothesisFamily::thresholds: return 1;
    case HypothesisFamily::intervals: return 2;
    case HypothesisFamily::unions_of_intervals: return 2 * hc.k();
    case HypothesisFamily::lookup_tables: return hc.universe().size();
    }
    return 1;
}

Prepared prepare_pac(const Json& p, const std::string& path) {
    expect_keys(p, {"family", "k", "universe", "target", "eps", "delta", "C", "d", "m", "trials", "distributions",
                    "scaling"},
                path);
    auto hc = std::make_shared<HypothesisClass>(parse_hypothesis_class(p, path));
    const auto target = parse_language(require(p, "target", path), key_path(path, "target"));
    const double eps = get_double(p, "eps", path);
    const double delta = get_double(p, "delta", path);
    const double C = get_double_or(p, "C", 4.0, path);
    if (!(eps > 0 && eps < 1)) throw ConfigError(key_path(path, "eps"), "must lie in (0, 1)");
    if (!(delta > 0 && delta < 1)) throw ConfigError(key_path(path, "delta"), "must lie in (0, 1)");
    if (!(C > 0)) throw ConfigError(key_path(path, "C"), "must be positive");
    const auto d = get_u64_or(p, "d", default_vc(*hc), path);
    const auto m = get_u64_or(p, "m", sample_bound(d, eps, delta, C), path);
    if (m == 0) throw ConfigError(key_path(path, "m"), "must be >= 1");
    const auto trials = get_u64_or(p, "trials", 500, path);
    if (trials == 0) throw ConfigError(key_path(path, "trials"), "must be >= 1");
    if (!hc->find(target)) throw ConfigError(key_path(path, "target"), "not realizable by the hypothesis class");

    std::vector<Distribution> dists;
    if (p.contains("distributions")) {
        const auto& arr = p.at("distributions");
        const auto dp = key_path(path, "distributions");
        if (!arr.is_array() || arr.empty()) throw ConfigError(dp, "expected a non-empty array");
        for (std::size_t i = 0; i < arr.size(); ++i)
            dists.push_back(parse_distribution(arr[i], hc->universe(), fmt::format("{}[{}]", dp, i)));
    } else {
        dists.push_back(Distribution::uniform(hc->universe()));
    }
    for (std::size_t i = 0; i < dists.size(); ++i)
        for (const auto& [x, w] : dists[i].support())
            if (!hc->in_universe(x))
                throw ConfigError(fmt::format("{}[{}]", key_path(path, "distributions"), i),
                                  fmt::format("point {} lies outside the universe", x));

    struct Scaling {
        std::vector<double> eps;
        std::uint64_t trials = 201;
        std::uint64_t m_max = 100'000;
    };
    std::optional<Scaling> scaling;
    if (p.contains("scaling")) {
        const auto sp = key_path(path, "scaling");
        const auto& s = p.at("scaling");
        expect_keys(s, {"eps", "trials", "m_max"}, sp);
        Scaling sc;
        const auto& e = require(s, "eps", sp);
        if (!e.is_array() || e.size() < 2) throw ConfigError(key_path(sp, "eps"), "expected at least two values");
        for (const auto& v : e) {
            if (!v.is_number() || !(v.get<double>() > 0 && v.get<double>() < 1))
                throw ConfigError(key_path(sp, "eps"), "values must lie in (0, 1)");
            sc.eps.push_back(v.get<double>());
        }
        sc.trials = get_u64_or(s, "trials", sc.trials, sp);
        sc.m_max = get_u64_or(s, "m_max", sc.m_max, sp);
        if (sc.trials == 0 || sc.m_max == 0) throw ConfigError(sp, "trials and m_max must be >= 1");
        scaling = sc;
    }

    return [=](std::uint64_t seed) {
        const auto s = pac_experiment(*hc, target, dists, eps, delta, m, trials, seed);
        BlockOutput out;
        out.trace_csv = "distribution,trials,m,failures,failure_rate,ci_halfwidth,mean_risk,max_risk\n";
        Json rows = Json::array();
        for (const auto& d : s.per_distribution) {
            out.trace_csv += fmt::format("{},{},{},{},{},{},{},{}\n", csv_text(d.distribution), d.trials, s.m,
                                         d.failures, num(d.failure_rate), num(d.ci_halfwidth), num(d.mean_risk),
                                         num(d.max_risk));
            rows.push_back({{"distribution", d.distribution},
                            {"trials", d.trials},
                            {"failures", d.failures},
                            {"failure_rate", d.failure_rate},
                            {"ci_halfwidth", d.ci_halfwidth},
                            {"mean_risk", d.mean_risk},
                            {"max_risk", d.max_risk}});
        }
        out.summary = {{"hypothesis_class", s.hypothesis_class},
                       {"target", language_to_json(target)},
                       {"eps", eps},
                       {"delta", delta},
                       {"C", C},
                       {"d", d},
                       {"m", s.m},
                       {"per_distribution", rows},
                       {"worst_failure_rate", s.worst_failure_rate},
                       {"within_delta", s.worst_failure_rate <= delta}};
        if (scaling) {
            std::vector<double> inv, med;
            std::string csv = "eps,trials,median_m\n";
            // the scaling sweep uses the first distribution and its own substream
            for (std::size_t i = 0; i < scaling->eps.size(); ++i) {
                const auto v = samples_to_reach(*hc, target, dists.front(), scaling->eps[i], scaling->trials,
                                                scaling->m_max, derive_seed(seed, 1000 + i));
                inv.push_back(1.0 / scaling->eps[i]);
                med.push_back(median(v));
                csv += fmt::format("{},{},{}\n", num(scaling->eps[i]), scaling->trials, num(med.back()));
            }
            out.summary["scaling"] = {{"eps", scaling->eps},
                                      {"median_m", med},
                                      {"trials", scaling->trials},
                                      {"loglog_slope", loglog_slope(inv, med)}};
            out.extra.emplace_back("scaling.csv", std::move(csv));
        }
        return out;
    };
}

// --- limit-identify / limit-generate ------------------------------------------

// Automata are deduplicated on short inputs only; record how short.
void describe_class(Json& summary, const ConceptClass& cls) {
    summary["class"] = class_to_json(cls);
    if (cls.kind() == ClassKind::regular_small) summary["class_equivalence_bits"] = ConceptClass::kRegularEquivBits;
}

Prepared prepare_identify(const Json& p, const std::string& path) {
    expect_keys(p, {"class", "target", "learner", "constant_index", "schedule", "horizon", "window"}, path);
    const auto cls = parse_class(require(p, "class", path), key_path(path, "class"));
    const auto target = parse_language(require(p, "target", path), key_path(path, "target"));
    const auto strategy = parse_learner(require(p, "learner", path), key_path(path, "learner"));
    const auto constant_index = get_u64_or(p, "constant_index", 0, path);
    const auto schedule = p.contains("schedule") ? parse_schedule(p.at("schedule"), target, key_path(path, "schedule"))
                                                 : Schedule::fair(target);
    const auto horizon = get_u64(p, "horizon", path);
    const auto window = get_u64_or(p, "window", std::max<std::uint64_t>(1, horizon / 5), path);
    if (window == 0 || window > horizon) throw ConfigError(key_path(path, "window"), "need 1 <= window <= horizon");
    if (!cls.index_of(target)) throw ConfigError(key_path(path, "target"), "not a member of the class");
    try {
        Learner probe(cls, strategy, constant_index);
    } catch (const std::exception& e) {
        throw ConfigError(key_path(path, "learner"), e.what());
    }
    return [=](std::uint64_t) {
        auto t = run_identification(cls, target, Learner(cls, strategy, constant_index), schedule, horizon, window);
        BlockOutput out;
        out.trace_csv = trace_csv(t);
        out.summary = trace_summary_json(t);
        describe_class(out.summary, cls);
        out.summary["target"] = language_to_json(target);
        out.summary["learner"] = std::string(to_string(strategy));
        out.summary["schedule"] = schedule.describe();
        return out;
    };
}

Prepared prepare_generate(const Json& p, const std::string& path) {
    expect_keys(p, {"class", "target", "generator", "schedule", "horizon", "n0"}, path);
    const auto cls = parse_class(require(p, "class", path), key_path(path, "class"));
    const auto target = parse_language(require(p, "target", path), key_path(path, "target"));
    const auto strategy = parse_generator(require(p, "generator", path), key_path(path, "generator"));
    const auto schedule = p.contains("schedule") ? parse_schedule(p.at("schedule"), target, key_path(path, "schedule"))
                                                 : Schedule::fair(target);
    const auto horizon = get_u64(p, "horizon", path);
    if (horizon == 0) throw ConfigError(key_path(path, "horizon"), "must be >= 1");
    const auto n0 = get_u64_or(p, "n0", 1, path);
    if (!cls.all_languages_infinite())
        throw ConfigError(key_path(path, "class"), "generation needs a class of infinite languages");
    if (!cls.index_of(target)) throw ConfigError(key_path(path, "target"), "not a member of the class");
    return [=](std::uint64_t) {
        auto t = run_generation(cls, target, Generator(cls, strategy), schedule, horizon, n0);
        BlockOutput out;
        out.trace_csv = trace_csv(t);
        out.summary = trace_summary_json(t);
        describe_class(out.summary, cls);
        out.summary["target"] = language_to_json(target);
        out.summary["generator"] = std::string(to_string(strategy));
        out.summary["schedule"] = schedule.describe();
        return out;
    };
}

// --- adversary ----------------------------------------------------------------

Prepared prepare_adversary(const Json& p, const std::string& path) {
    expect_keys(p, {"learner", "horizon"}, path);
    const auto strategy = parse_learner(require(p, "learner", path), key_path(path, "learner"));
    const auto horizon = get_u64(p, "horizon", path);
    if (horizon < 10) throw ConfigError(key_path(path, "horizon"), "must be >= 10");
    const std::string learner_name = require(p, "learner", path).get<std::string>();
    return [=](std::uint64_t) {
        auto o = adversarial_superfinite_run(Learner(ConceptClass::superfinite(), strategy, 0), horizon);
        BlockOutput out;
        out.trace_csv = trace_csv(o.trace);
        out.summary = trace_summary_json(o.trace);
        out.summary["learner"] = learner_name;
        out.summary["learner_defeated"] = o.learner_defeated;
        return out;
    };
}

// --- levels -------------------------------------------------------------------

Distinguisher parse_distinguisher(const Json& j, const std::string& path) {
    if (j.is_string())
        for (auto d : {Distinguisher::always_first, Distinguisher::seeded_coin, Distinguisher::majority_membership,
                       Distinguisher::parity_of_sum})
            if (to_string(d) == j.get<std::string>()) return d;
    throw ConfigError(path, fmt::format("unknown distinguisher {}", j.dump()));
}

Json level_json(const LevelResult& r) {
    Json traces = Json::array();
    for (const auto& t : r.traces) traces.push_back(trace_summary_json(t));
    Json metrics = Json::object();
    for (const auto& [k, v] : r.metrics) metrics[k] = v;
    return {{"level", r.level},
            {"feedback", r.feedback},
            {"observed", r.observed},
            {"expectation_met", r.expectation_met},
            {"metrics", metrics},
            {"traces", traces}};
}

Prepared prepare_levels(const Json& p, const std::string& path) {
    expect_keys(p, {"levels", "level0", "level1", "level2", "level3", "level4"}, path);
    std::vector<int> levels = {0, 1, 2, 3, 4};
    if (p.contains("levels")) {
        levels.clear();
        const auto lp = key_path(path, "levels");
        for (auto v : get_instances(p.at("levels"), lp)) {
            if (v > 4) throw ConfigError(lp, fmt::format("unknown level {}", v));
            levels.push_back(static_cast<int>(v));
        }
    }
    Level0Params l0;
    Level1Params l1;
    Level2Params l2;
    Level3Params l3;
    Level4Params l4;
    const Json empty = Json::object();
    auto section = [&](const char* key) -> const Json& { return p.contains(key) ? p.at(key) : empty; };
    {
        const auto sp = key_path(path, "level0");
        const auto& s = section("level0");
        expect_keys(s, {"first", "second", "channel_support", "observations_per_trial", "trials", "distinguishers"}, sp);
        if (s.contains("first")) l0.first = parse_language(s.at("first"), key_path(sp, "first"));
        if (s.contains("second")) l0.second = parse_language(s.at("second"), key_path(sp, "second"));
        if (s.contains("channel_support"))
            l0.channel_support = get_instances(s.at("channel_support"), key_path(sp, "channel_support"));
        l0.observations_per_trial = get_u64_or(s, "observations_per_trial", l0.observations_per_trial, sp);
        l0.trials = get_u64_or(s, "trials", l0.trials, sp);
        if (s.contains("distinguishers")) {
            const auto& arr = s.at("distinguishers");
            if (!arr.is_array()) throw ConfigError(key_path(sp, "distinguishers"), "expected an array");
            l0.distinguishers.clear();
            for (std::size_t i = 0; i < arr.size(); ++i)
                l0.distinguishers.push_back(
                    parse_distinguisher(arr[i], fmt::format("{}[{}]", key_path(sp, "distinguishers"), i)));
        }
        if (l0.trials == 0 || l0.observations_per_trial == 0 || l0.channel_support.empty() || l0.distinguishers.empty())
            throw ConfigError(sp, "trials, observations, channel support and distinguishers must be non-empty");
    }
    {
        const auto sp = key_path(path, "level1");
        const auto& s = section("level1");
        expect_keys(s, {"universe_size", "horizon", "window", "control_seeds", "lock_by"}, sp);
        l1.universe_size = get_u64_or(s, "universe_size", l1.universe_size, sp);
        l1.horizon = get_u64_or(s, "horizon", l1.horizon, sp);
        l1.window = get_u64_or(s, "window", l1.window, sp);
        l1.control_seeds = get_u64_or(s, "control_seeds", l1.control_seeds, sp);
        l1.lock_by = get_u64_or(s, "lock_by", l1.lock_by, sp);
        if (l1.universe_size < 2 || l1.window == 0 || l1.horizon < l1.window || l1.control_seeds == 0)
            throw ConfigError(sp, "need universe_size >= 2, horizon >= window >= 1, control_seeds >= 1");
    }
    {
        const auto sp = key_path(path, "level2");
        const auto& s = section("level2");
        expect_keys(s, {"p0", "p1", "m", "trials", "target_probability", "search_limit"}, sp);
        l2.p0 = get_double_or(s, "p0", l2.p0, sp);
        l2.p1 = get_double_or(s, "p1", l2.p1, sp);
        l2.m = get_u64_or(s, "m", l2.m, sp);
        l2.trials = get_u64_or(s, "trials", l2.trials, sp);
        l2.target_probability = get_double_or(s, "target_probability", l2.target_probability, sp);
        l2.search_limit = get_u64_or(s, "search_limit", l2.search_limit, sp);
        if (!(0 < l2.p0 && l2.p0 < l2.p1 && l2.p1 < 1)) throw ConfigError(sp, "need 0 < p0 < p1 < 1");
        if (l2.m == 0 || l2.trials == 0 || l2.search_limit == 0) throw ConfigError(sp, "m, trials, search_limit >= 1");
        if (l2.search_limit > 100'000) throw ConfigError(key_path(sp, "search_limit"), "must be <= 100000");
    }
    {
        const auto sp = key_path(path, "level3");
        const auto& s = section("level3");
        expect_keys(s, {"horizon", "threshold_target", "cofinite_excluded"}, sp);
        l3.horizon = get_u64_or(s, "horizon", l3.horizon, sp);
        l3.threshold_target = get_u64_or(s, "threshold_target", l3.threshold_target, sp);
        if (s.contains("cofinite_excluded"))
            l3.cofinite_excluded = get_instances(s.at("cofinite_excluded"), key_path(sp, "cofinite_excluded"));
        if (l3.horizon < 10) throw ConfigError(key_path(sp, "horizon"), "must be >= 10");
    }
    {
        const auto sp = key_path(path, "level4");
        const auto& s = section("level4");
        expect_keys(s, {"horizon", "cofinite_excluded", "strategy"}, sp);
        l4.horizon = get_u64_or(s, "horizon", l4.horizon, sp);
        if (s.contains("cofinite_excluded"))
            l4.cofinite_excluded = get_instances(s.at("cofinite_excluded"), key_path(sp, "cofinite_excluded"));
        if (s.contains("strategy")) l4.strategy = parse_generator(s.at("strategy"), key_path(sp, "strategy"));
        if (l4.horizon == 0) throw ConfigError(key_path(sp, "horizon"), "must be >= 1");
    }

    return [=](std::uint64_t seed) {
        BlockOutput out;
        out.trace_csv = std::string("trace,") + kTraceHeader;
        Json rows = Json::array();
        for (int level : levels) {
            const auto s = derive_seed(seed, static_cast<std::uint64_t>(level));
            LevelResult r;
            switch (level) {
            case 0: r = run_level0(l0, s); break;
            case 1: r = run_level1(l1, s); break;
            case 2: r = run_level2(l2, s); break;
            case 3: r = run_level3(l3, s); break;
            default: r = run_level4(l4, s); break;
            }
            for (std::size_t i = 0; i < r.traces.size(); ++i)
                append_trace_rows(out.trace_csv, r.traces[i], fmt::format("level{}.{},", level, i));
            rows.push_back(level_json(r));
        }
        out.summary = {{"levels", rows}};
        return out;
    };
}

// --- risk ---------------------------------------------------------------------

Prepared prepare_risk(const Json& p, const std::string& path) {
    expect_keys(p, {"mechanism", "language", "universe", "fuel", "distribution", "m", "schedule", "n0", "n1",
                    "requested"},
                path);
    const auto mechanism = parse_mechanism(require(p, "mechanism", path), key_path(path, "mechanism"));
    const auto lang = parse_language(require(p, "language", path), key_path(path, "language"));
    TemplateParams tp;
    if (p.contains("universe")) tp.universe = parse_universe(p.at("universe"), key_path(path, "universe"));
    tp.fuel = get_u64_or(p, "fuel", tp.fuel, path);
    if (tp.fuel == 0) throw ConfigError(key_path(path, "fuel"), "must be >= 1");
    if (p.contains("distribution"))
        tp.distribution = parse_distribution(p.at("distribution"), tp.universe, key_path(path, "distribution"));
    tp.m = get_u64_or(p, "m", 0, path);
    if (p.contains("schedule")) tp.schedule = parse_schedule(p.at("schedule"), lang, key_path(path, "schedule"));
    tp.n0 = get_u64_or(p, "n0", 1, path);
    tp.n1 = get_u64_or(p, "n1", 1000, path);
    if (tp.n0 > tp.n1) throw ConfigError(key_path(path, "n0"), "must be <= n1");
    if (p.contains("requested")) {
        const auto& arr = p.at("requested");
        const auto rp = key_path(path, "requested");
        if (!arr.is_array()) throw ConfigError(rp, "expected an array of risk names");
        for (std::size_t i = 0; i < arr.size(); ++i)
            tp.requested.push_back(parse_risk_kind(arr[i], fmt::format("{}[{}]", rp, i)));
    }
    const bool is_gen = std::holds_alternative<GeneratorMechanism>(mechanism);
    if (is_gen && !tp.schedule) tp.schedule = Schedule::fair(lang);
    if (!is_gen && tp.universe.empty() && !tp.distribution)
        throw ConfigError(key_path(path, "universe"), "needed for expressibility/computability risks");
    const std::string mech_name(mechanism_class_name(mechanism));

    return [=](std::uint64_t seed) {
        TemplateParams params = tp;
        params.seed = seed;
        const auto rows = template_report(mechanism, lang, params);
        BlockOutput out;
        out.trace_csv = "kind,property,defined,value,m,ci_halfwidth,witnesses\n";
        Json jr = Json::array();
        for (const auto& row : rows) {
            Json r = {{"kind", std::string(to_string(row.kind))},
                      {"property", row.property},
                      {"mechanism_class", row.mechanism_class},
                      {"risk_formula", row.risk_formula},
                      {"quantifiers", row.quantifiers}};
            if (row.report) {
                const auto& rep = *row.report;
                r["defined"] = true;
                r["value"] = rep.value;
                r["m"] = rep.m ? Json(*rep.m) : Json(nullptr);
                r["ci_halfwidth"] = rep.ci_halfwidth ? Json(*rep.ci_halfwidth) : Json(nullptr);
                r["witnesses"] = rep.witnesses;
                r["note"] = rep.note;
                out.trace_csv += fmt::format("{},{},1,{},{},{},{}\n", to_string(row.kind), csv_text(row.property),
                                             num(rep.value), rep.m ? fmt::format("{}", *rep.m) : "",
                                             rep.ci_halfwidth ? num(*rep.ci_halfwidth) : "", rep.witnesses.size());
            } else {
                r["defined"] = false;
                r["value"] = nullptr;
                r["diverging"] = row.totality ? row.totality->diverging : std::vector<Instance>{};
                out.trace_csv += fmt::format("{},{},0,,,,{}\n", to_string(row.kind), csv_text(row.property),
                                             row.totality ? row.totality->diverging.size() : 0);
            }
            jr.push_back(std::move(r));
        }
        out.summary = {{"mechanism", mech_name}, {"language", language_to_json(lang)}, {"rows", jr}};
        return out;
    };
}

Prepared prepare_block(const BlockConfig& b, const std::string& path) {
    const auto pp = key_path(path, "params");
    if (b.kind == "vc") return prepare_vc(b.params, pp);
    if (b.kind == "pac") return prepare_pac(b.params, pp);
    if (b.kind == "limit-identify") return prepare_identify(b.params, pp);
    if (b.kind == "limit-generate") return prepare_generate(b.params, pp);
    if (b.kind == "adversary") return prepare_adversary(b.params, pp);
    if (b.kind == "levels") return prepare_levels(b.params, pp);
    if (b.kind == "risk") return prepare_risk(b.params, pp);
    throw ConfigError(key_path(path, "kind"), fmt::format("unknown kind \"{}\"", b.kind));
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    f << content;
}

} // namespace

SuiteConfig parse_suite(const Json& j) {
    expect_keys(j, {"seed", "output", "blocks", "$schema"}, "");
    SuiteConfig cfg;
    cfg.raw = j;
    cfg.seed = get_u64(j, "seed", "");
    if (j.contains("output")) cfg.output = get_string(j, "output", "");
    const auto& blocks = require(j, "blocks", "");
    if (!blocks.is_array() || blocks.empty()) throw ConfigError("blocks", "expected a non-empty array");
    static const std::regex name_re("[A-Za-z0-9_.-]+");
    std::set<std::string> names;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto path = fmt::format("blocks[{}]", i);
        const auto& b = blocks[i];
        expect_keys(b, {"name", "kind", "params"}, path);
        BlockConfig bc;
        bc.kind = get_string(b, "kind", path);
        bc.name = get_string_or(b, "name", fmt::format("{:02}_{}", i, bc.kind), path);
        if (!std::regex_match(bc.name, name_re) || bc.name == "." || bc.name == "..")
            throw ConfigError(key_path(path, "name"), fmt::format("\"{}\" is not a valid directory name", bc.name));
        if (!names.insert(bc.name).second)
            throw ConfigError(key_path(path, "name"), fmt::format("duplicate block name \"{}\"", bc.name));
        bc.params = b.contains("params") ? b.at("params") : Json::object();
        (void)prepare_block(bc, path); // validation only
        cfg.blocks.push_back(std::move(bc));
    }
    return cfg;
}

SuiteConfig load_suite(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("config", fmt::format("cannot open {}", path.string()));
    Json j;
    try {
        j = Json::parse(f);
    } catch (const Json::parse_error& e) {
        throw ConfigError("config", fmt::format("invalid JSON in {}: {}", path.string(), e.what()));
    }
    return parse_suite(j);
}

SuiteConfig with_seed(const SuiteConfig& cfg, std::uint64_t seed) {
    SuiteConfig out = cfg;
    out.seed = seed;
    out.raw["seed"] = seed;
    return out;
}

std::string config_hash(const Json& j) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : j.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

BlockOutput run_block(const BlockConfig& block, std::uint64_t block_seed) {
    const Prepared prepared = prepare_block(block, block.name);
    try {
        auto out = prepared(block_seed);
        out.summary["name"] = block.name;
        out.summary["kind"] = block.kind;
        out.summary["seed"] = block_seed;
        return out;
    } catch (const std::exception& e) {
        throw BlockFailure(block.name, e.what());
    }
}

Json run_suite(const SuiteConfig& cfg, const fs::path& out) {
    fs::create_directories(out);
    Json blocks = Json::array();
    for (std::size_t i = 0; i < cfg.blocks.size(); ++i) {
        const auto& b = cfg.blocks[i];
        const auto seed = derive_seed(cfg.seed, i);
        auto result = run_block(b, seed);
        const fs::path dir = out / b.name;
        fs::create_directories(dir);
        write_file(dir / "trace.csv", result.trace_csv);
        write_file(dir / "summary.json", result.summary.dump(2) + "\n");
        Json files = {b.name + "/trace.csv", b.name + "/summary.json"};
        for (const auto& [name, content] : result.extra) {
            write_file(dir / name, content);
            files.push_back(b.name + "/" + name);
        }
        blocks.push_back({{"name", b.name}, {"kind", b.kind}, {"seed", seed}, {"files", files}});
    }
    Json manifest = {{"tool", "learnlab"},
                     {"version", std::string(kToolVersion)},
                     {"seed", cfg.seed},
                     {"config_hash", config_hash(cfg.raw)},
                     {"rng", std::string(kRngAlgorithm)},
                     {"blocks", blocks},
                     {"config", cfg.raw}};
    write_file(out / "report.md", render_report(out, manifest));
    write_file(out / "manifest.json", manifest.dump(2) + "\n");
    return manifest;
}

} // namespace learnlab
