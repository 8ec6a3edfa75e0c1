// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are fixed here, not read from a config.

#include "learnlab/arena.hpp"
#include "learnlab/rng.hpp"
#include "learnlab/suite.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <sys/wait.h>

using namespace learnlab;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<Instance> range(Instance a, Instance b) {
    std::vector<Instance> v;
    for (Instance x = a; x <= b; ++x) v.push_back(x);
    return v;
}

// --- 1 -----------------------------------------------------------------------

Verdict vc_exactness() {
    const auto u = range(0, 11);
    struct Case {
        const char* name;
        HypothesisClass hc;
        std::size_t want;
    };
    std::vector<Case> cases = {{"thresholds", HypothesisClass::thresholds(u), 1},
                               {"intervals", HypothesisClass::intervals(u), 2},
                               {"unions2", HypothesisClass::unions_of_intervals(2, u), 4}};
    Verdict v{true, ""};
    double slowest = 0;
    for (auto& c : cases) {
        const auto t0 = Clock::now();
        const auto r = vc_dimension(c.hc, u, u.size());
        const double s = seconds_since(t0);
        slowest = std::max(slowest, s);
        v.detail += fmt::format("{}={} ", c.name, r.dimension);
        if (r.dimension != c.want || !r.exact || s >= 5.0) v.pass = false;
    }
    v.detail += fmt::format("on |U|={}, slowest {:.3f} s (limit 5 s)", u.size(), slowest);
    return v;
}

// --- 2 -----------------------------------------------------------------------

Verdict lookup_shattering() {
    std::size_t subsets = 0, shattered = 0;
    for (std::uint32_t mask = 0; mask < (1u << 10); ++mask) {
        std::vector<Instance> sub;
        for (Instance j = 0; j < 10; ++j)
            if (mask >> j & 1) sub.push_back(j);
        ++subsets;
        if (shatters(HypothesisClass::lookup_tables(sub), sub)) ++shattered;
    }
    std::size_t cap_runs = 0, cap_ok = 0;
    for (std::size_t c : {4u, 6u, 8u}) {
        for (std::size_t n = c; n <= 10; ++n) {
            const auto u = range(0, n - 1);
            const auto r = vc_dimension(HypothesisClass::lookup_tables(u), u, c);
            ++cap_runs;
            if (r.dimension == c && !r.exact) ++cap_ok;
        }
    }
    return {shattered == subsets && cap_ok == cap_runs,
            fmt::format("{}/{} subsets of {{0..9}} shattered; cap returned c with at-cap flag in {}/{} runs "
                        "(c in {{4,6,8}}, |U| = c..10)",
                        shattered, subsets, cap_ok, cap_runs)};
}

// --- 3 -----------------------------------------------------------------------

Verdict pac_bound() {
    const double eps = 0.1, delta = 0.05;
    const std::uint64_t trials = 500;
    const auto u = range(0, 99);
    const auto t0 = Clock::now();

    const auto thr = HypothesisClass::thresholds(u);
    const auto thr_target = LanguageSpec::threshold(37);
    const std::vector<Distribution> thr_d = {
        Distribution::uniform(u), Distribution::uniform(range(30, 44)),
        Distribution::make({{36, 0.45}, {37, 0.45}, {0, 0.05}, {99, 0.05}})};
    const auto m_thr = sample_bound(1, eps, delta);
    const auto s_thr = pac_experiment(thr, thr_target, thr_d, eps, delta, m_thr, trials, 11);

    const auto iv = HypothesisClass::intervals(u);
    const auto iv_target = LanguageSpec::finite(range(20, 40));
    const std::vector<Distribution> iv_d = {
        Distribution::uniform(u), Distribution::uniform(range(15, 45)),
        Distribution::make({{19, 0.225}, {20, 0.225}, {40, 0.225}, {41, 0.225}, {0, 0.05}, {99, 0.05}})};
    const auto m_iv = sample_bound(2, eps, delta);
    const auto s_iv = pac_experiment(iv, iv_target, iv_d, eps, delta, m_iv, trials, 12);
    const double s = seconds_since(t0);

    bool ok = m_thr == 160 && s < 60.0;
    std::string rates;
    for (const auto* sum : {&s_thr, &s_iv}) {
        for (const auto& d : sum->per_distribution) {
            ok = ok && d.trials >= 500 && d.failure_rate <= delta;
            rates += fmt::format("{:.3f} ", d.failure_rate);
        }
        ok = ok && sum->per_distribution.size() >= 3;
    }
    return {ok, fmt::format("m={} (thresholds), m={} (intervals), {} trials x 3 distributions each; failure rates "
                            "{}(limit {}); {:.2f} s (limit 60 s)",
                            m_thr, m_iv, trials, rates, delta, s)};
}

// --- 4 -----------------------------------------------------------------------

Verdict scaling() {
    const auto u = range(0, 99);
    const auto hc = HypothesisClass::thresholds(u);
    const auto target = LanguageSpec::threshold(37);
    const auto dist = Distribution::uniform(u);
    const std::vector<double> eps = {0.2, 0.1, 0.05, 0.025};
    std::vector<double> inv, med;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const auto ms = samples_to_reach(hc, target, dist, eps[i], 201, 1'000'000, derive_seed(4, 1000 + i));
        inv.push_back(1.0 / eps[i]);
        med.push_back(median(ms));
    }
    const double slope = loglog_slope(inv, med);
    return {std::abs(slope - 1.0) <= 0.25,
            fmt::format("median m {} over eps {}; log-log slope {:.3f} (target 1.0 +/- 0.25)", fmt::join(med, "/"),
                        fmt::join(eps, "/"), slope)};
}

// --- 5 -----------------------------------------------------------------------

Verdict coin_anchor() {
    const auto m_star = smallest_discriminating_m(0.49, 0.51, 0.95, 100'000);
    Level2Params p;
    const auto l2 = run_level2(p, 5);
    const double exact = coin_discrimination_probability(0.49, 0.51, 10'000);
    const double sim = l2.metrics.at("simulated");
    const double sigma = std::sqrt(exact * (1 - exact) / static_cast<double>(p.trials));
    const bool in_range = m_star && *m_star >= 2000 && *m_star <= 20000;
    const bool agree = std::abs(sim - exact) <= 3 * sigma;
    return {in_range && agree,
            fmt::format("smallest m for 95%: {} (range [2000, 20000]); at m=10^4 exact {:.4f}, simulated {:.4f} over "
                        "{} trials, |diff| {:.4f} vs 3 sigma {:.4f}",
                        m_star ? std::to_string(*m_star) : "none", exact, sim, p.trials, std::abs(sim - exact),
                        3 * sigma)};
}

// --- 6 -----------------------------------------------------------------------

Verdict adversary() {
    const auto sup = ConceptClass::superfinite();
    struct Named {
        const char* name;
        std::function<Learner()> make;
    };
    const std::vector<Named> learners = {
        {"least_within_prefix", [&] { return Learner(sup, LearnerStrategy::least_within_prefix); }},
        {"greatest", [&] { return Learner(sup, LearnerStrategy::greatest); }},
        {"echo_sample", [&] { return Learner(sup, LearnerStrategy::echo_sample); }},
        {"constant_all", [&] { return Learner(sup, LearnerStrategy::constant, Index(0)); }},
    };
    std::size_t runs = 0, defeated = 0;
    std::string failures;
    for (const auto& l : learners) {
        for (std::uint64_t h : {100u, 500u, 1000u}) {
            ++runs;
            try {
                const auto out = adversarial_superfinite_run(l.make(), h);
                const auto target = sup.index_of(out.committed_target);
                const auto& last = out.trace.steps.back();
                const bool wrong = !target || !last.conjecture || *last.conjecture != *target;
                bool late_change = false;
                for (const auto& s : out.trace.steps)
                    if (s.step > h - h / 5 && s.mind_change) late_change = true;
                if (out.trace.steps.size() == h && (wrong || late_change)) ++defeated;
                else failures += fmt::format(" {}@{}", l.name, h);
            } catch (const std::exception& e) {
                failures += fmt::format(" {}@{} threw: {}", l.name, h, e.what());
            }
        }
    }
    return {defeated == runs, fmt::format("{}/{} runs defeated ({} learners x H in {{100,500,1000}}){}", defeated, runs,
                                          learners.size(), failures.empty() ? "" : "; not defeated:" + failures)};
}

// --- 7 -----------------------------------------------------------------------

Verdict identification() {
    struct Case {
        ConceptClass cls;
        LanguageSpec target;
        Instance param;
    };
    const std::vector<Case> cases = {
        {ConceptClass::thresholds(), LanguageSpec::threshold(0), 0},
        {ConceptClass::thresholds(), LanguageSpec::threshold(7), 7},
        {ConceptClass::thresholds(), LanguageSpec::threshold(40), 40},
        {ConceptClass::multiples(), LanguageSpec::multiples(1), 1},
        {ConceptClass::multiples(), LanguageSpec::multiples(6), 6},
        {ConceptClass::multiples(), LanguageSpec::multiples(15), 15},
    };
    const std::uint64_t h = 500;
    std::size_t runs = 0, ok = 0;
    std::string failures;
    for (const auto& c : cases) {
        std::vector<Schedule> schedules = {Schedule::fair(c.target)};
        for (std::uint64_t s = 0; s < 10; ++s) schedules.push_back(Schedule::shuffled(c.target, 32, 500 + s));
        for (const auto& sched : schedules) {
            ++runs;
            // determining position: first delivery of the minimum, or the
            // first prefix whose gcd is the period
            std::uint64_t determining = 0, g = 0;
            for (std::uint64_t p = 1; p <= h && !determining; ++p) {
                const Instance x = sched.at(p);
                if (c.cls.kind() == ClassKind::thresholds) {
                    if (x == c.param) determining = p;
                } else {
                    g = std::gcd(g, x);
                    if (g == c.param) determining = p;
                }
            }
            const auto tr = run_identification(c.cls, c.target, Learner(c.cls, LearnerStrategy::greatest), sched, h,
                                               h / 5);
            const auto twice = run_identification(c.cls, c.target, Learner(c.cls, LearnerStrategy::greatest), sched,
                                                  2 * h, 2 * h / 5);
            std::uint64_t after_lock = 0;
            for (const auto& st : twice.steps)
                if (st.mind_change && st.step > tr.summary.lock_step) ++after_lock;
            const bool good = determining && tr.summary.converged_correct && tr.summary.lock_step <= determining &&
                              twice.summary.converged_correct && after_lock == 0;
            if (good) ++ok;
            else failures += fmt::format(" {}/{}", c.target.describe(), sched.describe());
        }
    }
    return {ok == runs, fmt::format("{}/{} runs converged-correct with lock <= determining position and no mind change "
                                    "after lock at 2H (H={}, fair + 10 shuffled, {} targets){}",
                                    ok, runs, h, cases.size(), failures.empty() ? "" : "; failed:" + failures)};
}

// --- 8 -----------------------------------------------------------------------

Verdict separation() {
    const auto cls = ConceptClass::cofinite();
    const std::vector<std::vector<Instance>> excluded = {{3}, {1, 4}, {7}, {2, 9}, {10}, {0, 13}};
    const std::uint64_t h = 10'000;
    std::size_t runs = 0, clean = 0, never_named = 0, lci_persistent = 0;
    std::string failures;
    for (const auto& ex : excluded) {
        const auto target = LanguageSpec::cofinite(ex);
        const auto idx = *cls.index_of(target);
        const auto n_idx = static_cast<std::uint64_t>(idx);
        std::vector<Schedule> schedules = {Schedule::fair(target), Schedule::padded(target, 50)};
        for (std::uint64_t s = 0; s < 3; ++s) schedules.push_back(Schedule::shuffled(target, 64, 800 + s));
        for (const auto& sched : schedules) {
            ++runs;
            const auto gen =
                run_generation(cls, target, Generator(cls, GeneratorStrategy::intersection), sched, h, n_idx);
            bool ok = true;
            for (const auto& st : gen.steps)
                if (st.step >= n_idx && (!st.valid || !st.novel)) ok = false;
            if (ok) ++clean;
            else failures += fmt::format(" gen {}/{}", target.describe(), sched.describe());

            const auto id = run_identification(cls, target, Learner(cls, LearnerStrategy::least_within_prefix), sched,
                                               h, h / 5);
            bool named = false;
            for (const auto& st : id.steps)
                if (st.conjecture && *st.conjecture == idx) named = true;
            if (!named) ++never_named;
            else failures += fmt::format(" id {}/{}", target.describe(), sched.describe());

            const auto lci = run_generation(cls, target, Generator(cls, GeneratorStrategy::least_consistent_index),
                                            sched, h, h / 2);
            if (!lci.summary.window_clean) ++lci_persistent;
        }
    }
    return {clean == runs && never_named == runs && lci_persistent >= 1,
            fmt::format("{} targets x {} schedules at H={}: intersection clean for n >= index in {}/{}; identifier "
                        "never named the target in {}/{}; least-consistent-index violating in [H/2, H] on {} "
                        "configuration(s){}",
                        excluded.size(), runs / excluded.size(), h, clean, runs, never_named, runs, lci_persistent,
                        failures.empty() ? "" : "; failed:" + failures)};
}

// --- 9 -----------------------------------------------------------------------

Verdict level0() {
    Level0Params p;
    const auto r = run_level0(p, 9);
    const double sigma = std::sqrt(0.25 / static_cast<double>(p.trials));
    bool ok = p.trials >= 10'000;
    std::string accs;
    for (auto d : p.distinguishers) {
        const double acc = r.metrics.at("accuracy." + std::string(to_string(d)));
        ok = ok && std::abs(acc - 0.5) <= 3 * sigma;
        accs += fmt::format("{}={:.4f} ", to_string(d), acc);
    }
    return {ok, fmt::format("{}over {} trials; band 0.5 +/- {:.4f}", accs, p.trials, 3 * sigma)};
}

// --- 10 ----------------------------------------------------------------------

Verdict level1() {
    Level1Params p;
    const auto r = run_level1(p, 10);
    // recompute the quiet runs from the reflexive trace itself
    const ExperimentTrace* reflexive = nullptr;
    for (const auto& t : r.traces)
        if (t.kind == TraceKind::reflexive) reflexive = &t;
    std::uint64_t windows = 0, windows_with_change = 0;
    if (reflexive) {
        const auto& steps = reflexive->steps;
        for (std::size_t start = 0; start + 50 <= steps.size(); ++start) {
            ++windows;
            bool any = false;
            for (std::size_t i = start; i < start + 50 && !any; ++i) any = steps[i].mind_change;
            if (any) ++windows_with_change;
        }
    }
    const double locked = r.metrics.at("control.locked_fraction");
    const bool ok = reflexive && reflexive->steps.size() == p.horizon && windows > 0 &&
                    windows_with_change == windows && locked >= 0.95 && p.control_seeds >= 100 && p.lock_by <= 500;
    return {ok, fmt::format("reflexive run: {}/{} 50-step windows contain a mind change (H={}); control locked by "
                            "step {} in {:.0f}% of {} seeds (need 95%)",
                            windows_with_change, windows, p.horizon, p.lock_by, 100 * locked, p.control_seeds)};
}

// --- 11 ----------------------------------------------------------------------

LanguageSpec random_language(Rng& rng) {
    switch (rng.uniform_below(5)) {
    case 0: return LanguageSpec::threshold(rng.uniform_below(40));
    case 1: return LanguageSpec::multiples(1 + rng.uniform_below(6));
    case 2: {
        std::set<Instance> ex;
        for (int i = 0; i < 3; ++i) ex.insert(rng.uniform_below(40));
        return LanguageSpec::cofinite({ex.begin(), ex.end()});
    }
    case 3: {
        std::set<Instance> el;
        for (int i = 0; i < 6; ++i) el.insert(rng.uniform_below(40));
        return LanguageSpec::finite({el.begin(), el.end()});
    }
    default: {
        // random 3-state automaton; state 0 starts
        std::vector<std::uint32_t> delta(6);
        for (auto& d : delta) d = static_cast<std::uint32_t>(rng.uniform_below(3));
        std::vector<bool> acc(3);
        for (std::size_t i = 0; i < 3; ++i) acc[i] = rng.uniform_below(2) == 1;
        return LanguageSpec::dfa(Dfa(3, delta, acc));
    }
    }
}

Verdict risk_oracles() {
    Rng rng(derive_seed(11, 0));
    const std::uint64_t m = 10'000;
    std::size_t inside = 0, triples = 1000;
    for (std::size_t i = 0; i < triples; ++i) {
        const auto lang = random_language(rng);
        std::vector<Instance> flips;
        for (int k = 0; k < 3; ++k) flips.push_back(rng.uniform_below(40));
        std::sort(flips.begin(), flips.end());
        flips.erase(std::unique(flips.begin(), flips.end()), flips.end());
        const auto h = Hypothesis::flipped(random_language(rng), flips);
        const auto n = 2 + rng.uniform_below(30);
        std::vector<std::pair<Instance, double>> sup;
        double total = 0;
        Instance x = rng.uniform_below(5);
        for (std::uint64_t j = 0; j < n; ++j) {
            const double w = 0.1 + rng.uniform01();
            sup.push_back({x, w});
            total += w;
            x += 1 + rng.uniform_below(3);
        }
        for (auto& [xx, w] : sup) w /= total;
        const auto dist = Distribution::make(sup);
        const double exact = risk_pac_exact(h, lang, dist).value;
        const auto mc = risk_pac_mc(h, lang, dist, m, derive_seed(11, 1 + i));
        if (std::abs(mc.value - exact) <= 3 * *mc.ci_halfwidth + 1e-15) ++inside;
    }

    std::size_t equal = 0, pairs = 100;
    const auto universe = range(0, 199);
    for (std::size_t i = 0; i < pairs; ++i) {
        const auto lang = random_language(rng);
        std::vector<Instance> flips = {rng.uniform_below(200)};
        const auto h = rng.uniform_below(2) ? Hypothesis::indicator(random_language(rng))
                                            : Hypothesis::flipped(lang, flips);
        const auto expr = risk_expr(h, lang, universe);
        const auto comp = risk_comp(BoundedDecider(h), lang, universe, 1'000'000);
        if (const auto* r = std::get_if<RiskReport>(&comp);
            r && r->value == expr.value && r->witnesses == expr.witnesses)
            ++equal;
    }
    const double frac = static_cast<double>(inside) / static_cast<double>(triples);
    return {frac >= 0.99 && equal == pairs,
            fmt::format("MC within 3 half-widths of exact in {}/{} triples ({:.1f}%, need 99%) at m={}; comp == expr on "
                        "{}/{} pairs",
                        inside, triples, 100 * frac, m, equal, pairs)};
}

// --- 12 ----------------------------------------------------------------------

std::string file_hash(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : ss.str()) h = (h ^ c) * 0x100000001b3ULL;
    return fmt::format("{:016x}", h);
}

std::map<std::string, std::string> tree_hashes(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = file_hash(e.path());
    return out;
}

Verdict determinism() {
    const fs::path config = fs::path(LEARNLAB_SOURCE_DIR) / "configs" / "full_suite.json";
    const auto base = fs::temp_directory_path() / fmt::format("learnlab_acceptance_{}", ::getpid());
    fs::remove_all(base);
    std::vector<std::map<std::string, std::string>> trees;
    for (const char* run : {"a", "b"}) {
        const auto out = base / run;
        const auto cmd = fmt::format("\"{}\" run --config \"{}\" --out \"{}\" > /dev/null 2>&1", LEARNLAB_CLI_PATH,
                                     config.string(), out.string());
        const int status = std::system(cmd.c_str());
        if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0)
            return {false, fmt::format("run {} exited abnormally (status {})", run, status)};
        trees.push_back(tree_hashes(out));
    }
    fs::remove_all(base);
    std::size_t differing = 0;
    for (const auto& [name, h] : trees[0]) {
        auto it = trees[1].find(name);
        if (it == trees[1].end() || it->second != h) ++differing;
    }
    const bool same = trees[0].size() == trees[1].size() && differing == 0;
    return {same && !trees[0].empty(),
            fmt::format("{} files per run, {} differing; manifest hash {}", trees[0].size(), differing,
                        trees[0].count("manifest.json") ? trees[0].at("manifest.json") : "missing")};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"VC exactness", vc_exactness},
        {"lookup tables shatter every finite subset", lookup_shattering},
        {"PAC bound validation", pac_bound},
        {"sample-complexity scaling", scaling},
        {"coin discrimination anchor", coin_anchor},
        {"superfinite adversary", adversary},
        {"identification success", identification},
        {"generation/identification separation", separation},
        {"level 0 chance accuracy", level0},
        {"level 1 reflexive instability", level1},
        {"risk oracle agreement", risk_oracles},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = Clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, fmt::format("threw: {}", e.what())};
        }
        if (!v.pass) ++failed;
        fmt::print("{} [{:2}] {}: {} ({:.2f} s)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail,
                   seconds_since(t0));
        std::fflush(stdout);
    }
    fmt::print("{}/{} criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
