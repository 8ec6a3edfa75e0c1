#include "doctest.h"

#include "learnlab/risk.hpp"

#include <cmath>
#include <set>

using namespace learnlab;

namespace {

std::vector<Instance> range(Instance a, Instance b) {
    std::vector<Instance> v;
    for (Instance x = a; x <= b; ++x) v.push_back(x);
    return v;
}

} // namespace

TEST_CASE("distribution validation") {
    CHECK_THROWS(Distribution::make({}));
    CHECK_THROWS(Distribution::make({{1, 0.5}, {1, 0.5}}));
    CHECK_THROWS(Distribution::make({{1, -0.1}, {2, 1.1}}));
    CHECK_THROWS(Distribution::make({{1, 0.5}, {2, 0.4}}));
    CHECK_NOTHROW(Distribution::make({{1, 0.5}, {2, 0.5 + 1e-14}}));
    const auto pts = range(3, 6);
    auto u = Distribution::uniform(pts);
    CHECK(u.support().size() == 4);
    CHECK(u.describe() == "uniform[3..6]");
    CHECK(Distribution::point_mass(9).support().front().second == 1.0);
}

TEST_CASE("sampling frequencies follow the masses") {
    auto d = Distribution::make({{0, 0.1}, {5, 0.6}, {9, 0.3}});
    Rng rng(4);
    std::map<Instance, int> hits;
    const int n = 60000;
    for (int i = 0; i < n; ++i) ++hits[d.sample(rng)];
    CHECK(hits.size() == 3);
    for (auto [x, p] : d.support()) {
        const double sd = std::sqrt(p * (1 - p) / n);
        CHECK(std::abs(hits[x] / double(n) - p) < 4 * sd);
    }
}

TEST_CASE("expressibility risk is the indicator of any disagreement") {
    const auto lang = LanguageSpec::multiples(3);
    const auto universe = range(0, 50);
    CHECK(risk_expr(Hypothesis::indicator(lang), lang, universe).value == 0.0);

    const std::vector<Instance> flips = {7, 30};
    auto r = risk_expr(Hypothesis::flipped(lang, flips), lang, universe);
    CHECK(r.value == 1.0);
    CHECK(r.witnesses == std::vector<std::uint64_t>{7, 30});
    // a disagreement outside the universe is invisible
    const std::vector<Instance> far = {1000};
    CHECK(risk_expr(Hypothesis::flipped(lang, far), lang, universe).value == 0.0);
    CHECK_THROWS(risk_expr(Hypothesis::indicator(lang), lang, std::vector<Instance>{}));
}

TEST_CASE("computability risk is undefined for a partial decider") {
    const auto lang = LanguageSpec::threshold(10);
    const auto universe = range(0, 30);
    auto total = risk_comp(BoundedDecider(Hypothesis::indicator(lang)), lang, universe, 100);
    REQUIRE(std::holds_alternative<RiskReport>(total));
    CHECK(std::get<RiskReport>(total).value == 0.0);

    auto partial = risk_comp(BoundedDecider(Hypothesis::indicator(lang), {4, 12, 99}), lang, universe, 100);
    REQUIRE(std::holds_alternative<TotalityViolation>(partial));
    // 99 is outside the universe, so only two points diverge
    CHECK(std::get<TotalityViolation>(partial).diverging == std::vector<Instance>{4, 12});

    const std::vector<Instance> bad = {11};
    auto wrong = risk_comp(BoundedDecider(Hypothesis::flipped(lang, bad)), lang, universe, 100);
    CHECK(std::get<RiskReport>(wrong).value == 1.0);
}

TEST_CASE("exact PAC risk sums the disagreement mass") {
    const auto lang = LanguageSpec::threshold(5);
    auto d = Distribution::make({{2, 0.25}, {4, 0.125}, {5, 0.5}, {8, 0.125}});
    // threshold 3 disagrees on 4 only; the all-zero hypothesis misses 5 and 8
    auto r = risk_pac_exact(Hypothesis::indicator(LanguageSpec::threshold(3)), lang, d);
    CHECK(r.value == 0.125);
    CHECK(r.witnesses == std::vector<std::uint64_t>{4});
    CHECK(risk_pac_exact(Hypothesis::constant(false), lang, d).value == 0.625);
    CHECK(risk_pac_exact(Hypothesis::constant(true), lang, d).value == 0.375);
}

TEST_CASE("Monte Carlo PAC risk brackets the exact value") {
    Rng rng(17);
    int inside = 0;
    const int rounds = 200;
    for (int i = 0; i < rounds; ++i) {
        const auto lang = LanguageSpec::threshold(rng.uniform_below(20));
        const auto h = Hypothesis::indicator(LanguageSpec::threshold(rng.uniform_below(20)));
        std::vector<std::pair<Instance, double>> sup;
        double total = 0;
        for (Instance x = 0; x < 20; ++x) {
            const double w = 0.05 + rng.uniform01();
            sup.push_back({x, w});
            total += w;
        }
        for (auto& [x, w] : sup) w /= total;
        auto d = Distribution::make(sup);
        const double exact = risk_pac_exact(h, lang, d).value;
        auto mc = risk_pac_mc(h, lang, d, 4000, 1000 + i);
        const double sd = std::sqrt(exact * (1 - exact) / 4000);
        if (std::abs(mc.value - exact) <= 3 * sd + 1e-12) ++inside;
        CHECK(*mc.m == 4000);
        CHECK(*mc.ci_halfwidth == doctest::Approx(kZ99 * std::sqrt(mc.value * (1 - mc.value) / 4000)));
    }
    CHECK(inside >= 0.97 * rounds);

    auto d = Distribution::uniform(range(0, 9));
    const auto h = Hypothesis::constant(true);
    const auto lang = LanguageSpec::threshold(5);
    CHECK(risk_pac_mc(h, lang, d, 500, 3).value == risk_pac_mc(h, lang, d, 500, 3).value);
    CHECK_THROWS(risk_pac_mc(h, lang, d, 0, 3));
}

TEST_CASE("generation window on thresholds") {
    // Intersection on Threshold(5): at position n the window bound is n, so
    // the generator emits below 5 until n reaches 5.
    Generator g(ConceptClass::thresholds(), GeneratorStrategy::intersection);
    const auto target = LanguageSpec::threshold(5);
    auto [gen, nov] = risk_limit_window(g, target, Schedule::fair(target), 1, 100);
    CHECK(gen.value == 1.0);
    CHECK(gen.witnesses == std::vector<std::uint64_t>{1, 2, 3, 4});
    CHECK(nov.value == 0.0);
    CHECK(risk_limit_window(g, target, Schedule::fair(target), 5, 100).first.value == 0.0);
}

TEST_CASE("simulated steps are checked independently") {
    Generator g(ConceptClass::cofinite(), GeneratorStrategy::intersection);
    const auto target = LanguageSpec::cofinite({1, 4, 6});
    const auto sched = Schedule::shuffled(target, 16, 77);
    const auto steps = simulate_generation(g, target, sched, 300);
    REQUIRE(steps.size() == 300);
    std::set<Instance> seen;
    for (const auto& s : steps) {
        seen.insert(s.delivered);
        REQUIRE(s.emitted);
        const bool valid = *s.emitted != 1 && *s.emitted != 4 && *s.emitted != 6;
        CHECK(s.valid == valid);
        CHECK(s.novel == (seen.count(*s.emitted) == 0));
    }
}

TEST_CASE("cofinite {7} with intersection needs the window to reach index 128") {
    Generator g(ConceptClass::cofinite(), GeneratorStrategy::intersection);
    const auto target = LanguageSpec::cofinite({7});
    REQUIRE(*ConceptClass::cofinite().index_of(target) == 128);
    const auto sched = Schedule::fair(target);
    // before position 128 the window holds no index excluding 7, and 7 is
    // never delivered, so the generator keeps proposing it
    CHECK(risk_limit_window(g, target, sched, 20, 400).first.value == 1.0);
    CHECK(risk_limit_window(g, target, sched, 128, 400).first.value == 0.0);
    CHECK(risk_limit_window(g, target, sched, 200, 400).first.value == 0.0);
    CHECK(risk_limit_window(g, target, sched, 128, 400).second.value == 0.0);

    Generator lci(ConceptClass::cofinite(), GeneratorStrategy::least_consistent_index);
    CHECK(risk_limit_window(lci, target, sched, 200, 400).first.value == 1.0);
}

TEST_CASE("window errors") {
    Generator g(ConceptClass::cofinite(), GeneratorStrategy::intersection);
    const auto target = LanguageSpec::cofinite({7});
    CHECK_THROWS(risk_limit_window(g, target, Schedule::fair(target), 10, 5));
    const auto fin = LanguageSpec::finite({1, 2});
    CHECK_THROWS_AS(risk_limit_window(g, fin, Schedule::fair(fin), 1, 5), FiniteLanguageError);
}

TEST_CASE("unified template rows") {
    const auto lang = LanguageSpec::threshold(4);
    TemplateParams p;
    p.universe = range(0, 20);
    p.distribution = Distribution::uniform(range(0, 9));

    auto hrows = template_report(HypothesisMechanism{Hypothesis::indicator(LanguageSpec::threshold(5))}, lang, p);
    REQUIRE(hrows.size() == 2);
    CHECK(hrows[0].kind == RiskKind::expr);
    CHECK(hrows[0].report->value == 1.0);
    CHECK(hrows[1].kind == RiskKind::pac_exact);
    CHECK(hrows[1].report->value == doctest::Approx(0.1));
    CHECK(hrows[0].property == "Expressibility");

    auto drows = template_report(DeciderMechanism{BoundedDecider(Hypothesis::indicator(lang), {3})}, lang, p);
    REQUIRE(drows.size() == 1);
    CHECK_FALSE(drows[0].report);
    CHECK(drows[0].totality->diverging == std::vector<Instance>{3});

    p.m = 200;
    p.seed = 5;
    auto erows = template_report(ErmMechanism{HypothesisClass::thresholds(range(0, 9))}, lang, p);
    REQUIRE(erows.size() == 1);
    CHECK(erows[0].report->value <= 0.1 + 1e-12);

    TemplateParams gp;
    gp.schedule = Schedule::fair(lang);
    gp.n0 = 10;
    gp.n1 = 60;
    auto grows = template_report(GeneratorMechanism{Generator(ConceptClass::thresholds(),
                                                              GeneratorStrategy::intersection)},
                                 lang, gp);
    REQUIRE(grows.size() == 2);
    CHECK(grows[0].kind == RiskKind::gen);
    CHECK(grows[0].report->value == 0.0);
    CHECK(grows[1].kind == RiskKind::nov);

    TemplateParams bad;
    bad.requested = {RiskKind::gen};
    CHECK_THROWS_AS(template_report(HypothesisMechanism{Hypothesis::constant(true)}, lang, bad),
                    IncompatibleMechanism);
}
