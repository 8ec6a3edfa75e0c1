#include "doctest.h"

#include "learnlab/mechanisms.hpp"
#include "learnlab/rng.hpp"

#include <numeric>
#include <set>

using namespace learnlab;

namespace {

bool in_cofinite_code(std::uint64_t code, Instance x) { return x >= 64 || !(code >> x & 1); }

// Least unseen x that lies in every language of the window, found by direct
// scanning. `member(j, x)` is the naive membership of the j-th language.
template <class Member>
std::optional<Instance> brute_generate(const std::set<Instance>& prefix, std::uint64_t n_bound, bool lci,
                                       Member member, Instance scan_limit) {
    std::vector<std::uint64_t> window;
    for (std::uint64_t j = 0; j <= n_bound; ++j) {
        bool ok = true;
        for (Instance p : prefix) ok = ok && member(j, p);
        if (ok) {
            window.push_back(j);
            if (lci) break;
        }
    }
    if (window.empty()) return std::nullopt;
    for (Instance x = 0; x < scan_limit; ++x) {
        if (prefix.count(x)) continue;
        bool all = true;
        for (auto j : window) all = all && member(j, x);
        if (all) return x;
    }
    return std::nullopt;
}

} // namespace

TEST_CASE("hypotheses with overrides") {
    const std::vector<Instance> pts = {2, 5};
    const auto h = Hypothesis::flipped(LanguageSpec::threshold(4), pts);
    for (Instance x = 0; x < 20; ++x) {
        const bool base = x >= 4;
        CHECK(h(x) == ((x == 2 || x == 5) ? !base : base));
    }
    CHECK(Hypothesis::constant(true)(12345));
    CHECK_FALSE(Hypothesis::constant(false)(0));
    CHECK(h.overrides().size() == 2);
}

TEST_CASE("bounded decider diverges exactly on its set or when out of fuel") {
    BoundedDecider total(Hypothesis::indicator(LanguageSpec::multiples(3)));
    CHECK(total.is_total());
    CHECK(decide_bounded(total, 9, 1000) == Decision::one);
    CHECK(decide_bounded(total, 10, 1000) == Decision::zero);

    BoundedDecider partial(Hypothesis::indicator(LanguageSpec::multiples(3)), {4, 6});
    CHECK_FALSE(partial.is_total());
    for (Instance x = 0; x < 30; ++x) {
        const auto d = decide_bounded(partial, x, 1000);
        if (x == 4 || x == 6) CHECK(d == Decision::diverged);
        else CHECK(d == (x % 3 == 0 ? Decision::one : Decision::zero));
    }
    CHECK_THROWS(decide_bounded(total, 9, 0));
    // a DFA reads one bit per step, so 1023 needs ten
    Dfa all_accept(1, {0, 0}, {true});
    BoundedDecider slow(Hypothesis::indicator(LanguageSpec::dfa(all_accept)));
    CHECK(decide_bounded(slow, 1023, 10) == Decision::one);
    CHECK(decide_bounded(slow, 1023, 9) == Decision::diverged);
    CHECK(to_string(Decision::diverged) == "diverged");
}

TEST_CASE("erm picks the least index with the fewest errors") {
    Rng rng(21);
    std::vector<Hypothesis> hs;
    for (Instance m = 0; m < 12; ++m) hs.push_back(Hypothesis::indicator(LanguageSpec::threshold(m)));
    for (Instance p = 1; p < 6; ++p) hs.push_back(Hypothesis::indicator(LanguageSpec::multiples(p)));

    for (int round = 0; round < 200; ++round) {
        std::vector<LabeledPoint> sample;
        const auto n = rng.uniform_below(15);
        for (std::uint64_t i = 0; i < n; ++i) sample.push_back({rng.uniform_below(15), rng.uniform_below(2) == 1});

        std::size_t want = 0, best = SIZE_MAX;
        for (std::size_t i = 0; i < hs.size(); ++i) {
            std::size_t errs = 0;
            for (auto& p : sample) errs += hs[i](p.x) != p.label;
            if (errs < best) best = errs, want = i;
        }
        REQUIRE(erm(hs, sample) == want);
        REQUIRE(empirical_errors(hs[want], sample) == best);
    }
    CHECK(erm(hs, std::span<const LabeledPoint>{}) == 0);
    CHECK_THROWS(erm(std::span<const Hypothesis>{}, std::span<const LabeledPoint>{}));
}

TEST_CASE("greatest learner follows min and gcd") {
    Rng rng(8);
    for (int round = 0; round < 50; ++round) {
        Learner thr(ConceptClass::thresholds(), LearnerStrategy::greatest);
        Learner mul(ConceptClass::multiples(), LearnerStrategy::greatest);
        const Instance period = 1 + rng.uniform_below(9);
        Instance lo = UINT64_MAX;
        std::vector<Instance> seen;
        for (int t = 0; t < 12; ++t) {
            const Instance x = 3 + rng.uniform_below(200);
            lo = std::min(lo, x);
            REQUIRE(*thr.observe(x) == Index(lo));

            const Instance y = period * (1 + rng.uniform_below(30));
            seen.push_back(y);
            // largest p dividing every observation, by trial division
            Instance p = *std::max_element(seen.begin(), seen.end());
            while (!std::all_of(seen.begin(), seen.end(), [&](Instance v) { return v % p == 0; })) --p;
            REQUIRE(*mul.observe(y) == Index(p - 1));
        }
    }
}

TEST_CASE("least-within-prefix learner searches only {0..t}") {
    // MULTIPLES: index i is period i+1, so the least consistent index is 0
    Learner mul(ConceptClass::multiples(), LearnerStrategy::least_within_prefix);
    CHECK(*mul.observe(6) == 0);

    // SUPERFINITE: All (index 0) is consistent with anything
    Learner sup(ConceptClass::superfinite(), LearnerStrategy::least_within_prefix);
    for (Instance x : {5ull, 1ull, 9ull}) CHECK(*sup.observe(x) == 0);
    CHECK(sup.mind_changes() == 0);

    // COFINITE: index 0 is All; always consistent
    Learner cof(ConceptClass::cofinite(), LearnerStrategy::least_within_prefix);
    CHECK(*cof.observe(0) == 0);
}

TEST_CASE("mind changes count conjecture switches") {
    Learner thr(ConceptClass::thresholds(), LearnerStrategy::greatest);
    for (Instance x : {5ull, 3ull, 7ull, 1ull, 1ull}) thr.observe(x);
    CHECK(thr.mind_changes() == 2); // 5 -> 3 -> 1
    CHECK(thr.observations() == 5);
}

TEST_CASE("echo and constant learners") {
    Learner echo(ConceptClass::superfinite(), LearnerStrategy::echo_sample);
    echo.observe(0);
    auto c = echo.observe(2);
    CHECK(*c == Index(6)); // FiniteSet({0,2}) has code 5, index 6
    CHECK(ConceptClass::superfinite().language(*c) == LanguageSpec::finite({0, 2}));
    CHECK_THROWS(Learner(ConceptClass::thresholds(), LearnerStrategy::echo_sample));

    Learner k(ConceptClass::multiples(), LearnerStrategy::constant, Index(4));
    CHECK(*k.observe(3) == 4);
    CHECK(*k.observe(8) == 4);
    CHECK(k.mind_changes() == 0);
}

TEST_CASE("generators agree with a brute-force window scan") {
    Rng rng(99);
    auto cof_member = [](std::uint64_t j, Instance x) { return in_cofinite_code(j, x); };
    auto mul_member = [](std::uint64_t j, Instance x) { return x % (j + 1) == 0; };

    for (int round = 0; round < 150; ++round) {
        const bool lci = round % 2;
        const auto strat = lci ? GeneratorStrategy::least_consistent_index : GeneratorStrategy::intersection;
        const std::uint64_t n_bound = 1 + rng.uniform_below(300);

        std::set<Instance> prefix;
        const auto n = rng.uniform_below(12);
        for (std::uint64_t i = 0; i < n; ++i) prefix.insert(rng.uniform_below(20));
        std::vector<Instance> pv(prefix.begin(), prefix.end());
        {
            Generator g(ConceptClass::cofinite(), strat);
            auto want = brute_generate(prefix, n_bound, lci, cof_member, 400);
            REQUIRE(want);
            CHECK(generate_next(g, pv, n_bound) == *want);
        }

        std::set<Instance> mprefix;
        const Instance base = 1 + rng.uniform_below(6);
        for (std::uint64_t i = 0; i < n; ++i) mprefix.insert(base * rng.uniform_below(10));
        std::vector<Instance> mv(mprefix.begin(), mprefix.end());
        {
            Generator g(ConceptClass::multiples(), strat);
            auto want = brute_generate(mprefix, n_bound, lci, mul_member, 1'000'000);
            REQUIRE(want);
            CHECK(generate_next(g, mv, n_bound) == *want);
        }
    }
}

TEST_CASE("generator exhaustion and argument checks") {
    // window {All, FiniteSet({0})} leaves nothing unseen
    Generator g(ConceptClass::superfinite(), GeneratorStrategy::intersection);
    const std::vector<Instance> zero = {0};
    CHECK_THROWS_AS(generate_next(g, zero, 2), GenerationExhausted);
    CHECK(generate_next(g, zero, 1) == 1);
    CHECK_THROWS_AS(generate_next(g, zero, 0), std::invalid_argument);

    Generator lci(ConceptClass::superfinite(), GeneratorStrategy::least_consistent_index);
    CHECK(generate_next(lci, zero, 5) == 1);
}
