#include "doctest.h"

#include "learnlab/rng.hpp"

#include <algorithm>
#include <numeric>
#include <set>

using namespace learnlab;

TEST_CASE("splitmix64 matches the reference sequence") {
    // Reference generator with state 0: the first output is splitmix64(0).
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
    CHECK(splitmix64(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
}

TEST_CASE("engine is the standard mt19937_64") {
    // The standard pins the 10000th output of a default-seeded engine.
    Rng rng(5489u);
    std::uint64_t v = 0;
    for (int i = 0; i < 10000; ++i) v = rng.next();
    CHECK(v == 9981545732273789042ULL);
}

TEST_CASE("substreams are deterministic and distinct") {
    CHECK(derive_seed(42, 0) == derive_seed(42, 0));
    std::set<std::uint64_t> seeds;
    for (std::uint64_t s = 0; s < 1000; ++s) seeds.insert(derive_seed(42, s));
    CHECK(seeds.size() == 1000);
    Rng a = Rng::substream(7, 3), b = Rng::substream(7, 3);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("uniform_below stays in range and hits every residue") {
    Rng rng(1);
    CHECK_THROWS_AS(rng.uniform_below(0), std::invalid_argument);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) {
        auto v = rng.uniform_below(7);
        REQUIRE(v < 7);
        ++hits[v];
    }
    for (int h : hits) CHECK(h > 800); // expected 1000 each
    CHECK(rng.uniform_below(1) == 0);
}

TEST_CASE("uniform01 lies in [0,1) and has mean near 1/2") {
    Rng rng(2);
    double sum = 0;
    for (int i = 0; i < 20000; ++i) {
        const double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    // sd of the mean is sqrt(1/12/20000) ~ 0.002
    CHECK(sum / 20000 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("shuffle produces a permutation") {
    Rng rng(3);
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    auto w = v;
    rng.shuffle(w);
    CHECK(w != v);
    std::sort(w.begin(), w.end());
    CHECK(w == v);
}
