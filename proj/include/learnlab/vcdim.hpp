#pragma once

// Finite hypothesis classes over a declared universe, brute-force
// shattering, VC dimension search, the finite lookup-table witness family,
// and the VC sample-complexity bound.

#include "learnlab/mechanisms.hpp"
#include "learnlab/universe.hpp"

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace learnlab {

/// A hypothesis restricted to the class universe: bit j is its value on the
/// j-th smallest universe point.
using TruthTable = boost::dynamic_bitset<std::uint64_t>;

enum class HypothesisFamily { thresholds, intervals, unions_of_intervals, lookup_tables };

std::string_view to_string(HypothesisFamily f);

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class HypothesisClass {
public:
    /// Upward-closed sets: member i is the threshold at the i-th universe
    /// point, i = 0..|U| (the last one is empty on U).
    static HypothesisClass thresholds(std::vector<Instance> universe);
    /// Empty set first, then [u_a, u_b] ordered by (a, b).
    static HypothesisClass intervals(std::vector<Instance> universe);
    /// Unions of at most k runs of consecutive universe points.
    static HypothesisClass unions_of_intervals(std::size_t k, std::vector<Instance> universe);
    /// Every labeling of U (the lookup tables with default 0); |U| <= 20.
    static HypothesisClass lookup_tables(std::vector<Instance> universe);

    static constexpr std::size_t kMaxMembers = std::size_t{1} << 21;
    static constexpr std::size_t kMaxLookupUniverse = 20;

    HypothesisFamily family() const { return family_; }
    std::size_t k() const { return k_; }
    std::string name() const;
    const std::vector<Instance>& universe() const { return universe_; }
    const std::vector<TruthTable>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }

    /// Position of x in the universe; throws std::out_of_range when absent.
    std::size_t position(Instance x) const;
    bool in_universe(Instance x) const;

    bool evaluate(std::size_t member, Instance x) const;

    /// Member as a total hypothesis: a lookup table over U with default 0.
    Hypothesis hypothesis(std::size_t member) const;
    std::vector<Hypothesis> hypotheses() const;

    /// Index of the member equal to chi_lang on the universe, if any.
    std::optional<std::size_t> find(const LanguageSpec& lang) const;

    /// Least member index with the fewest sample errors. Same contract as
    /// the list overload of erm(); sample points must lie in the universe.
    std::size_t erm(std::span<const LabeledPoint> sample) const;

private:
    HypothesisClass(HypothesisFamily family, std::size_t k, std::vector<Instance> universe);
    void add(TruthTable t);

    HypothesisFamily family_;
    std::size_t k_ = 0;
    std::vector<Instance> universe_;
    std::vector<TruthTable> members_;
};

/// 1 iff every labeling of `subset` is realized by some member. |subset| <= 20.
bool shatters(const HypothesisClass& hc, std::span<const Instance> subset);

struct VcResult {
    std::size_t dimension = 0;
    bool exact = true; // false when the search stopped at the cap
    std::vector<Instance> witness; // a shattered set of that size
    std::uint64_t subsets_checked = 0;
};

/// Subsets examined per size are capped at C(|universe|, size) <= kVcSubsetBudget.
inline constexpr std::uint64_t kVcSubsetBudget = 20'000'000;
inline constexpr std::size_t kMaxVcCap = 20;

/// Largest k <= cap such that some k-subset of `universe` is shattered.
VcResult vc_dimension(const HypothesisClass& hc, std::span<const Instance> universe, std::size_t cap);

/// f_b(x_i) = b_i on S, 0 elsewhere.
Hypothesis lookup_witness(std::span<const Instance> points, const std::vector<bool>& labels);

/// ceil(C * (d + ln(1/delta)) / eps). Values within 1e-12 (relative) above an
/// integer round down to it, so exact arithmetic cases are not pushed up by
/// floating-point noise.
std::uint64_t sample_bound(std::size_t d, double eps, double delta, double C = 4.0);

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

} // namespace learnlab
