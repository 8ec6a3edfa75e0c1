#pragma once

// Instance space, concrete languages, and effectively indexed concept classes.
//
// The instance space is the naturals (std::uint64_t). Automaton languages
// read an instance through its binary expansion: 0 is "0", every other value
// is written without leading zeros.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace learnlab {

using Instance = std::uint64_t;

/// Language index. Unbounded because SUPERFINITE and COFINITE index finite
/// subsets of the naturals by their bit masks.
using Index = boost::multiprecision::cpp_int;

std::string to_bits(Instance x);
/// Inverse of to_bits. Rejects empty strings, leading zeros and overflow.
Instance from_bits(std::string_view bits);

/// Binary-expansion bijection between naturals and finite subsets of the
/// naturals: bit k of the code is set iff k belongs to the set.
std::vector<Instance> decode_finite_set(const Index& code);
Index encode_finite_set(std::span<const Instance> elements);

class Dfa {
public:
    /// transitions[2 * q + b] is the successor of state q on bit b; state 0
    /// starts. Throws std::invalid_argument unless the table is total.
    Dfa(std::uint32_t states, std::vector<std::uint32_t> transitions,
        std::vector<bool> accepting);

    std::uint32_t states() const { return states_; }
    std::uint32_t next(std::uint32_t q, unsigned bit) const { return transitions_[2 * q + bit]; }
    bool accepting(std::uint32_t q) const { return accepting_[q]; }
    const std::vector<std::uint32_t>& transitions() const { return transitions_; }
    const std::vector<bool>& accepting_states() const { return accepting_; }

    /// Runs the automaton on the binary expansion of x.
    bool accepts(Instance x) const;

    /// True iff infinitely many instances are accepted.
    bool accepts_infinitely_many() const;

    friend bool operator==(const Dfa&, const Dfa&) = default;

private:
    std::uint32_t states_;
    std::vector<std::uint32_t> transitions_;
    std::vector<bool> accepting_;
};

struct Threshold {
    Instance min = 0;
    friend bool operator==(const Threshold&, const Threshold&) = default;
};
struct Multiples {
    Instance period = 1;
    friend bool operator==(const Multiples&, const Multiples&) = default;
};
struct CoFinite {
    std::vector<Instance> excluded; // sorted, distinct
    friend bool operator==(const CoFinite&, const CoFinite&) = default;
};
struct FiniteSet {
    std::vector<Instance> elements; // sorted, distinct
    friend bool operator==(const FiniteSet&, const FiniteSet&) = default;
};
struct AllInstances {
    friend bool operator==(const AllInstances&, const AllInstances&) = default;
};
struct Lookup {
    std::map<Instance, bool> table;
    bool fallback = false;
    friend bool operator==(const Lookup&, const Lookup&) = default;
};

/// A decidable language. Construct through the factories, which enforce
/// the per-variant invariants (period >= 1, sorted duplicate-free sets).
class LanguageSpec {
public:
    using Variant = std::variant<Threshold, Multiples, CoFinite, FiniteSet, AllInstances, Dfa, Lookup>;

    static LanguageSpec threshold(Instance min);
    static LanguageSpec multiples(Instance period);
    static LanguageSpec cofinite(std::vector<Instance> excluded);
    static LanguageSpec finite(std::vector<Instance> elements);
    static LanguageSpec all();
    static LanguageSpec dfa(Dfa automaton);
    static LanguageSpec lookup(std::map<Instance, bool> table, bool fallback);

    const Variant& variant() const { return v_; }
    template <typename T>
    const T* as() const { return std::get_if<T>(&v_); }

    bool contains(Instance x) const;

    /// Steps one membership query consumes; bounded for every variant.
    std::uint64_t evaluation_steps(Instance x) const;

    bool is_finite() const;

    /// Least member >= from, searching at most `scan_limit` candidates for
    /// automaton and lookup languages. nullopt when none is found.
    std::optional<Instance> next_member(Instance from, std::uint64_t scan_limit = kDefaultScanLimit) const;

    std::string describe() const;

    friend bool operator==(const LanguageSpec&, const LanguageSpec&) = default;

    static constexpr std::uint64_t kDefaultScanLimit = std::uint64_t{1} << 22;

private:
    explicit LanguageSpec(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

/// Running summary of a finite set of observed instances. Keeps maximal runs
/// of consecutive values so "least unseen value >= x" is logarithmic.
class Sample {
public:
    Sample() = default;
    explicit Sample(std::span<const Instance> xs) {
        for (Instance x : xs) insert(x);
    }

    void insert(Instance x);
    bool contains(Instance x) const;
    bool empty() const { return distinct_ == 0; }
    std::uint64_t distinct() const { return distinct_; }
    /// Observations including repeats.
    std::uint64_t observations() const { return observations_; }

    Instance min() const { return runs_.begin()->first; }
    Instance max() const { return std::prev(runs_.end())->second; }
    /// gcd of all distinct elements; 0 when every element is 0 or empty.
    Instance gcd() const { return gcd_; }
    /// Bit k set iff k < 64 was observed.
    std::uint64_t low_mask() const { return low_mask_; }
    bool all_below_64() const { return empty() || max() < 64; }

    /// Least value >= from that was not observed.
    Instance least_unseen_from(Instance from) const;

    std::vector<Instance> elements() const;
    /// Runs [first, last] of consecutive observed values.
    const std::map<Instance, Instance>& runs() const { return runs_; }

private:
    std::map<Instance, Instance> runs_;
    std::uint64_t distinct_ = 0;
    std::uint64_t observations_ = 0;
    Instance gcd_ = 0;
    std::uint64_t low_mask_ = 0;
};

bool contains(const LanguageSpec& lang, Instance x);

/// k-th smallest member (k from 0). Throws std::out_of_range when the
/// language has at most k members, or when a scanned language has no member
/// within the scan limit.
Instance enumerate_element(const LanguageSpec& lang, std::uint64_t k);

/// sample is a subset of lang. The empty sample is consistent with everything.
bool is_consistent(const LanguageSpec& lang, const Sample& sample);
bool is_consistent(const LanguageSpec& lang, std::span<const Instance> sample);

enum class ClassKind { thresholds, multiples, cofinite, superfinite, regular_small };

std::string_view to_string(ClassKind kind);

/// Effectively indexed family {L_i}. Canonical indexings:
///   THRESHOLDS     i -> Threshold(i)
///   MULTIPLES      i -> Multiples(i + 1)
///   COFINITE       i -> CoFinite(decode(i)); index 0 is All
///   SUPERFINITE    0 -> All, i + 1 -> FiniteSet(decode(i))
///   REGULAR_SMALL  i -> i-th automaton of the canonical enumeration
class ConceptClass {
public:
    static ConceptClass thresholds();
    static ConceptClass multiples();
    static ConceptClass cofinite();
    static ConceptClass superfinite();
    /// All total automata over {0,1} with at most max_states states (1..3),
    /// deduplicated by behaviour on instances of at most kRegularEquivBits bits.
    static ConceptClass regular_small(std::uint32_t max_states);

    static constexpr unsigned kRegularEquivBits = 12;

    ClassKind kind() const { return kind_; }
    std::uint32_t max_states() const { return max_states_; }
    std::string name() const;

    /// Number of indices, or nullopt for the classes indexed by all of N.
    std::optional<Index> size() const;
    bool in_range(const Index& i) const;

    LanguageSpec language(const Index& i) const;
    /// Inverse of language(); compares languages extensionally.
    std::optional<Index> index_of(const LanguageSpec& lang) const;

    /// The uniform decision procedure (i, x) -> chi_{L_i}(x). Works from the
    /// index directly, without materializing L_i.
    bool member(const Index& i, Instance x) const;

    /// Fast consistency test of L_i against a sample, for i in machine range.
    bool consistent(std::uint64_t i, const Sample& sample) const;

    bool all_languages_infinite() const;

    /// Languages whose intersection is the intersection of every L_j with
    /// j <= n_bound that is consistent with the sample. Closed forms collapse
    /// to one language; empty when no index in the window is consistent.
    std::vector<LanguageSpec> window_intersection(const Sample& sample, std::uint64_t n_bound) const;

    friend bool operator==(const ConceptClass& a, const ConceptClass& b) {
        return a.kind_ == b.kind_ && a.max_states_ == b.max_states_;
    }

private:
    struct RegularTable;

    ConceptClass(ClassKind kind, std::uint32_t max_states, std::shared_ptr<const RegularTable> regular)
        : kind_(kind), max_states_(max_states), regular_(std::move(regular)) {}

    ClassKind kind_;
    std::uint32_t max_states_ = 0;
    std::shared_ptr<const RegularTable> regular_;
};

/// Thrown by index_to_language for indices outside a finite class.
class IndexOutOfRange : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

inline LanguageSpec index_to_language(const ConceptClass& cls, const Index& i) { return cls.language(i); }
inline std::optional<Index> language_to_index(const ConceptClass& cls, const LanguageSpec& lang) {
    return cls.index_of(lang);
}

std::string index_to_string(const Index& i);

} // namespace learnlab
