#include "learnlab/universe.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <bit>
#include <iterator>
#include <mutex>
#include <numeric>

namespace learnlab {

namespace mp = boost::multiprecision;

std::string to_bits(Instance x) {
    if (x == 0) return "0";
    std::string out;
    for (int b = 63 - std::countl_zero(x); b >= 0; --b) out.push_back(((x >> b) & 1U) ? '1' : '0');
    return out;
}

Instance from_bits(std::string_view bits) {
    if (bits.empty()) throw std::invalid_argument("from_bits: empty string");
    if (bits.size() > 1 && bits.front() == '0') throw std::invalid_argument("from_bits: leading zero");
    if (bits.size() > 64) throw std::out_of_range("from_bits: more than 64 bits");
    Instance x = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw std::invalid_argument(fmt::format("from_bits: bad digit '{}'", c));
        x = (x << 1) | static_cast<Instance>(c - '0');
    }
    return x;
}

std::vector<Instance> decode_finite_set(const Index& code) {
    if (code < 0) throw std::invalid_argument("decode_finite_set: negative code");
    std::vector<Instance> out;
    if (code == 0) return out;
    const auto top = mp::msb(code);
    for (std::size_t k = 0; k <= top; ++k)
        if (mp::bit_test(code, static_cast<unsigned>(k))) out.push_back(k);
    return out;
}

Index encode_finite_set(std::span<const Instance> elements) {
    Index code = 0;
    for (Instance e : elements) mp::bit_set(code, static_cast<unsigned>(e));
    return code;
}

std::string index_to_string(const Index& i) { return i.str(); }

// ---------------------------------------------------------------------------
// Dfa

Dfa::Dfa(std::uint32_t states, std::vector<std::uint32_t> transitions, std::vector<bool> accepting)
    : states_(states), transitions_(std::move(transitions)), accepting_(std::move(accepting)) {
    if (states_ == 0) throw std::invalid_argument("Dfa: needs at least one state");
    if (transitions_.size() != 2 * static_cast<std::size_t>(states_))
        throw std::invalid_argument(fmt::format("Dfa: expected {} transitions, got {}", 2 * states_, transitions_.size()));
    if (accepting_.size() != states_)
        throw std::invalid_argument(fmt::format("Dfa: expected {} accepting flags, got {}", states_, accepting_.size()));
    for (auto t : transitions_)
        if (t >= states_) throw std::invalid_argument(fmt::format("Dfa: transition to missing state {}", t));
}

bool Dfa::accepts(Instance x) const {
    std::uint32_t q = 0;
    if (x == 0) return accepting_[next(q, 0)];
    for (int b = 63 - std::countl_zero(x); b >= 0; --b) q = next(q, static_cast<unsigned>((x >> b) & 1U));
    return accepting_[q];
}

bool Dfa::accepts_infinitely_many() const {
    // Instances other than 0 are exactly the strings starting with '1', so the
    // language is infinite iff some state reachable after the leading '1' sits
    // on a cycle and can still reach acceptance.
    const std::uint32_t n = states_;
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::uint32_t s = 0; s < n; ++s) {
        std::vector<std::uint32_t> stack{s};
        reach[s][s] = true;
        while (!stack.empty()) {
            auto q = stack.back();
            stack.pop_back();
            for (unsigned b = 0; b < 2; ++b) {
                auto r = next(q, b);
                if (!reach[s][r]) {
                    reach[s][r] = true;
                    stack.push_back(r);
                }
            }
        }
    }
    const std::uint32_t start = next(0, 1);
    for (std::uint32_t q = 0; q < n; ++q) {
        if (!reach[start][q]) continue;
        const bool on_cycle = reach[next(q, 0)][q] || reach[next(q, 1)][q];
        if (!on_cycle) continue;
        for (std::uint32_t a = 0; a < n; ++a)
            if (accepting_[a] && reach[q][a]) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// LanguageSpec

namespace {

void require_sorted_distinct(const std::vector<Instance>& v, const char* what) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i - 1] >= v[i]) throw std::invalid_argument(fmt::format("{}: elements must be sorted and distinct", what));
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

LanguageSpec LanguageSpec::threshold(Instance min) { return LanguageSpec(Threshold{min}); }

LanguageSpec LanguageSpec::multiples(Instance period) {
    if (period == 0) throw std::invalid_argument("Multiples: period must be >= 1");
    return LanguageSpec(Multiples{period});
}

LanguageSpec LanguageSpec::cofinite(std::vector<Instance> excluded) {
    require_sorted_distinct(excluded, "CoFinite");
    return LanguageSpec(CoFinite{std::move(excluded)});
}

LanguageSpec LanguageSpec::finite(std::vector<Instance> elements) {
    require_sorted_distinct(elements, "FiniteSet");
    return LanguageSpec(FiniteSet{std::move(elements)});
}

LanguageSpec LanguageSpec::all() { return LanguageSpec(AllInstances{}); }
LanguageSpec LanguageSpec::dfa(Dfa automaton) { return LanguageSpec(std::move(automaton)); }

LanguageSpec LanguageSpec::lookup(std::map<Instance, bool> table, bool fallback) {
    return LanguageSpec(Lookup{std::move(table), fallback});
}

bool LanguageSpec::contains(Instance x) const {
    return std::visit(overloaded{
                          [x](const Threshold& t) { return x >= t.min; },
                          [x](const Multiples& m) { return x % m.period == 0; },
                          [x](const CoFinite& c) { return !std::binary_search(c.excluded.begin(), c.excluded.end(), x); },
                          [x](const FiniteSet& f) { return std::binary_search(f.elements.begin(), f.elements.end(), x); },
                          [](const AllInstances&) { return true; },
                          [x](const Dfa& d) { return d.accepts(x); },
                          [x](const Lookup& l) {
                              auto it = l.table.find(x);
                              return it == l.table.end() ? l.fallback : it->second;
                          },
                      },
                      v_);
}

std::uint64_t LanguageSpec::evaluation_steps(Instance x) const {
    auto search = [](std::size_t n) -> std::uint64_t { return 1 + std::bit_width(n); };
    return std::visit(overloaded{
                          [](const Threshold&) -> std::uint64_t { return 1; },
                          [](const Multiples&) -> std::uint64_t { return 1; },
                          [&](const CoFinite& c) { return search(c.excluded.size()); },
                          [&](const FiniteSet& f) { return search(f.elements.size()); },
                          [](const AllInstances&) -> std::uint64_t { return 1; },
                          [x](const Dfa&) -> std::uint64_t { return x == 0 ? 1 : std::bit_width(x); },
                          [&](const Lookup& l) { return search(l.table.size()); },
                      },
                      v_);
}

bool LanguageSpec::is_finite() const {
    return std::visit(overloaded{
                          [](const FiniteSet&) { return true; },
                          [](const Dfa& d) { return !d.accepts_infinitely_many(); },
                          [](const Lookup& l) { return !l.fallback; },
                          [](const auto&) { return false; },
                      },
                      v_);
}

std::optional<Instance> LanguageSpec::next_member(Instance from, std::uint64_t scan_limit) const {
    auto scan = [&](auto&& pred) -> std::optional<Instance> {
        Instance x = from;
        for (std::uint64_t i = 0; i < scan_limit; ++i, ++x) {
            if (pred(x)) return x;
            if (x == UINT64_MAX) break;
        }
        return std::nullopt;
    };
    return std::visit(
        overloaded{
            [&](const Threshold& t) -> std::optional<Instance> { return std::max(from, t.min); },
            [&](const Multiples& m) -> std::optional<Instance> {
                const Instance q = from / m.period + (from % m.period != 0 ? 1 : 0);
                if (q > UINT64_MAX / m.period) return std::nullopt;
                return q * m.period;
            },
            [&](const CoFinite& c) -> std::optional<Instance> {
                Instance x = from;
                auto it = std::lower_bound(c.excluded.begin(), c.excluded.end(), x);
                while (it != c.excluded.end() && *it == x) {
                    if (x == UINT64_MAX) return std::nullopt;
                    ++x;
                    ++it;
                }
                return x;
            },
            [&](const FiniteSet& f) -> std::optional<Instance> {
                auto it = std::lower_bound(f.elements.begin(), f.elements.end(), from);
                if (it == f.elements.end()) return std::nullopt;
                return *it;
            },
            [&](const AllInstances&) -> std::optional<Instance> { return from; },
            [&](const Dfa& d) { return scan([&](Instance x) { return d.accepts(x); }); },
            [&](const Lookup& l) -> std::optional<Instance> {
                if (l.fallback) return scan([&](Instance x) { return contains(x); });
                for (auto it = l.table.lower_bound(from); it != l.table.end(); ++it)
                    if (it->second) return it->first;
                return std::nullopt;
            },
        },
        v_);
}

std::string LanguageSpec::describe() const {
    return std::visit(overloaded{
                          [](const Threshold& t) { return fmt::format("Threshold({})", t.min); },
                          [](const Multiples& m) { return fmt::format("Multiples({})", m.period); },
                          [](const CoFinite& c) { return fmt::format("CoFinite({{{}}})", fmt::join(c.excluded, ",")); },
                          [](const FiniteSet& f) { return fmt::format("FiniteSet({{{}}})", fmt::join(f.elements, ",")); },
                          [](const AllInstances&) { return std::string("All"); },
                          [](const Dfa& d) {
                              std::string acc;
                              for (std::uint32_t q = 0; q < d.states(); ++q) acc.push_back(d.accepting(q) ? '1' : '0');
                              return fmt::format("Dfa(states={},delta=[{}],accept={})", d.states(),
                                                 fmt::join(d.transitions(), ","), acc);
                          },
                          [](const Lookup& l) {
                              std::vector<std::string> cells;
                              for (auto [x, b] : l.table) cells.push_back(fmt::format("{}:{}", x, b ? 1 : 0));
                              return fmt::format("Lookup({{{}}},default={})", fmt::join(cells, ","), l.fallback ? 1 : 0);
                          },
                      },
                      v_);
}

// ---------------------------------------------------------------------------
// Sample

void Sample::insert(Instance x) {
    ++observations_;
    if (contains(x)) return;
    auto next = runs_.upper_bound(x);
    const bool joins_next = next != runs_.end() && x != UINT64_MAX && next->first == x + 1;
    if (next != runs_.begin() && std::prev(next)->second + 1 == x) {
        auto prev = std::prev(next);
        prev->second = joins_next ? next->second : x;
        if (joins_next) runs_.erase(next);
    } else if (joins_next) {
        const Instance last = next->second;
        runs_.erase(next);
        runs_.emplace(x, last);
    } else {
        runs_.emplace(x, x);
    }
    ++distinct_;
    gcd_ = std::gcd(gcd_, x);
    if (x < 64) low_mask_ |= std::uint64_t{1} << x;
}

bool Sample::contains(Instance x) const {
    auto it = runs_.upper_bound(x);
    if (it == runs_.begin()) return false;
    return x <= std::prev(it)->second;
}

Instance Sample::least_unseen_from(Instance from) const {
    auto it = runs_.upper_bound(from);
    if (it == runs_.begin()) return from;
    auto prev = std::prev(it);
    if (from > prev->second) return from;
    if (prev->second == UINT64_MAX) throw std::overflow_error("Sample: every value from `from` upward observed");
    return prev->second + 1;
}

std::vector<Instance> Sample::elements() const {
    std::vector<Instance> out;
    out.reserve(distinct_);
    for (auto [first, last] : runs_) {
        for (Instance x = first;; ++x) {
            out.push_back(x);
            if (x == last) break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Free operations

bool contains(const LanguageSpec& lang, Instance x) { return lang.contains(x); }

Instance enumerate_element(const LanguageSpec& lang, std::uint64_t k) {
    auto too_far = [&] {
        return std::out_of_range(fmt::format("enumerate_element: {} has no element of rank {}", lang.describe(), k));
    };
    const auto& v = lang.variant();
    if (auto t = std::get_if<Threshold>(&v)) {
        if (k > UINT64_MAX - t->min) throw too_far();
        return t->min + k;
    }
    if (auto m = std::get_if<Multiples>(&v)) {
        if (k > UINT64_MAX / m->period) throw too_far();
        return m->period * k;
    }
    if (auto c = std::get_if<CoFinite>(&v)) {
        Instance x = k;
        for (Instance e : c->excluded) {
            if (e > x) break;
            ++x;
        }
        return x;
    }
    if (auto f = std::get_if<FiniteSet>(&v)) {
        if (k >= f->elements.size()) throw too_far();
        return f->elements[k];
    }
    if (std::holds_alternative<AllInstances>(v)) return k;
    if (auto l = std::get_if<Lookup>(&v); l && !l->fallback) {
        std::uint64_t seen = 0;
        for (auto [x, b] : l->table)
            if (b && seen++ == k) return x;
        throw too_far();
    }
    // automata and co-finite lookups: walk members upward
    Instance x = 0;
    for (std::uint64_t r = 0;; ++r) {
        auto m = lang.next_member(x);
        if (!m) throw too_far();
        if (r == k) return *m;
        if (*m == UINT64_MAX) throw too_far();
        x = *m + 1;
    }
}

bool is_consistent(const LanguageSpec& lang, const Sample& sample) {
    if (sample.empty()) return true;
    const auto& v = lang.variant();
    if (auto t = std::get_if<Threshold>(&v)) return sample.min() >= t->min;
    if (auto m = std::get_if<Multiples>(&v)) return sample.gcd() % m->period == 0;
    if (auto c = std::get_if<CoFinite>(&v))
        return std::none_of(c->excluded.begin(), c->excluded.end(), [&](Instance e) { return sample.contains(e); });
    if (std::holds_alternative<AllInstances>(v)) return true;
    if (auto f = std::get_if<FiniteSet>(&v); f && sample.distinct() > f->elements.size()) return false;
    if (auto l = std::get_if<Lookup>(&v)) {
        if (l->fallback) {
            for (auto [x, b] : l->table)
                if (!b && sample.contains(x)) return false;
            return true;
        }
        if (sample.distinct() > l->table.size()) return false;
    }
    for (auto [first, last] : sample.runs()) {
        for (Instance x = first;; ++x) {
            if (!lang.contains(x)) return false;
            if (x == last) break;
        }
    }
    return true;
}

bool is_consistent(const LanguageSpec& lang, std::span<const Instance> sample) {
    return std::all_of(sample.begin(), sample.end(), [&](Instance x) { return lang.contains(x); });
}

// ---------------------------------------------------------------------------
// ConceptClass

std::string_view to_string(ClassKind kind) {
    switch (kind) {
    case ClassKind::thresholds: return "thresholds";
    case ClassKind::multiples: return "multiples";
    case ClassKind::cofinite: return "cofinite";
    case ClassKind::superfinite: return "superfinite";
    case ClassKind::regular_small: return "regular_small";
    }
    return "?";
}

namespace {

constexpr Instance kSignatureSize = Instance{1} << ConceptClass::kRegularEquivBits;
using Signature = std::vector<std::uint64_t>;

Signature signature_of(const LanguageSpec& lang) {
    Signature sig(kSignatureSize / 64, 0);
    for (Instance x = 0; x < kSignatureSize; ++x)
        if (lang.contains(x)) sig[x / 64] |= std::uint64_t{1} << (x % 64);
    return sig;
}

// Extensional normal form for the variants whose equality is decidable
// structurally. Automata are returned unchanged.
LanguageSpec normalize(const LanguageSpec& lang) {
    const auto& v = lang.variant();
    if (auto t = std::get_if<Threshold>(&v); t && t->min == 0) return LanguageSpec::all();
    if (auto m = std::get_if<Multiples>(&v); m && m->period == 1) return LanguageSpec::all();
    if (auto l = std::get_if<Lookup>(&v)) {
        std::vector<Instance> odd;
        for (auto [x, b] : l->table)
            if (b != l->fallback) odd.push_back(x);
        return normalize(l->fallback ? LanguageSpec::cofinite(std::move(odd)) : LanguageSpec::finite(std::move(odd)));
    }
    if (auto c = std::get_if<CoFinite>(&v)) {
        if (c->excluded.empty()) return LanguageSpec::all();
        if (c->excluded.back() == c->excluded.size() - 1) return LanguageSpec::threshold(c->excluded.size());
    }
    return lang;
}

} // namespace

struct ConceptClass::RegularTable {
    std::vector<Dfa> automata;
    std::map<Signature, std::uint64_t> by_signature;
    bool all_infinite = true;
};

ConceptClass ConceptClass::thresholds() { return {ClassKind::thresholds, 0, nullptr}; }
ConceptClass ConceptClass::multiples() { return {ClassKind::multiples, 0, nullptr}; }
ConceptClass ConceptClass::cofinite() { return {ClassKind::cofinite, 0, nullptr}; }
ConceptClass ConceptClass::superfinite() { return {ClassKind::superfinite, 0, nullptr}; }

ConceptClass ConceptClass::regular_small(std::uint32_t max_states) {
    if (max_states < 1 || max_states > 3)
        throw std::invalid_argument(fmt::format("regular_small: max_states must be in 1..3, got {}", max_states));

    static std::mutex mu;
    static std::map<std::uint32_t, std::shared_ptr<const RegularTable>> cache;
    std::lock_guard lock(mu);
    if (auto it = cache.find(max_states); it != cache.end()) return {ClassKind::regular_small, max_states, it->second};

    auto table = std::make_shared<RegularTable>();
    std::vector<std::uint32_t> run(kSignatureSize);
    // Canonical order: state count, then the transition table read as a
    // base-n numeral (most significant entry first), then the accepting set
    // read as a bit mask over states.
    for (std::uint32_t n = 1; n <= max_states; ++n) {
        std::vector<std::uint32_t> delta(2 * n, 0);
        for (bool more = true; more;) {
            run[0] = delta[0];
            if (kSignatureSize > 1) run[1] = delta[1];
            for (Instance x = 2; x < kSignatureSize; ++x) run[x] = delta[2 * run[x >> 1] + (x & 1U)];
            for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
                Signature sig(kSignatureSize / 64, 0);
                for (Instance x = 0; x < kSignatureSize; ++x)
                    if ((mask >> run[x]) & 1U) sig[x / 64] |= std::uint64_t{1} << (x % 64);
                if (table->by_signature.contains(sig)) continue;
                std::vector<bool> acc(n);
                for (std::uint32_t q = 0; q < n; ++q) acc[q] = (mask >> q) & 1U;
                table->by_signature.emplace(std::move(sig), table->automata.size());
                table->automata.emplace_back(n, delta, std::move(acc));
                if (!table->automata.back().accepts_infinitely_many()) table->all_infinite = false;
            }
            // advance the base-n counter, last entry fastest
            more = false;
            for (std::size_t pos = delta.size(); pos-- > 0;) {
                if (++delta[pos] < n) {
                    more = true;
                    break;
                }
                delta[pos] = 0;
            }
        }
    }
    cache.emplace(max_states, table);
    return {ClassKind::regular_small, max_states, std::move(table)};
}

std::string ConceptClass::name() const {
    if (kind_ == ClassKind::regular_small) return fmt::format("regular_small({})", max_states_);
    return std::string(to_string(kind_));
}

std::optional<Index> ConceptClass::size() const {
    if (kind_ == ClassKind::regular_small) return Index(regular_->automata.size());
    return std::nullopt;
}

bool ConceptClass::in_range(const Index& i) const {
    if (i < 0) return false;
    switch (kind_) {
    case ClassKind::thresholds: return i <= Index(UINT64_MAX);
    case ClassKind::multiples: return i < Index(UINT64_MAX);
    case ClassKind::regular_small: return i < Index(regular_->automata.size());
    default: return true;
    }
}

LanguageSpec ConceptClass::language(const Index& i) const {
    if (!in_range(i)) throw IndexOutOfRange(fmt::format("{}: index {} out of range", name(), i.str()));
    switch (kind_) {
    case ClassKind::thresholds: return LanguageSpec::threshold(static_cast<Instance>(i));
    case ClassKind::multiples: return LanguageSpec::multiples(static_cast<Instance>(i) + 1);
    case ClassKind::cofinite: {
        auto excluded = decode_finite_set(i);
        return excluded.empty() ? LanguageSpec::all() : LanguageSpec::cofinite(std::move(excluded));
    }
    case ClassKind::superfinite:
        if (i == 0) return LanguageSpec::all();
        return LanguageSpec::finite(decode_finite_set(i - 1));
    case ClassKind::regular_small: return LanguageSpec::dfa(regular_->automata[static_cast<std::size_t>(i)]);
    }
    throw std::logic_error("unreachable");
}

std::optional<Index> ConceptClass::index_of(const LanguageSpec& lang) const {
    if (kind_ == ClassKind::regular_small) {
        auto it = regular_->by_signature.find(signature_of(lang));
        if (it == regular_->by_signature.end()) return std::nullopt;
        return Index(it->second);
    }
    const auto norm = normalize(lang);
    const auto& v = norm.variant();
    const bool is_all = std::holds_alternative<AllInstances>(v);
    switch (kind_) {
    case ClassKind::thresholds:
        if (is_all) return Index(0);
        if (auto t = std::get_if<Threshold>(&v)) return Index(t->min);
        return std::nullopt;
    case ClassKind::multiples:
        if (is_all) return Index(0);
        if (auto m = std::get_if<Multiples>(&v)) return Index(m->period - 1);
        return std::nullopt;
    case ClassKind::cofinite:
        if (is_all) return Index(0);
        if (auto c = std::get_if<CoFinite>(&v)) return encode_finite_set(c->excluded);
        if (auto t = std::get_if<Threshold>(&v)) {
            Index code = 1;
            code <<= static_cast<unsigned>(t->min);
            return code - 1;
        }
        return std::nullopt;
    case ClassKind::superfinite:
        if (is_all) return Index(0);
        if (auto f = std::get_if<FiniteSet>(&v)) return encode_finite_set(f->elements) + 1;
        return std::nullopt;
    case ClassKind::regular_small: break;
    }
    return std::nullopt;
}

bool ConceptClass::member(const Index& i, Instance x) const {
    if (!in_range(i)) throw IndexOutOfRange(fmt::format("{}: index {} out of range", name(), i.str()));
    auto has_bit = [](const Index& code, Instance k) {
        if (code == 0 || k > mp::msb(code)) return false;
        return mp::bit_test(code, static_cast<unsigned>(k));
    };
    switch (kind_) {
    case ClassKind::thresholds: return Index(x) >= i;
    case ClassKind::multiples: return x % (static_cast<Instance>(i) + 1) == 0;
    case ClassKind::cofinite: return !has_bit(i, x);
    case ClassKind::superfinite: return i == 0 || has_bit(i - 1, x);
    case ClassKind::regular_small: return regular_->automata[static_cast<std::size_t>(i)].accepts(x);
    }
    return false;
}

bool ConceptClass::consistent(std::uint64_t i, const Sample& sample) const {
    if (sample.empty()) return in_range(Index(i));
    switch (kind_) {
    case ClassKind::thresholds: return sample.min() >= i;
    case ClassKind::multiples: return i != UINT64_MAX && sample.gcd() % (i + 1) == 0;
    case ClassKind::cofinite: return (i & sample.low_mask()) == 0;
    case ClassKind::superfinite:
        if (i == 0) return true;
        return sample.all_below_64() && (sample.low_mask() & ~(i - 1)) == 0;
    case ClassKind::regular_small:
        if (i >= regular_->automata.size()) return false;
        return is_consistent(LanguageSpec::dfa(regular_->automata[i]), sample);
    }
    return false;
}

bool ConceptClass::all_languages_infinite() const {
    switch (kind_) {
    case ClassKind::superfinite: return false;
    case ClassKind::regular_small: return regular_->all_infinite;
    default: return true;
    }
}

std::vector<LanguageSpec> ConceptClass::window_intersection(const Sample& sample, std::uint64_t n_bound) const {
    switch (kind_) {
    case ClassKind::thresholds: {
        // consistent thresholds are 0..min(sample); the largest one is the intersection
        const Instance top = sample.empty() ? n_bound : std::min<Instance>(n_bound, sample.min());
        return {LanguageSpec::threshold(top)};
    }
    case ClassKind::multiples: {
        const std::uint64_t last = n_bound == UINT64_MAX ? n_bound : n_bound + 1;
        const Instance g = sample.gcd();
        unsigned __int128 lcm = 1;
        bool overflow = false;
        for (std::uint64_t p = 2; p <= last && !overflow; ++p) {
            if (g != 0 && g % p != 0) continue;
            lcm = lcm / std::gcd(static_cast<std::uint64_t>(lcm), p) * p;
            overflow = lcm > UINT64_MAX;
        }
        // multiples of a period beyond the instance range: only 0 remains
        if (overflow) return {LanguageSpec::finite({0})};
        return {LanguageSpec::multiples(static_cast<Instance>(lcm))};
    }
    case ClassKind::cofinite: {
        std::uint64_t excluded = 0;
        const std::uint64_t blocked = sample.low_mask();
        for (std::uint64_t j = 0; j <= n_bound; ++j) {
            if ((j & blocked) == 0) excluded |= j;
            if (j == UINT64_MAX) break;
        }
        auto set = decode_finite_set(Index(excluded));
        return {set.empty() ? LanguageSpec::all() : LanguageSpec::cofinite(std::move(set))};
    }
    case ClassKind::superfinite: {
        // index 0 (All) is always consistent; finite index j + 1 needs sample within decode(j)
        std::optional<std::uint64_t> common;
        if (sample.all_below_64() && n_bound >= 1) {
            const std::uint64_t need = sample.low_mask();
            for (std::uint64_t j = 0; j + 1 <= n_bound; ++j) {
                if ((need & ~j) == 0) common = common ? (*common & j) : j;
                if (j == UINT64_MAX - 1) break;
            }
        }
        if (!common) return {LanguageSpec::all()};
        return {LanguageSpec::finite(decode_finite_set(Index(*common)))};
    }
    case ClassKind::regular_small: {
        std::vector<LanguageSpec> parts;
        const std::uint64_t end = std::min<std::uint64_t>(n_bound, regular_->automata.size() - 1);
        for (std::uint64_t j = 0; j <= end; ++j)
            if (consistent(j, sample)) parts.push_back(LanguageSpec::dfa(regular_->automata[j]));
        return parts;
    }
    }
    return {};
}

} // namespace learnlab
