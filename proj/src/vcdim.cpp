#include "learnlab/vcdim.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace learnlab {

std::string_view to_string(HypothesisFamily f) {
    switch (f) {
    case HypothesisFamily::thresholds: return "thresholds";
    case HypothesisFamily::intervals: return "intervals";
    case HypothesisFamily::unions_of_intervals: return "unions_of_intervals";
    case HypothesisFamily::lookup_tables: return "lookup_tables";
    }
    return "?";
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > UINT64_MAX) return UINT64_MAX;
    }
    return static_cast<std::uint64_t>(r);
}

HypothesisClass::HypothesisClass(HypothesisFamily family, std::size_t k, std::vector<Instance> universe)
    : family_(family), k_(k), universe_(std::move(universe)) {
    std::sort(universe_.begin(), universe_.end());
    universe_.erase(std::unique(universe_.begin(), universe_.end()), universe_.end());
}

void HypothesisClass::add(TruthTable t) {
    if (members_.size() >= kMaxMembers)
        throw BudgetExceeded(fmt::format("{}: more than {} members", name(), kMaxMembers));
    members_.push_back(std::move(t));
}

HypothesisClass HypothesisClass::thresholds(std::vector<Instance> universe) {
    HypothesisClass hc(HypothesisFamily::thresholds, 1, std::move(universe));
    const std::size_t n = hc.universe_.size();
    for (std::size_t i = 0; i <= n; ++i) {
        TruthTable t(n);
        for (std::size_t j = i; j < n; ++j) t.set(j);
        hc.add(std::move(t));
    }
    return hc;
}

HypothesisClass HypothesisClass::intervals(std::vector<Instance> universe) {
    HypothesisClass hc(HypothesisFamily::intervals, 1, std::move(universe));
    const std::size_t n = hc.universe_.size();
    if (n * (n + 1) / 2 + 1 > kMaxMembers) throw BudgetExceeded("intervals: universe too large");
    hc.add(TruthTable(n));
    for (std::size_t a = 0; a < n; ++a) {
        TruthTable t(n);
        for (std::size_t b = a; b < n; ++b) {
            t.set(b);
            hc.add(t);
        }
    }
    return hc;
}

HypothesisClass HypothesisClass::unions_of_intervals(std::size_t k, std::vector<Instance> universe) {
    if (k == 0) throw std::invalid_argument("unions_of_intervals: k must be >= 1");
    HypothesisClass hc(HypothesisFamily::unions_of_intervals, k, std::move(universe));
    const std::size_t n = hc.universe_.size();
    // Runs are separated by at least one unset point, so each pattern with
    // at most k runs is produced exactly once.
    TruthTable current(n);
    auto place = [&](auto&& self, std::size_t from, std::size_t runs_left) -> void {
        hc.add(current);
        if (runs_left == 0) return;
        for (std::size_t a = from; a < n; ++a) {
            for (std::size_t b = a; b < n; ++b) {
                current.set(b);
                self(self, b + 2, runs_left - 1);
            }
            for (std::size_t b = a; b < n; ++b) current.reset(b);
        }
    };
    place(place, 0, k);
    return hc;
}

HypothesisClass HypothesisClass::lookup_tables(std::vector<Instance> universe) {
    HypothesisClass hc(HypothesisFamily::lookup_tables, 0, std::move(universe));
    const std::size_t n = hc.universe_.size();
    if (n > kMaxLookupUniverse)
        throw BudgetExceeded(fmt::format("lookup_tables: universe of {} exceeds {}", n, kMaxLookupUniverse));
    hc.members_.reserve(std::size_t{1} << n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) hc.add(TruthTable(n, mask));
    return hc;
}

std::string HypothesisClass::name() const {
    if (family_ == HypothesisFamily::unions_of_intervals) return fmt::format("unions_of_{}_intervals", k_);
    return std::string(to_string(family_));
}

bool HypothesisClass::in_universe(Instance x) const {
    return std::binary_search(universe_.begin(), universe_.end(), x);
}

std::size_t HypothesisClass::position(Instance x) const {
    auto it = std::lower_bound(universe_.begin(), universe_.end(), x);
    if (it == universe_.end() || *it != x)
        throw std::out_of_range(fmt::format("{}: instance {} outside the universe", name(), x));
    return static_cast<std::size_t>(it - universe_.begin());
}

bool HypothesisClass::evaluate(std::size_t member, Instance x) const {
    auto it = std::lower_bound(universe_.begin(), universe_.end(), x);
    if (it == universe_.end() || *it != x) return false;
    return members_.at(member).test(static_cast<std::size_t>(it - universe_.begin()));
}

Hypothesis HypothesisClass::hypothesis(std::size_t member) const {
    const auto& t = members_.at(member);
    std::map<Instance, bool> table;
    for (std::size_t j = 0; j < universe_.size(); ++j) table.emplace_hint(table.end(), universe_[j], t.test(j));
    return Hypothesis(LanguageSpec::lookup(std::move(table), false));
}

std::vector<Hypothesis> HypothesisClass::hypotheses() const {
    std::vector<Hypothesis> out;
    out.reserve(members_.size());
    for (std::size_t i = 0; i < members_.size(); ++i) out.push_back(hypothesis(i));
    return out;
}

std::optional<std::size_t> HypothesisClass::find(const LanguageSpec& lang) const {
    TruthTable want(universe_.size());
    for (std::size_t j = 0; j < universe_.size(); ++j)
        if (lang.contains(universe_[j])) want.set(j);
    for (std::size_t i = 0; i < members_.size(); ++i)
        if (members_[i] == want) return i;
    return std::nullopt;
}

std::size_t HypothesisClass::erm(std::span<const LabeledPoint> sample) const {
    if (members_.empty()) throw std::invalid_argument("erm: empty hypothesis class");
    // per-position label counts; only touched positions matter
    std::vector<std::size_t> ones(universe_.size(), 0), zeros(universe_.size(), 0);
    std::vector<std::size_t> touched;
    for (const auto& p : sample) {
        const auto j = position(p.x);
        if (ones[j] == 0 && zeros[j] == 0) touched.push_back(j);
        (p.label ? ones[j] : zeros[j])++;
    }
    std::size_t best = 0;
    std::size_t best_errors = SIZE_MAX;
    for (std::size_t i = 0; i < members_.size() && best_errors > 0; ++i) {
        const auto& t = members_[i];
        std::size_t errors = 0;
        for (auto j : touched) {
            errors += t.test(j) ? zeros[j] : ones[j];
            if (errors >= best_errors) break;
        }
        if (errors < best_errors) {
            best = i;
            best_errors = errors;
        }
    }
    return best;
}

bool shatters(const HypothesisClass& hc, std::span<const Instance> subset) {
    std::vector<Instance> points(subset.begin(), subset.end());
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.size() > kMaxVcCap)
        throw BudgetExceeded(fmt::format("shatters: subset of {} exceeds the {} point budget", points.size(), kMaxVcCap));

    std::vector<std::size_t> pos;
    pos.reserve(points.size());
    for (Instance x : points) pos.push_back(hc.position(x));

    const std::uint64_t needed = std::uint64_t{1} << points.size();
    std::vector<bool> realized(needed, false);
    std::uint64_t count = 0;
    for (const auto& t : hc.members()) {
        std::uint64_t pattern = 0;
        for (std::size_t b = 0; b < pos.size(); ++b)
            if (t.test(pos[b])) pattern |= std::uint64_t{1} << b;
        if (!realized[pattern]) {
            realized[pattern] = true;
            if (++count == needed) return true;
        }
    }
    return false;
}

VcResult vc_dimension(const HypothesisClass& hc, std::span<const Instance> universe, std::size_t cap) {
    if (cap > kMaxVcCap) throw BudgetExceeded(fmt::format("vc_dimension: cap {} exceeds {}", cap, kMaxVcCap));
    std::vector<Instance> u(universe.begin(), universe.end());
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    for (Instance x : u) (void)hc.position(x);

    VcResult result;
    const std::size_t n = u.size();
    for (std::size_t size = 1; size <= std::min(cap, n); ++size) {
        if (binomial(n, size) > kVcSubsetBudget)
            throw BudgetExceeded(fmt::format("vc_dimension: C({}, {}) subsets exceed the budget of {}", n, size,
                                             kVcSubsetBudget));
        std::vector<std::size_t> idx(size);
        for (std::size_t i = 0; i < size; ++i) idx[i] = i;
        std::vector<Instance> subset(size);
        bool found = false;
        while (true) {
            for (std::size_t i = 0; i < size; ++i) subset[i] = u[idx[i]];
            ++result.subsets_checked;
            if (shatters(hc, subset)) {
                found = true;
                break;
            }
            // next combination in lexicographic order
            std::size_t i = size;
            while (i > 0 && idx[i - 1] == n - size + (i - 1)) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
        // shattering is closed under subsets, so no larger set can succeed
        if (!found) break;
        result.dimension = size;
        result.witness = subset;
    }
    result.exact = result.dimension < cap;
    return result;
}

Hypothesis lookup_witness(std::span<const Instance> points, const std::vector<bool>& labels) {
    if (points.size() != labels.size())
        throw std::invalid_argument(
            fmt::format("lookup_witness: {} points but {} labels", points.size(), labels.size()));
    std::map<Instance, bool> table;
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto [it, fresh] = table.emplace(points[i], labels[i]);
        if (!fresh && it->second != labels[i])
            throw std::invalid_argument(fmt::format("lookup_witness: conflicting labels for {}", points[i]));
    }
    return Hypothesis(LanguageSpec::lookup(std::move(table), false));
}

std::uint64_t sample_bound(std::size_t d, double eps, double delta, double C) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument(fmt::format("sample_bound: eps {} not in (0,1)", eps));
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument(fmt::format("sample_bound: delta {} not in (0,1)", delta));
    if (!(C > 0.0)) throw std::invalid_argument(fmt::format("sample_bound: C {} must be positive", C));
    const double v = C * (static_cast<double>(d) + std::log(1.0 / delta)) / eps;
    const double f = std::floor(v);
    if (v - f <= 1e-12 * std::max(1.0, v)) return static_cast<std::uint64_t>(f);
    return static_cast<std::uint64_t>(f) + 1;
}

} // namespace learnlab
