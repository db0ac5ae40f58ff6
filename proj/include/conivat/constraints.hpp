#pragma once

// Pairwise must-link ("similar") and cannot-link ("dissimilar") constraints:
// generation from labels, transitive closure, and conflict removal.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "conivat/data.hpp"
#include "conivat/error.hpp"
#include "conivat/rng.hpp"
#include "conivat/union_find.hpp"

namespace conivat {

// Unordered index pair, stored with first < second.
struct IndexPair {
    std::size_t first = 0;
    std::size_t second = 0;

    IndexPair() = default;
    IndexPair(std::size_t a, std::size_t b) : first(std::min(a, b)), second(std::max(a, b)) {}

    auto operator<=>(const IndexPair&) const = default;
};

using PairSet = std::set<IndexPair>;

class ConstraintSet {
public:
    ConstraintSet() = default;
    explicit ConstraintSet(std::size_t n_items) : n_items_(n_items) {}

    std::size_t n_items() const noexcept { return n_items_; }
    const PairSet& similar() const noexcept { return similar_; }
    const PairSet& dissimilar() const noexcept { return dissimilar_; }
    std::size_t size() const noexcept { return similar_.size() + dissimilar_.size(); }
    bool empty() const noexcept { return similar_.empty() && dissimilar_.empty(); }

    void add_similar(std::size_t i, std::size_t j) { similar_.insert(checked(i, j)); }
    void add_dissimilar(std::size_t i, std::size_t j) { dissimilar_.insert(checked(i, j)); }
    void erase_dissimilar(const IndexPair& p) { dissimilar_.erase(p); }

    // Similar-graph component id per item (items without similar edges
    // are singletons).
    std::vector<std::size_t> similar_components() const {
        UnionFind uf(n_items_);
        for (const auto& p : similar_) uf.unite(p.first, p.second);
        return uf.component_ids();
    }

    bool operator==(const ConstraintSet&) const = default;

private:
    IndexPair checked(std::size_t i, std::size_t j) const {
        if (i == j) throw InputError("constraint pairs an item with itself: " + std::to_string(i));
        if (i >= n_items_ || j >= n_items_)
            throw InputError("constraint index out of range: (" + std::to_string(i) + ", " + std::to_string(j) +
                             ") with " + std::to_string(n_items_) + " items");
        return {i, j};
    }

    std::size_t n_items_ = 0;
    PairSet similar_;
    PairSet dissimilar_;
};

// Draws `count` distinct unordered pairs uniformly from `pool` (default: all
// items). Same-label pairs become similar constraints, others dissimilar.
inline ConstraintSet generate_from_labels(const FeatureMatrix& data, std::size_t count, std::uint64_t seed,
                                          std::optional<std::vector<std::size_t>> pool = std::nullopt) {
    if (!data.has_labels()) throw InputError("constraint generation needs labeled data");
    const Labels& labels = data.labels();
    std::vector<std::size_t> items;
    if (pool) {
        items = *pool;
        std::sort(items.begin(), items.end());
        items.erase(std::unique(items.begin(), items.end()), items.end());
        for (auto i : items)
            if (i >= data.size()) throw InputError("constraint pool index out of range: " + std::to_string(i));
    } else {
        items.resize(data.size());
        std::iota(items.begin(), items.end(), std::size_t{0});
    }
    const std::size_t m = items.size();
    const std::size_t total = m < 2 ? 0 : m * (m - 1) / 2;
    if (count > total)
        throw InputError("requested " + std::to_string(count) + " constraints but the pool only has " +
                         std::to_string(total) + " distinct pairs");

    ConstraintSet cs(data.size());
    auto classify = [&](IndexPair p) {
        if (labels[p.first] == labels[p.second]) cs.add_similar(p.first, p.second);
        else cs.add_dissimilar(p.first, p.second);
    };

    Rng rng(seed);
    if (count * 2 > total) {
        // Dense request: partial Fisher-Yates over the enumerated pairs.
        std::vector<IndexPair> all;
        all.reserve(total);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a + 1; b < m; ++b) all.emplace_back(items[a], items[b]);
        for (std::size_t t = 0; t < count; ++t) {
            const auto j = t + static_cast<std::size_t>(rng.below(total - t));
            std::swap(all[t], all[j]);
            classify(all[t]);
        }
        return cs;
    }

    PairSet drawn;
    while (drawn.size() < count) {
        const auto a = static_cast<std::size_t>(rng.below(m));
        auto b = static_cast<std::size_t>(rng.below(m - 1));
        if (b >= a) ++b;
        const IndexPair p(items[a], items[b]);
        if (drawn.insert(p).second) classify(p);
    }
    return cs;
}

// Similar pairs expanded to cliques over similar-graph components; every
// dissimilar edge (a, b) expanded to comp(a) × comp(b). The result is a
// fixed point of both propagation rules.
inline ConstraintSet transitive_closure(const ConstraintSet& cs) {
    const std::size_t n = cs.n_items();
    const auto comp = cs.similar_components();
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < n; ++i) {
        if (comp[i] >= members.size()) members.resize(comp[i] + 1);
        members[comp[i]].push_back(i);
    }

    ConstraintSet out(n);
    for (const auto& group : members)
        for (std::size_t a = 0; a < group.size(); ++a)
            for (std::size_t b = a + 1; b < group.size(); ++b) out.add_similar(group[a], group[b]);

    std::set<std::pair<std::size_t, std::size_t>> comp_pairs;
    for (const auto& p : cs.dissimilar())
        comp_pairs.emplace(std::min(comp[p.first], comp[p.second]), std::max(comp[p.first], comp[p.second]));
    for (const auto& [ca, cb] : comp_pairs)
        for (auto i : members[ca])
            for (auto j : members[cb])
                if (i != j) out.add_dissimilar(i, j);
    return out;
}

struct SanitizeResult {
    ConstraintSet constraints;
    std::vector<IndexPair> removed;
};

// Deletes every dissimilar pair whose endpoints share a similar-graph
// component. Similar pairs are never touched.
inline SanitizeResult remove_inconsistent(const ConstraintSet& cs) {
    SanitizeResult result{cs, {}};
    // The component structure depends only on the similar set, so a single
    // pass reaches the fixed point.
    const auto comp = cs.similar_components();
    for (const auto& p : cs.dissimilar())
        if (comp[p.first] == comp[p.second]) result.removed.push_back(p);
    for (const auto& p : result.removed) result.constraints.erase_dissimilar(p);
    return result;
}

// Closure followed by conflict removal: the form every consumer expects.
inline ConstraintSet sanitize(const ConstraintSet& cs) {
    return remove_inconsistent(transitive_closure(cs)).constraints;
}

// Text format: one constraint per line, "S i j" or "D i j", 0-based.
inline void write_constraints(const ConstraintSet& cs, std::ostream& out) {
    for (const auto& p : cs.similar()) out << "S " << p.first << ' ' << p.second << '\n';
    for (const auto& p : cs.dissimilar()) out << "D " << p.first << ' ' << p.second << '\n';
}

inline ConstraintSet read_constraints(std::istream& in, std::size_t n_items) {
    ConstraintSet cs(n_items);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind) || kind.front() == '#') continue;
        long long i = -1;
        long long j = -1;
        std::string extra;
        if (!(ls >> i >> j) || (ls >> extra) || i < 0 || j < 0 || (kind != "S" && kind != "D"))
            throw InputError("malformed constraint on line " + std::to_string(lineno) + ": " + line);
        if (kind == "S") cs.add_similar(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        else cs.add_dissimilar(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
    return cs;
}

inline ConstraintSet read_constraints_file(const std::string& path, std::size_t n_items) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read constraint file: " + path);
    return read_constraints(in, n_items);
}

} // namespace conivat
