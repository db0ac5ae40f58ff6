#pragma once

// Single-linkage partitions from VAT MSTs, plain agglomerative clustering,
// and the constrained baselines (complete-linkage CCL, single-linkage SSL).

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "conivat/constraints.hpp"
#include "conivat/dissimilarity.hpp"
#include "conivat/error.hpp"
#include "conivat/union_find.hpp"
#include "conivat/vat.hpp"

namespace conivat {

class Partition {
public:
    Partition() = default;

    // Relabels arbitrary component ids to 0..k-1 in order of first
    // appearance along `visit` (default: index order).
    static Partition from_ids(const std::vector<std::size_t>& ids, const std::vector<std::size_t>* visit = nullptr) {
        const std::size_t n = ids.size();
        std::size_t maxid = 0;
        for (auto id : ids) maxid = std::max(maxid, id);
        std::vector<int> remap(maxid + 1, -1);
        Partition p;
        p.labels_.assign(n, -1);
        int next = 0;
        for (std::size_t t = 0; t < n; ++t) {
            const std::size_t i = visit ? (*visit)[t] : t;
            int& slot = remap[ids[i]];
            if (slot < 0) slot = next++;
            p.labels_[i] = slot;
        }
        p.k_ = static_cast<std::size_t>(next);
        return p;
    }

    std::size_t size() const noexcept { return labels_.size(); }
    std::size_t k() const noexcept { return k_; }
    const std::vector<int>& labels() const noexcept { return labels_; }
    int operator[](std::size_t i) const noexcept { return labels_[i]; }

    bool operator==(const Partition&) const = default;

private:
    std::vector<int> labels_;
    std::size_t k_ = 0;
};

// True when both partitions group the items identically (ids ignored).
inline bool same_grouping(const Partition& a, const Partition& b) {
    if (a.size() != b.size() || a.k() != b.k()) return false;
    std::vector<int> a_to_b(a.k(), -1);
    std::vector<int> b_to_a(b.k(), -1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        int& ab = a_to_b[static_cast<std::size_t>(a[i])];
        int& ba = b_to_a[static_cast<std::size_t>(b[i])];
        if (ab < 0 && ba < 0) {
            ab = b[i];
            ba = a[i];
        } else if (ab != b[i] || ba != a[i]) {
            return false;
        }
    }
    return true;
}

inline void check_k(std::size_t k, std::size_t n) {
    if (k < 1 || k > n)
        throw InputError("cluster count k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
}

// Removes the k-1 heaviest MST edges (ties: the edge admitted later goes
// first). Clusters are numbered in VAT order; labels are indexed by the
// original object index.
inline Partition cut_mst(const VatResult& vat, std::size_t k) {
    const std::size_t n = vat.size();
    check_k(k, n);
    std::vector<std::size_t> edges(n - 1);
    std::iota(edges.begin(), edges.end(), std::size_t{1});
    std::sort(edges.begin(), edges.end(), [&](std::size_t a, std::size_t b) {
        const double wa = vat.cut_magnitudes[a - 1];
        const double wb = vat.cut_magnitudes[b - 1];
        return wa != wb ? wa > wb : a > b;
    });
    UnionFind uf(n);
    for (std::size_t e = k - 1; e < edges.size(); ++e) uf.unite(edges[e], vat.mst_parent[edges[e]]);
    std::vector<std::size_t> ids(n);
    for (std::size_t t = 0; t < n; ++t) ids[vat.order[t]] = uf.find(t);
    return Partition::from_ids(ids, &vat.order);
}

enum class Linkage { single, complete };

// Naive agglomerative clustering from singletons down to k clusters. Merge
// ties go to the lexicographically smallest pair of cluster representatives
// (representative = smallest member index).
inline Partition hac(const DissimilarityMatrix& d, std::size_t k, Linkage linkage) {
    const std::size_t n = d.size();
    check_k(k, n);
    Matrix link = d.matrix();
    std::vector<bool> active(n, true);
    UnionFind uf(n);
    for (std::size_t clusters = n; clusters > k; --clusters) {
        std::size_t bi = n;
        std::size_t bj = n;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j)
                if (active[j] && link(i, j) < best) {
                    best = link(i, j);
                    bi = i;
                    bj = j;
                }
        }
        // bi < bj, so bi stays the representative.
        for (std::size_t x = 0; x < n; ++x) {
            if (!active[x] || x == bi || x == bj) continue;
            const double merged = linkage == Linkage::single ? std::min(link(bi, x), link(bj, x))
                                                             : std::max(link(bi, x), link(bj, x));
            link(bi, x) = link(x, bi) = merged;
        }
        active[bj] = false;
        uf.unite(bi, bj);
    }
    std::vector<std::size_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = uf.find(i);
    return Partition::from_ids(ids);
}

// Must-link entries set to 0 and cannot-link entries to max(D) + 1, then
// additive all-pairs shortest paths, then cannot-link entries re-inflated so
// zero-cost detours cannot cancel them.
inline DissimilarityMatrix constrained_matrix(const DissimilarityMatrix& d, const ConstraintSet& cs) {
    const std::size_t n = d.size();
    if (cs.n_items() != n && !cs.empty()) throw InputError("constraint set does not match matrix size");
    const double inflated = d.max_value() + 1.0;
    Matrix m = d.matrix();
    for (const auto& p : cs.similar()) m(p.first, p.second) = m(p.second, p.first) = 0.0;
    for (const auto& p : cs.dissimilar()) m(p.first, p.second) = m(p.second, p.first) = inflated;
    if (!cs.empty()) {
        for (std::size_t via = 0; via < n; ++via)
            for (std::size_t i = 0; i < n; ++i) {
                const double iv = m(i, via);
                for (std::size_t j = 0; j < n; ++j)
                    if (iv + m(via, j) < m(i, j)) m(i, j) = iv + m(via, j);
            }
        for (const auto& p : cs.dissimilar()) m(p.first, p.second) = m(p.second, p.first) = inflated;
    }
    return DissimilarityMatrix(std::move(m));
}

inline Partition ccl(const DissimilarityMatrix& d, const ConstraintSet& cs, std::size_t k) {
    check_k(k, d.size());
    return hac(constrained_matrix(d, cs), k, Linkage::complete);
}

inline Partition ssl(const DissimilarityMatrix& d, const ConstraintSet& cs, std::size_t k) {
    check_k(k, d.size());
    return hac(constrained_matrix(d, cs), k, Linkage::single);
}

struct KSuggestion {
    std::size_t k;
    double gap;
};

// Candidate cluster counts ranked by the drop between consecutive cut
// magnitudes (sorted descending): k scores m[k-2] - m[k-1], for
// 2 ≤ k ≤ N-1. Ties rank the smaller k first.
inline std::vector<KSuggestion> suggest_k(const VatResult& vat) {
    std::vector<double> m = vat.cut_magnitudes;
    std::sort(m.begin(), m.end(), std::greater<>());
    std::vector<KSuggestion> out;
    for (std::size_t k = 2; k + 1 <= vat.size(); ++k) {
        if (k - 1 >= m.size()) break;
        out.push_back({k, m[k - 2] - m[k - 1]});
    }
    std::stable_sort(out.begin(), out.end(), [](const KSuggestion& a, const KSuggestion& b) { return a.gap > b.gap; });
    return out;
}

} // namespace conivat
