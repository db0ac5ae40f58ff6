#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace conivat {

// Disjoint sets with path halving and union by size.
class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return true;
    }

    bool same(std::size_t a, std::size_t b) { return find(a) == find(b); }

    std::size_t size() const noexcept { return parent_.size(); }

    // Component id per element, numbered 0.. in order of first appearance.
    std::vector<std::size_t> component_ids() {
        std::vector<std::size_t> root_to_id(parent_.size(), parent_.size());
        std::vector<std::size_t> ids(parent_.size());
        std::size_t next = 0;
        for (std::size_t i = 0; i < parent_.size(); ++i) {
            const std::size_t r = find(i);
            if (root_to_id[r] == parent_.size()) root_to_id[r] = next++;
            ids[i] = root_to_id[r];
        }
        return ids;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

} // namespace conivat
