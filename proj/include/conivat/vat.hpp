#pragma once

// VAT reordering (Prim's MST traversal), the minimax path-distance transform,
// similar-pair imposition, and the four assessment pipelines built on them.

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "conivat/constraints.hpp"
#include "conivat/data.hpp"
#include "conivat/dissimilarity.hpp"
#include "conivat/error.hpp"
#include "conivat/metric.hpp"

namespace conivat {

struct VatResult {
    std::vector<std::size_t> order;        // order[t] = original index shown at position t
    DissimilarityMatrix reordered;         // reordered(s, t) = input(order[s], order[t])
    std::vector<std::size_t> mst_parent;   // mst_parent[t] = position that admitted t; mst_parent[0] == 0
    std::vector<double> cut_magnitudes;    // cut_magnitudes[t - 1] = weight of the edge admitting t

    std::size_t size() const noexcept { return order.size(); }
};

inline DissimilarityMatrix permute(const DissimilarityMatrix& d, const std::vector<std::size_t>& order) {
    const std::size_t n = d.size();
    Matrix out(n, n);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = 0; t < n; ++t) out(s, t) = d(order[s], order[t]);
    return DissimilarityMatrix(std::move(out));
}

// Starts from the row holding the first (row-major) maximum entry, then
// repeatedly admits the unvisited object closest to the visited set. Ties
// go to the lowest candidate index, then the lowest anchor index.
inline VatResult vat_reorder(const DissimilarityMatrix& d) {
    const std::size_t n = d.size();
    if (n == 0) throw InputError("VAT needs at least one object");

    std::size_t seed = 0;
    double top = -1.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (d(i, j) > top) {
                top = d(i, j);
                seed = i;
            }

    VatResult out;
    out.order.reserve(n);
    out.mst_parent.assign(n, 0);
    out.cut_magnitudes.reserve(n - 1);

    std::vector<std::size_t> position(n, n);
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> anchor(n, n);
    std::vector<bool> visited(n, false);

    auto admit = [&](std::size_t v) {
        visited[v] = true;
        position[v] = out.order.size();
        out.order.push_back(v);
        for (std::size_t u = 0; u < n; ++u) {
            if (visited[u]) continue;
            const double w = d(v, u);
            if (w < best[u] || (w == best[u] && v < anchor[u])) {
                best[u] = w;
                anchor[u] = v;
            }
        }
    };

    admit(seed);
    for (std::size_t t = 1; t < n; ++t) {
        std::size_t next = n;
        for (std::size_t u = 0; u < n; ++u)
            if (!visited[u] && (next == n || best[u] < best[next])) next = u;
        out.mst_parent[t] = position[anchor[next]];
        out.cut_magnitudes.push_back(best[next]);
        admit(next);
    }
    out.reordered = permute(d, out.order);
    return out;
}

// Minimax path distances (smallest achievable largest edge over all paths),
// computed in VAT order by the single-pass recursion along the MST and
// returned in the input's index order.
inline DissimilarityMatrix minimax_transform(const VatResult& vat) {
    const std::size_t n = vat.size();
    const auto& dstar = vat.reordered;
    Matrix mm(n, n);
    for (std::size_t r = 1; r < n; ++r) {
        const std::size_t j = vat.mst_parent[r];
        const double link = dstar(r, j);
        for (std::size_t c = 0; c < r; ++c) {
            const double v = c == j ? link : std::max(link, mm(j, c));
            mm(r, c) = mm(c, r) = v;
        }
    }
    Matrix out(n, n);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = 0; t < n; ++t) out(vat.order[s], vat.order[t]) = mm(s, t);
    return DissimilarityMatrix(std::move(out));
}

inline DissimilarityMatrix minimax_transform(const DissimilarityMatrix& d) { return minimax_transform(vat_reorder(d)); }

// Zeroes d(i, j) for every similar pair.
inline DissimilarityMatrix impose_similar(const DissimilarityMatrix& d, const ConstraintSet& cs) {
    Matrix m = d.matrix();
    for (const auto& p : cs.similar()) {
        if (p.second >= d.size())
            throw InputError("similar constraint (" + std::to_string(p.first) + ", " + std::to_string(p.second) +
                             ") out of range for " + std::to_string(d.size()) + " objects");
        m(p.first, p.second) = m(p.second, p.first) = 0.0;
    }
    return DissimilarityMatrix(std::move(m));
}

enum class Variant {
    ivat,         // Euclidean → minimax → VAT
    metric_ivat,  // learned metric → minimax → VAT
    mtd_vat,      // Euclidean → zero similar pairs → minimax → VAT
    conivat,      // learned metric → zero similar pairs → minimax → VAT
};

inline constexpr Variant all_variants[] = {Variant::ivat, Variant::metric_ivat, Variant::mtd_vat, Variant::conivat};

inline std::string_view variant_name(Variant v) {
    switch (v) {
    case Variant::ivat: return "ivat";
    case Variant::metric_ivat: return "metric-ivat";
    case Variant::mtd_vat: return "mtd-vat";
    case Variant::conivat: return "conivat";
    }
    return "?";
}

inline Variant parse_variant(std::string_view s) {
    for (Variant v : all_variants)
        if (variant_name(v) == s) return v;
    throw InputError("unknown variant: " + std::string(s) + " (expected ivat, metric-ivat, mtd-vat or conivat)");
}

inline bool uses_metric(Variant v) { return v == Variant::metric_ivat || v == Variant::conivat; }
inline bool uses_imposition(Variant v) { return v == Variant::mtd_vat || v == Variant::conivat; }

struct PipelineResult {
    VatResult vat;                      // VAT of the transformed matrix
    DissimilarityMatrix transformed;    // minimax matrix, input index order
    ConstraintSet constraints;          // sanitized constraints actually used
    std::optional<LearnResult> learning;
};

// Sanitizes `cs` (closure + conflict removal) and runs the chosen variant.
// Data are expected to be normalized already.
inline PipelineResult conivat_pipeline(const FeatureMatrix& data, const ConstraintSet& cs, const LearnConfig& cfg,
                                       Variant variant) {
    if (cs.n_items() != data.size() && !(cs.empty() && variant == Variant::ivat))
        throw InputError("constraint set size " + std::to_string(cs.n_items()) + " does not match dataset size " +
                         std::to_string(data.size()));
    PipelineResult out;
    out.constraints = variant == Variant::ivat ? ConstraintSet(data.size()) : sanitize(cs);

    DissimilarityMatrix d;
    if (uses_metric(variant)) {
        out.learning = learn_metric(data, out.constraints, cfg);
        d = dissimilarity_under_metric(data, out.learning->metric);
    } else {
        d = euclidean_dissimilarity(data);
    }
    if (uses_imposition(variant)) d = impose_similar(d, out.constraints);
    out.transformed = minimax_transform(d);
    out.vat = vat_reorder(out.transformed);
    return out;
}

} // namespace conivat
