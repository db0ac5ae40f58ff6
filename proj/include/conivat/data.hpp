#pragma once

// Datasets: CSV ingestion, min-max normalization, and the synthetic
// generators used by the benchmark harness.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "conivat/error.hpp"
#include "conivat/matrix.hpp"
#include "conivat/rng.hpp"

namespace conivat {

using Labels = std::vector<int>;

// N×p feature rows with optional ground-truth class ids.
class FeatureMatrix {
public:
    FeatureMatrix() = default;

    explicit FeatureMatrix(Matrix points, std::optional<Labels> labels = std::nullopt,
                           std::vector<std::string> names = {})
        : points_(std::move(points)), labels_(std::move(labels)), names_(std::move(names)) {
        if (points_.rows() < 1 || points_.cols() < 1)
            throw InputError("feature matrix needs at least one row and one column");
        for (double v : points_.values())
            if (!std::isfinite(v)) throw InputError("feature matrix contains a non-finite entry");
        if (labels_) {
            if (labels_->size() != points_.rows())
                throw InputError("label count does not match row count");
            for (int l : *labels_)
                if (l < 0) throw InputError("labels must be non-negative");
        }
        if (!names_.empty() && names_.size() != points_.cols())
            throw InputError("feature name count does not match column count");
    }

    std::size_t size() const noexcept { return points_.rows(); }
    std::size_t dim() const noexcept { return points_.cols(); }
    const Matrix& points() const noexcept { return points_; }
    std::span<const double> point(std::size_t i) const noexcept { return points_.row(i); }
    bool has_labels() const noexcept { return labels_.has_value(); }
    const Labels& labels() const {
        if (!labels_) throw InputError("dataset has no labels");
        return *labels_;
    }
    const std::optional<Labels>& maybe_labels() const noexcept { return labels_; }
    const std::vector<std::string>& names() const noexcept { return names_; }

    // Number of distinct class ids; 0 when unlabeled.
    std::size_t class_count() const {
        if (!labels_) return 0;
        Labels sorted = *labels_;
        std::sort(sorted.begin(), sorted.end());
        return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
    }

    bool operator==(const FeatureMatrix&) const = default;

private:
    Matrix points_;
    std::optional<Labels> labels_;
    std::vector<std::string> names_;
};

struct LoadResult {
    FeatureMatrix data;
    std::size_t dropped_rows = 0;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        cells.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

// Finite real or nothing. "NaN", "inf", "" and "?" all fail.
inline std::optional<double> parse_real(std::string_view s) {
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

inline std::optional<int> parse_nonneg_int(std::string_view s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0) return std::nullopt;
    return v;
}

} // namespace detail

// Reads a comma-separated file. The first row is a header when none of its
// cells parse as numbers. `label_column` selects the class column by header
// name or by 0-based index; numeric non-negative labels are kept as-is, any
// other label values are mapped to ids in order of first appearance. Rows
// with a missing or unparseable feature cell (or a missing label) are
// dropped and counted.
inline LoadResult load_csv(const std::string& path, std::optional<std::string> label_column = std::nullopt) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read file: " + path);

    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (detail::trim(line).empty()) continue;
        rows.push_back(detail::split_csv_line(line));
    }
    if (rows.empty()) throw InputError("no rows in " + path);

    std::vector<std::string> header;
    const bool has_header = std::none_of(rows.front().begin(), rows.front().end(),
                                         [](const std::string& c) { return detail::parse_real(c).has_value(); });
    if (has_header) {
        header = rows.front();
        rows.erase(rows.begin());
    }
    const std::size_t arity = has_header ? header.size() : (rows.empty() ? 0 : rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (rows[r].size() != arity)
            throw InputError(path + ": row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                             " cells, expected " + std::to_string(arity));

    std::optional<std::size_t> label_idx;
    if (label_column) {
        auto it = std::find(header.begin(), header.end(), *label_column);
        if (it != header.end()) {
            label_idx = static_cast<std::size_t>(it - header.begin());
        } else if (auto idx = detail::parse_nonneg_int(*label_column); idx && *idx < static_cast<int>(arity)) {
            label_idx = static_cast<std::size_t>(*idx);
        } else {
            throw InputError("label column not found: " + *label_column);
        }
    }
    const std::size_t p = arity - (label_idx ? 1 : 0);
    if (p < 1) throw InputError(path + ": no feature columns");

    std::vector<double> values;
    std::vector<std::string> raw_labels;
    std::size_t kept = 0;
    std::size_t dropped = 0;
    for (const auto& row : rows) {
        std::vector<double> feats;
        feats.reserve(p);
        bool ok = true;
        for (std::size_t c = 0; c < arity && ok; ++c) {
            if (label_idx && c == *label_idx) continue;
            auto v = detail::parse_real(row[c]);
            if (!v) ok = false;
            else feats.push_back(*v);
        }
        if (ok && label_idx && (row[*label_idx].empty() || row[*label_idx] == "?")) ok = false;
        if (!ok) {
            ++dropped;
            continue;
        }
        values.insert(values.end(), feats.begin(), feats.end());
        if (label_idx) raw_labels.push_back(row[*label_idx]);
        ++kept;
    }
    if (kept == 0) throw InputError(path + ": zero usable rows");

    Matrix points(kept, p);
    std::copy(values.begin(), values.end(), points.values().begin());

    std::optional<Labels> labels;
    if (label_idx) {
        Labels ids;
        ids.reserve(kept);
        const bool numeric = std::all_of(raw_labels.begin(), raw_labels.end(), [](const std::string& s) {
            return detail::parse_nonneg_int(s).has_value();
        });
        std::map<std::string, int> seen;
        for (const auto& s : raw_labels) {
            if (numeric) {
                ids.push_back(*detail::parse_nonneg_int(s));
            } else {
                auto [it, inserted] = seen.try_emplace(s, static_cast<int>(seen.size()));
                ids.push_back(it->second);
            }
        }
        labels = std::move(ids);
    }

    std::vector<std::string> names;
    if (has_header)
        for (std::size_t c = 0; c < arity; ++c)
            if (!label_idx || c != *label_idx) names.push_back(header[c]);

    return {FeatureMatrix(std::move(points), std::move(labels), std::move(names)), dropped};
}

// Per-column (x - min) / (max - min); constant columns become zero.
inline FeatureMatrix normalize_minmax(const FeatureMatrix& data) {
    Matrix out = data.points();
    for (std::size_t c = 0; c < out.cols(); ++c) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t r = 0; r < out.rows(); ++r) {
            lo = std::min(lo, out(r, c));
            hi = std::max(hi, out(r, c));
        }
        const double range = hi - lo;
        for (std::size_t r = 0; r < out.rows(); ++r) out(r, c) = range > 0.0 ? (out(r, c) - lo) / range : 0.0;
    }
    return FeatureMatrix(std::move(out), data.maybe_labels(), data.names());
}

struct GaussianMixtureSpec {
    std::vector<std::size_t> sizes;                  // points per cluster
    std::vector<std::array<double, 2>> centers;      // cluster means
    std::vector<double> sigmas;                      // isotropic std-devs
    std::size_t bridge_points = 0;
};

// 2-D isotropic Gaussian clusters, followed by `bridge_points` points placed
// on segments between two distinct random centers (t ~ U[0.3, 0.7]) and
// labeled by their nearest center. A single-cluster mixture has no bridges.
inline FeatureMatrix gen_gaussian_mixture(std::uint64_t seed, const GaussianMixtureSpec& spec) {
    const std::size_t k = spec.sizes.size();
    if (k < 1) throw InputError("gaussian mixture needs at least one cluster");
    if (spec.centers.size() != k || spec.sigmas.size() != k)
        throw InputError("gaussian mixture: sizes, centers and sigmas must have equal length");
    if (spec.bridge_points > 0 && k < 2) throw InputError("bridge points need at least two clusters");

    std::size_t n = spec.bridge_points;
    for (auto s : spec.sizes) n += s;
    Matrix points(n, 2);
    Labels labels(n);
    Rng rng(seed);
    std::size_t row = 0;
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t i = 0; i < spec.sizes[c]; ++i, ++row) {
            points(row, 0) = rng.normal(spec.centers[c][0], spec.sigmas[c]);
            points(row, 1) = rng.normal(spec.centers[c][1], spec.sigmas[c]);
            labels[row] = static_cast<int>(c);
        }
    for (std::size_t b = 0; b < spec.bridge_points; ++b, ++row) {
        const auto from = static_cast<std::size_t>(rng.below(k));
        auto to = static_cast<std::size_t>(rng.below(k - 1));
        if (to >= from) ++to;
        const double t = rng.uniform(0.3, 0.7);
        const double x = spec.centers[from][0] + t * (spec.centers[to][0] - spec.centers[from][0]);
        const double y = spec.centers[from][1] + t * (spec.centers[to][1] - spec.centers[from][1]);
        points(row, 0) = x;
        points(row, 1) = y;
        std::size_t nearest = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            const double dx = x - spec.centers[c][0];
            const double dy = y - spec.centers[c][1];
            if (dx * dx + dy * dy < best) {
                best = dx * dx + dy * dy;
                nearest = c;
            }
        }
        labels[row] = static_cast<int>(nearest);
    }
    if (n == 0) throw InputError("gaussian mixture produced no points");
    return FeatureMatrix(std::move(points), std::move(labels), {"x", "y"});
}

// Half-ellipse arcs, alternately opening down and up and shifted along x so
// neighbouring arcs interleave, with Gaussian jitter.
inline FeatureMatrix gen_banana(std::uint64_t seed, std::size_t arcs, std::size_t per_arc, double jitter = 0.1) {
    if (arcs < 1) throw InputError("banana generator needs at least one arc");
    if (per_arc < 1) throw InputError("banana generator needs at least one point per arc");
    constexpr double rx = 1.0;
    constexpr double ry = 0.7;
    constexpr double shift = 1.0;
    constexpr double lift = 0.35;
    Matrix points(arcs * per_arc, 2);
    Labels labels(arcs * per_arc);
    Rng rng(seed);
    std::size_t row = 0;
    for (std::size_t a = 0; a < arcs; ++a) {
        const bool flipped = a % 2 == 1;
        const double cx = shift * static_cast<double>(a);
        const double cy = flipped ? lift : 0.0;
        for (std::size_t i = 0; i < per_arc; ++i, ++row) {
            const double theta = rng.uniform(0.0, std::numbers::pi);
            const double sy = flipped ? -1.0 : 1.0;
            points(row, 0) = cx + rx * std::cos(theta) + rng.normal(0.0, jitter);
            points(row, 1) = cy + sy * ry * std::sin(theta) + rng.normal(0.0, jitter);
            labels[row] = static_cast<int>(a);
        }
    }
    return FeatureMatrix(std::move(points), std::move(labels), {"x", "y"});
}

// Four-cluster mixture with bridge points; sizes chosen so N = 400 with the
// default 12 bridges.
inline GaussianMixtureSpec synth1_spec(std::size_t bridge_points = 12) {
    GaussianMixtureSpec spec;
    const std::size_t per = (400 - std::min<std::size_t>(bridge_points, 400)) / 4;
    spec.sizes = {per, per, per, per};
    spec.centers = {{{0.0, 0.0}}, {{4.0, 0.0}}, {{0.0, 4.0}}, {{4.0, 4.0}}};
    spec.sigmas = {0.35, 0.35, 0.45, 0.45};
    spec.bridge_points = bridge_points;
    return spec;
}

inline FeatureMatrix gen_synth1(std::uint64_t seed, std::size_t bridge_points = 12) {
    return gen_gaussian_mixture(seed, synth1_spec(bridge_points));
}

inline FeatureMatrix gen_synth2(std::uint64_t seed) { return gen_banana(seed, 3, 250); }

// Writes points (and labels as a trailing `label` column) with round-trip
// precision.
inline void write_csv(const FeatureMatrix& data, std::ostream& out) {
    std::vector<std::string> names = data.names();
    if (names.empty())
        for (std::size_t c = 0; c < data.dim(); ++c) names.push_back("x" + std::to_string(c));
    for (std::size_t c = 0; c < names.size(); ++c) out << (c ? "," : "") << names[c];
    if (data.has_labels()) out << ",label";
    out << '\n';
    std::ostringstream cell;
    cell.precision(17);
    for (std::size_t r = 0; r < data.size(); ++r) {
        for (std::size_t c = 0; c < data.dim(); ++c) {
            cell.str({});
            cell << data.points()(r, c);
            out << (c ? "," : "") << cell.str();
        }
        if (data.has_labels()) out << ',' << data.labels()[r];
        out << '\n';
    }
}

} // namespace conivat
