#pragma once

// Partition accuracy under optimal label alignment, and the repeated-run
// benchmark protocol (comparison table, variant ablation, constraint sweep).

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "conivat/clustering.hpp"
#include "conivat/constraints.hpp"
#include "conivat/data.hpp"
#include "conivat/metric.hpp"
#include "conivat/rng.hpp"
#include "conivat/vat.hpp"

namespace conivat {

// Minimum-cost perfect assignment on a square integer cost matrix
// (Kuhn-Munkres with potentials, O(n³)). Returns row → column.
inline std::vector<std::size_t> min_cost_assignment(const std::vector<std::vector<long long>>& cost) {
    const std::size_t n = cost.size();
    constexpr long long inf = std::numeric_limits<long long>::max() / 4;
    // 1-based potentials; column 0 is the virtual start.
    std::vector<long long> u(n + 1, 0), v(n + 1, 0);
    std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<long long> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = match[j0];
            long long delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const long long cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n);
    for (std::size_t j = 1; j <= n; ++j)
        if (match[j] != 0) row_to_col[match[j] - 1] = j - 1;
    return row_to_col;
}

// Compresses arbitrary non-negative ids to 0..m-1 (order of first appearance).
inline std::vector<std::size_t> dense_ids(const std::vector<int>& ids, std::size_t& count) {
    std::vector<std::size_t> out(ids.size());
    std::vector<long long> seen;
    int maxid = -1;
    for (int id : ids) maxid = std::max(maxid, id);
    seen.assign(static_cast<std::size_t>(maxid + 1), -1);
    count = 0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        auto& slot = seen[static_cast<std::size_t>(ids[i])];
        if (slot < 0) slot = static_cast<long long>(count++);
        out[i] = static_cast<std::size_t>(slot);
    }
    return out;
}

// 100 × (objects whose predicted cluster maps to their true class) / N,
// maximized over one-to-one cluster-to-class assignments. Surplus clusters
// or classes stay unmatched and contribute nothing.
inline double partition_accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
    if (predicted.size() != truth.size())
        throw InputError("partition_accuracy: " + std::to_string(predicted.size()) + " predictions for " +
                         std::to_string(truth.size()) + " labels");
    if (truth.empty()) throw InputError("partition_accuracy: empty input");
    for (std::size_t i = 0; i < truth.size(); ++i)
        if (predicted[i] < 0 || truth[i] < 0) throw InputError("partition_accuracy: labels must be non-negative");
    std::size_t kp = 0;
    std::size_t kt = 0;
    const auto p = dense_ids(predicted, kp);
    const auto t = dense_ids(truth, kt);
    const std::size_t dim = std::max(kp, kt);
    std::vector<std::vector<long long>> overlap(dim, std::vector<long long>(dim, 0));
    for (std::size_t i = 0; i < p.size(); ++i) ++overlap[p[i]][t[i]];
    const auto n = static_cast<long long>(truth.size());
    std::vector<std::vector<long long>> cost(dim, std::vector<long long>(dim));
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b) cost[a][b] = n - overlap[a][b];
    const auto assign = min_cost_assignment(cost);
    long long matched = 0;
    for (std::size_t a = 0; a < dim; ++a) matched += overlap[a][assign[a]];
    return 100.0 * static_cast<double>(matched) / static_cast<double>(n);
}

inline double partition_accuracy(const Partition& predicted, const std::vector<int>& truth) {
    return partition_accuracy(predicted.labels(), truth);
}

enum class Algorithm { conivat, ivat, metric_ivat, mtd_vat, hac_sl, hac_cl, ccl, ssl };

inline constexpr Algorithm all_algorithms[] = {Algorithm::conivat, Algorithm::ivat,   Algorithm::metric_ivat,
                                               Algorithm::mtd_vat, Algorithm::hac_sl, Algorithm::hac_cl,
                                               Algorithm::ccl,     Algorithm::ssl};

// Columns of the comparison table.
inline constexpr Algorithm comparison_algorithms[] = {Algorithm::conivat, Algorithm::ivat,   Algorithm::ssl,
                                                      Algorithm::ccl,     Algorithm::hac_sl, Algorithm::hac_cl};

inline constexpr Algorithm ablation_algorithms[] = {Algorithm::ivat, Algorithm::metric_ivat, Algorithm::mtd_vat,
                                                    Algorithm::conivat};

inline std::string_view algorithm_name(Algorithm a) {
    switch (a) {
    case Algorithm::conivat: return "conivat";
    case Algorithm::ivat: return "ivat";
    case Algorithm::metric_ivat: return "metric-ivat";
    case Algorithm::mtd_vat: return "mtd-vat";
    case Algorithm::hac_sl: return "hac-sl";
    case Algorithm::hac_cl: return "hac-cl";
    case Algorithm::ccl: return "ccl";
    case Algorithm::ssl: return "ssl";
    }
    return "?";
}

inline Algorithm parse_algorithm(std::string_view s) {
    for (Algorithm a : all_algorithms)
        if (algorithm_name(a) == s) return a;
    throw InputError("unknown algorithm: " + std::string(s));
}

inline bool uses_constraints(Algorithm a) {
    return a != Algorithm::ivat && a != Algorithm::hac_sl && a != Algorithm::hac_cl;
}

// Clusters `data` (normalized) into k groups with one algorithm. `cs` must
// already be sanitized.
inline Partition run_algorithm(Algorithm alg, const FeatureMatrix& data, const ConstraintSet& cs, std::size_t k,
                               const LearnConfig& cfg) {
    auto vat_variant = [&](Variant v) { return cut_mst(conivat_pipeline(data, cs, cfg, v).vat, k); };
    switch (alg) {
    case Algorithm::conivat: return vat_variant(Variant::conivat);
    case Algorithm::ivat: return vat_variant(Variant::ivat);
    case Algorithm::metric_ivat: return vat_variant(Variant::metric_ivat);
    case Algorithm::mtd_vat: return vat_variant(Variant::mtd_vat);
    case Algorithm::hac_sl: return hac(euclidean_dissimilarity(data), k, Linkage::single);
    case Algorithm::hac_cl: return hac(euclidean_dissimilarity(data), k, Linkage::complete);
    case Algorithm::ccl: return ccl(euclidean_dissimilarity(data), cs, k);
    case Algorithm::ssl: return ssl(euclidean_dissimilarity(data), cs, k);
    }
    throw InputError("unknown algorithm");
}

struct Dataset {
    std::string name;
    FeatureMatrix data;  // normalized, labeled
};

struct Protocol {
    std::size_t n_constraints = 30;
    std::size_t runs = 10;
    std::uint64_t seed = 0;
    LearnConfig learn{};
};

struct BenchmarkRow {
    std::string algorithm;
    std::string dataset;
    std::size_t k = 0;
    std::size_t n_constraints = 0;
    std::vector<double> pa;                   // per run, percent
    std::vector<double> seconds;              // per run, wall time
    std::vector<std::uint64_t> run_seeds;     // constraint seed per run

    double mean_pa() const { return mean(pa); }
    double mean_seconds() const { return mean(seconds); }

private:
    static double mean(const std::vector<double>& v) {
        if (v.empty()) return 0.0;
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    }
};

struct BenchmarkReport {
    std::vector<BenchmarkRow> rows;

    const BenchmarkRow& find(std::string_view algorithm, std::string_view dataset,
                             std::optional<std::size_t> n_constraints = std::nullopt) const {
        for (const auto& r : rows)
            if (r.algorithm == algorithm && r.dataset == dataset &&
                (!n_constraints || r.n_constraints == *n_constraints))
                return r;
        throw InputError("no benchmark row for " + std::string(algorithm) + " on " + std::string(dataset));
    }
};

// Constraint draw for one run: a random half of the indices forms the pool,
// `count` pairs are drawn from it, then sanitized.
inline ConstraintSet draw_run_constraints(const FeatureMatrix& data, std::size_t count, std::uint64_t run_seed) {
    std::vector<std::size_t> pool(data.size());
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    Rng rng(derive_seed(run_seed, 0));
    rng.shuffle(pool);
    pool.resize(data.size() / 2);
    return sanitize(generate_from_labels(data, count, derive_seed(run_seed, 1), pool));
}

// Each run draws fresh constraints (seed derived from the master seed and
// the run index, shared by all algorithms and datasets within that run),
// clusters at the true class count, and scores PA on all N objects.
inline BenchmarkReport run_benchmark(const std::vector<Dataset>& datasets, const std::vector<Algorithm>& algorithms,
                                     const Protocol& protocol) {
    BenchmarkReport report;
    for (const auto& ds : datasets) {
        if (!ds.data.has_labels()) throw InputError("dataset " + ds.name + " has no labels");
        const std::size_t k = ds.data.class_count();
        const std::size_t first = report.rows.size();
        for (Algorithm alg : algorithms)
            report.rows.push_back({std::string(algorithm_name(alg)), ds.name, k, protocol.n_constraints, {}, {}, {}});
        for (std::size_t run = 0; run < protocol.runs; ++run) {
            const std::uint64_t run_seed = derive_seed(protocol.seed, run);
            const ConstraintSet cs = draw_run_constraints(ds.data, protocol.n_constraints, run_seed);
            for (std::size_t a = 0; a < algorithms.size(); ++a) {
                const auto start = std::chrono::steady_clock::now();
                const Partition part = run_algorithm(algorithms[a], ds.data, cs, k, protocol.learn);
                const auto stop = std::chrono::steady_clock::now();
                auto& row = report.rows[first + a];
                row.pa.push_back(partition_accuracy(part, ds.data.labels()));
                row.seconds.push_back(std::chrono::duration<double>(stop - start).count());
                row.run_seeds.push_back(run_seed);
            }
        }
    }
    return report;
}

inline BenchmarkReport run_ablation(const Dataset& dataset, const Protocol& protocol) {
    return run_benchmark({dataset}, {std::begin(ablation_algorithms), std::end(ablation_algorithms)}, protocol);
}

inline BenchmarkReport run_constraint_sweep(const Dataset& dataset, const std::vector<std::size_t>& counts,
                                            const Protocol& protocol) {
    BenchmarkReport report;
    for (std::size_t count : counts) {
        Protocol p = protocol;
        p.n_constraints = count;
        auto part = run_benchmark({dataset}, {Algorithm::conivat}, p);
        report.rows.insert(report.rows.end(), part.rows.begin(), part.rows.end());
    }
    return report;
}

// CSV report. Wall times are left out so identical seeds give identical
// files; print_report_table shows them.
inline void write_report_csv(const BenchmarkReport& report, std::ostream& out) {
    out << "algorithm,dataset,k,n_constraints,runs,mean_pa,pa_per_run,run_seeds\n";
    std::ostringstream num;
    num << std::fixed << std::setprecision(4);
    auto fmt = [&](double v) {
        num.str({});
        num << v;
        return num.str();
    };
    for (const auto& r : report.rows) {
        out << r.algorithm << ',' << r.dataset << ',' << r.k << ',' << r.n_constraints << ',' << r.pa.size() << ','
            << fmt(r.mean_pa()) << ',';
        for (std::size_t i = 0; i < r.pa.size(); ++i) out << (i ? ";" : "") << fmt(r.pa[i]);
        out << ',';
        for (std::size_t i = 0; i < r.run_seeds.size(); ++i) out << (i ? ";" : "") << r.run_seeds[i];
        out << '\n';
    }
}

inline void print_report_table(const BenchmarkReport& report, std::ostream& out) {
    out << std::left << std::setw(12) << "algorithm" << std::setw(14) << "dataset" << std::right << std::setw(4)
        << "k" << std::setw(8) << "cons" << std::setw(6) << "runs" << std::setw(10) << "PA(%)" << std::setw(12)
        << "time(s)" << '\n';
    for (const auto& r : report.rows) {
        out << std::left << std::setw(12) << r.algorithm << std::setw(14) << r.dataset << std::right << std::setw(4)
            << r.k << std::setw(8) << r.n_constraints << std::setw(6) << r.pa.size() << std::setw(10) << std::fixed
            << std::setprecision(1) << r.mean_pa() << std::setw(12) << std::setprecision(4) << r.mean_seconds()
            << '\n';
    }
    out.unsetf(std::ios::fixed);
}

} // namespace conivat
