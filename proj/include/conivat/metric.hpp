#pragma once

// Mahalanobis metric learning from pairwise constraints: maximize the summed
// learned distance over dissimilar pairs subject to the summed squared
// distance over similar pairs staying ≤ 1 and the metric staying PSD.
// Solved by gradient ascent with alternating projections onto the two
// constraint sets.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "conivat/constraints.hpp"
#include "conivat/data.hpp"
#include "conivat/dissimilarity.hpp"
#include "conivat/error.hpp"
#include "conivat/jacobi.hpp"
#include "conivat/matrix.hpp"

namespace conivat {

// p×p symmetric positive semi-definite weight matrix.
class MetricMatrix {
public:
    static constexpr double symmetry_tolerance = 1e-10;
    static constexpr double eigen_tolerance = 1e-8;

    MetricMatrix() = default;

    explicit MetricMatrix(Matrix a) : a_(std::move(a)) {
        if (a_.rows() != a_.cols() || a_.rows() == 0) throw InputError("metric matrix must be square and non-empty");
        if (asymmetry(a_) > symmetry_tolerance) throw InputError("metric matrix is not symmetric");
        const auto eig = jacobi_eigen(a_);
        if (eig.values.front() < -eigen_tolerance * std::max(1.0, std::abs(eig.values.back())))
            throw InputError("metric matrix is not positive semi-definite (min eigenvalue " +
                             std::to_string(eig.values.front()) + ")");
    }

    static MetricMatrix identity(std::size_t p) { return MetricMatrix(Matrix::identity(p)); }

    std::size_t dim() const noexcept { return a_.rows(); }
    const Matrix& matrix() const noexcept { return a_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return a_(i, j); }

private:
    Matrix a_;
};

struct LearnConfig {
    double alpha = 0.1;            // gradient step
    double epsilon = 0.001;        // stop when |Δ objective| < epsilon
    int max_iters = 100;           // outer gradient iterations
    int max_projections = 10000;   // alternating projection passes per outer iteration
    double min_dist_guard = 1e-12; // dissimilar pairs closer than this are left out of the gradient

    void validate() const {
        if (!(alpha > 0.0) || !(epsilon > 0.0) || max_iters <= 0 || max_projections <= 0 || !(min_dist_guard > 0.0))
            throw InputError("metric learning parameters must all be positive");
    }
};

struct LearnReport {
    std::vector<double> objective_trace;
    int iterations_used = 0;
    double c1_residual = 0.0;       // max(0, Σ_similar d² − 1) at the end
    double min_eigenvalue = 1.0;
    bool identity_fallback = false; // no learning: a constraint set was empty
    bool converged = false;         // stopped on epsilon rather than max_iters
    int projection_cap_hits = 0;    // passes that exhausted max_projections and were rescaled
};

inline double mahalanobis_distance(const MetricMatrix& a, std::span<const double> x, std::span<const double> y) {
    if (x.size() != a.dim() || y.size() != a.dim())
        throw InputError("mahalanobis_distance: dimension mismatch");
    std::vector<double> v(x.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = x[i] - y[i];
    return std::sqrt(std::max(0.0, quadratic_form(a.matrix(), v)));
}

// Difference vectors of the constrained pairs, cached once per learning run.
class ConstraintGeometry {
public:
    ConstraintGeometry(const FeatureMatrix& data, const ConstraintSet& cs)
        : p_(data.dim()), similar_scatter_(data.dim(), data.dim()) {
        if (cs.n_items() != data.size()) throw InputError("constraint set does not match dataset size");
        auto diff = [&](const IndexPair& pr) {
            std::vector<double> v(p_);
            for (std::size_t c = 0; c < p_; ++c) v[c] = data.point(pr.first)[c] - data.point(pr.second)[c];
            return v;
        };
        for (const auto& pr : cs.similar()) add_outer(similar_scatter_, diff(pr), 1.0);
        dissimilar_.reserve(cs.dissimilar().size());
        for (const auto& pr : cs.dissimilar()) dissimilar_.push_back(diff(pr));
        has_similar_ = !cs.similar().empty();
    }

    std::size_t dim() const noexcept { return p_; }
    // M_S = Σ_similar v vᵀ, so Σ_similar d_A² = <A, M_S>_F.
    const Matrix& similar_scatter() const noexcept { return similar_scatter_; }
    const std::vector<std::vector<double>>& dissimilar_diffs() const noexcept { return dissimilar_; }
    bool has_similar() const noexcept { return has_similar_; }

    double similar_sq_sum(const Matrix& a) const { return frobenius_dot(a, similar_scatter_); }

    double objective(const Matrix& a) const {
        double g = 0.0;
        for (const auto& v : dissimilar_) g += std::sqrt(std::max(0.0, quadratic_form(a, v)));
        return g;
    }

    Matrix gradient(const Matrix& a, double min_dist_guard) const {
        Matrix grad(p_, p_);
        for (const auto& v : dissimilar_) {
            const double d = std::sqrt(std::max(0.0, quadratic_form(a, v)));
            if (d < min_dist_guard) continue;
            add_outer(grad, v, 1.0 / (2.0 * d));
        }
        return grad;
    }

private:
    std::size_t p_;
    Matrix similar_scatter_;
    std::vector<std::vector<double>> dissimilar_;
    bool has_similar_ = false;
};

// Σ over dissimilar pairs of d_A (first power).
inline double objective_g(const Matrix& a, const FeatureMatrix& data, const ConstraintSet& cs) {
    return ConstraintGeometry(data, cs).objective(a);
}

// ∂g/∂A = Σ v vᵀ / (2 d_A(v)); pairs with d_A below the guard are skipped.
inline Matrix gradient_g(const Matrix& a, const FeatureMatrix& data, const ConstraintSet& cs,
                         double min_dist_guard = LearnConfig{}.min_dist_guard) {
    return ConstraintGeometry(data, cs).gradient(a, min_dist_guard);
}

// Frobenius projection onto the half-space {A : <A, M_S> ≤ 1}.
inline Matrix project_c1(const Matrix& a, const Matrix& similar_scatter) {
    const double norm_sq = frobenius_dot(similar_scatter, similar_scatter);
    if (norm_sq == 0.0) return a;
    const double excess = frobenius_dot(a, similar_scatter) - 1.0;
    if (excess <= 0.0) return a;
    Matrix out = a;
    auto ov = out.values();
    auto mv = similar_scatter.values();
    const double step = excess / norm_sq;
    for (std::size_t k = 0; k < ov.size(); ++k) ov[k] -= step * mv[k];
    return out;
}

inline Matrix project_c1(const Matrix& a, const FeatureMatrix& data, const ConstraintSet& cs) {
    return project_c1(a, ConstraintGeometry(data, cs).similar_scatter());
}

// Nearest PSD matrix in Frobenius norm: clamp negative eigenvalues to zero.
inline Matrix project_psd(const Matrix& a) {
    if (a.rows() != a.cols()) throw InputError("project_psd needs a square matrix");
    double scale = 1.0;
    for (double v : a.values()) scale = std::max(scale, std::abs(v));
    if (asymmetry(a) > 1e-8 * scale) throw InputError("project_psd needs a symmetric matrix");
    const auto eig = jacobi_eigen(a);
    if (eig.values.front() >= 0.0) return a;
    return reassemble(eig, [](double lam) { return std::max(0.0, lam); });
}

namespace detail {

// Alternating projections onto C1 then C2 until <A, M_S> ≤ 1 holds after the
// PSD step. If the pass cap is reached, A is scaled into C1 (scaling keeps
// it PSD) and the hit is counted.
inline Matrix project_feasible(Matrix a, const ConstraintGeometry& geom, const LearnConfig& cfg, LearnReport& report) {
    constexpr double c1_tolerance = 1e-9;
    for (int pass = 0; pass < cfg.max_projections; ++pass) {
        a = project_psd(project_c1(a, geom.similar_scatter()));
        symmetrize(a);
        if (geom.similar_sq_sum(a) <= 1.0 + c1_tolerance) return a;
    }
    symmetrize(a);
    ++report.projection_cap_hits;
    const double s = geom.similar_sq_sum(a);
    if (s > 1.0) a *= 1.0 / s;
    return a;
}

} // namespace detail

struct LearnResult {
    MetricMatrix metric;
    LearnReport report;
};

// Gradient ascent from A = I with a constant step, re-projecting onto the
// feasible set after each step. Returns the identity untouched when either
// constraint set is empty.
inline LearnResult learn_metric(const FeatureMatrix& data, const ConstraintSet& cs, const LearnConfig& cfg = {}) {
    cfg.validate();
    const std::size_t p = data.dim();
    LearnReport report;
    if (cs.similar().empty() || cs.dissimilar().empty()) {
        report.identity_fallback = true;
        return {MetricMatrix::identity(p), report};
    }
    const ConstraintGeometry geom(data, cs);

    Matrix a = detail::project_feasible(Matrix::identity(p), geom, cfg, report);
    double previous = geom.objective(a);
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        Matrix step = geom.gradient(a, cfg.min_dist_guard);
        step *= cfg.alpha;
        a += step;
        symmetrize(a);
        a = detail::project_feasible(std::move(a), geom, cfg, report);
        const double g = geom.objective(a);
        if (!std::isfinite(g)) throw ComputeError("metric learning produced a non-finite objective");
        report.objective_trace.push_back(g);
        if (std::abs(g - previous) < cfg.epsilon) {
            report.converged = true;
            break;
        }
        previous = g;
    }
    report.iterations_used = static_cast<int>(report.objective_trace.size());
    report.c1_residual = std::max(0.0, geom.similar_sq_sum(a) - 1.0);
    report.min_eigenvalue = jacobi_eigen(a).values.front();
    return {MetricMatrix(std::move(a)), report};
}

// D[i][j] = d_A(x_i, x_j) from the quadratic form.
inline DissimilarityMatrix dissimilarity_under_metric(const FeatureMatrix& data, const MetricMatrix& a) {
    if (a.dim() != data.dim()) throw InputError("metric dimension does not match data dimension");
    const std::size_t n = data.size();
    const std::size_t p = data.dim();
    Matrix d(n, n);
    std::vector<double> v(p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t c = 0; c < p; ++c) v[c] = data.point(i)[c] - data.point(j)[c];
            d(i, j) = d(j, i) = std::sqrt(std::max(0.0, quadratic_form(a.matrix(), v)));
        }
    return DissimilarityMatrix(std::move(d));
}

} // namespace conivat
