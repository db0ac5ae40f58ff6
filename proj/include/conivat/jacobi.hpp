#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "conivat/error.hpp"
#include "conivat/matrix.hpp"

namespace conivat {

struct SymmetricEigen {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column k pairs with values[k]; a = V diag(values) Vᵀ
};

struct JacobiOptions {
    double off_tolerance = 1e-11;  // relative to ‖a‖_F
    int max_sweeps = 100;
};

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Only the upper
// triangle is read. Throws ComputeError when the sweep cap is reached.
inline SymmetricEigen jacobi_eigen(const Matrix& a, JacobiOptions opts = {}) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw InputError("eigendecomposition needs a square matrix");
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = a(i, j);
    Matrix v = Matrix::identity(n);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * m(i, j) * m(i, j);
        return std::sqrt(s);
    };
    const double scale = frobenius_norm(m);
    const double threshold = opts.off_tolerance * (scale > 0.0 ? scale : 1.0);

    int sweep = 0;
    for (double off = off_norm(); off > threshold; off = off_norm()) {
        if (sweep++ >= opts.max_sweeps)
            throw ComputeError("Jacobi eigensolver did not converge: off-diagonal residual " + std::to_string(off) +
                               " after " + std::to_string(opts.max_sweeps) + " sweeps");
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = m(p, q);
                if (apq == 0.0) continue;
                const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m(k, p);
                    const double mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m(p, k);
                    const double mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
                m(p, q) = m(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return m(x, x) < m(y, y); });
    SymmetricEigen out{std::vector<double>(n), Matrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = m(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

// V diag(f(λ)) Vᵀ, symmetrized.
template <class F>
Matrix reassemble(const SymmetricEigen& eig, F&& f) {
    const std::size_t n = eig.values.size();
    Matrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = f(eig.values[k]);
        if (lam == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const double vi = lam * eig.vectors(i, k);
            for (std::size_t j = i; j < n; ++j) out(i, j) += vi * eig.vectors(j, k);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) out(i, j) = out(j, i);
    return out;
}

} // namespace conivat
