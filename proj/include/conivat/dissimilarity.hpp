#pragma once

#include <cmath>
#include <string>

#include "conivat/data.hpp"
#include "conivat/error.hpp"
#include "conivat/matrix.hpp"

namespace conivat {

// Symmetric N×N matrix with zero diagonal and finite non-negative entries.
class DissimilarityMatrix {
public:
    DissimilarityMatrix() = default;

    explicit DissimilarityMatrix(Matrix d) : d_(std::move(d)) {
        const std::size_t n = d_.rows();
        if (d_.cols() != n) throw InputError("dissimilarity matrix must be square");
        for (std::size_t i = 0; i < n; ++i) {
            if (d_(i, i) != 0.0) throw InputError("dissimilarity matrix diagonal must be zero");
            for (std::size_t j = 0; j < n; ++j) {
                const double v = d_(i, j);
                if (!std::isfinite(v) || v < 0.0)
                    throw InputError("dissimilarity entries must be finite and non-negative");
                if (j > i && std::abs(v - d_(j, i)) > 1e-12)
                    throw InputError("dissimilarity matrix is not symmetric at (" + std::to_string(i) + ", " +
                                     std::to_string(j) + ")");
            }
        }
    }

    std::size_t size() const noexcept { return d_.rows(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return d_(i, j); }
    const Matrix& matrix() const noexcept { return d_; }

    double max_value() const noexcept {
        double m = 0.0;
        for (double v : d_.values()) m = std::max(m, v);
        return m;
    }

    bool operator==(const DissimilarityMatrix&) const = default;

private:
    Matrix d_;
};

inline DissimilarityMatrix euclidean_dissimilarity(const FeatureMatrix& data) {
    const std::size_t n = data.size();
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto xi = data.point(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto xj = data.point(j);
            double s = 0.0;
            for (std::size_t c = 0; c < xi.size(); ++c) s += (xi[c] - xj[c]) * (xi[c] - xj[c]);
            d(i, j) = d(j, i) = std::sqrt(s);
        }
    }
    return DissimilarityMatrix(std::move(d));
}

} // namespace conivat
