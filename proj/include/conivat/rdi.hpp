#pragma once

// Grayscale reordered-dissimilarity images: black = similar, white = far.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "conivat/dissimilarity.hpp"
#include "conivat/error.hpp"
#include "conivat/vat.hpp"

namespace conivat {

struct RdiImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;  // row-major

    std::uint8_t operator()(std::size_t row, std::size_t col) const noexcept { return pixels[row * width + col]; }
};

enum class Scale { linear, rank };

inline Scale parse_scale(const std::string& s) {
    if (s == "linear") return Scale::linear;
    if (s == "rank") return Scale::rank;
    throw InputError("unknown scale: " + s + " (expected linear or rank)");
}

inline RdiImage render(const DissimilarityMatrix& d, Scale scale) {
    const std::size_t n = d.size();
    RdiImage img{n, n, std::vector<std::uint8_t>(n * n, 0)};
    if (scale == Scale::linear) {
        const double top = d.max_value();
        if (top <= 0.0) return img;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                img.pixels[i * n + j] = static_cast<std::uint8_t>(std::lround(255.0 * d(i, j) / top));
        return img;
    }
    // Rank scaling over the distinct off-diagonal values.
    std::vector<double> distinct;
    distinct.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) distinct.push_back(d(i, j));
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.empty()) return img;
    const double steps = static_cast<double>(distinct.size() - 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto rank = static_cast<double>(
                std::lower_bound(distinct.begin(), distinct.end(), d(i, j)) - distinct.begin());
            double level;
            if (steps > 0.0) level = 255.0 * rank / steps;
            else level = d(i, j) > 0.0 ? 255.0 : 0.0;  // single distinct value
            img.pixels[i * n + j] = static_cast<std::uint8_t>(std::lround(level));
        }
    return img;
}

inline RdiImage render(const VatResult& vat, Scale scale) { return render(vat.reordered, scale); }

// Binary PGM: "P5\n<w> <h>\n255\n" followed by row-major bytes.
inline void write_pgm(const RdiImage& img, std::ostream& out) {
    out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
}

inline void write_pgm(const RdiImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ComputeError("cannot open for writing: " + path);
    write_pgm(img, out);
    if (!out) throw ComputeError("write failed: " + path);
}

} // namespace conivat
