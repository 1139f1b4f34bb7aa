#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "glare/gsf.hpp"
#include "glare/image.hpp"
#include "glare/synth.hpp"

namespace th {

inline std::filesystem::path tmp_dir(const std::string& tag) {
    static std::uint64_t counter = 0;
    auto p = std::filesystem::temp_directory_path() /
             ("glare_tests_" + tag + "_" + std::to_string(counter++));
    std::filesystem::create_directories(p);
    return p;
}

inline glare::RadianceMap random_map(int w, int h, int c, std::uint64_t seed, double scale = 1.0) {
    glare::Rng rng(seed);
    glare::RadianceMap img(w, h, c);
    for (double& v : img.data()) v = scale * rng.uniform();
    return img;
}

// Direct spatial convolution with zero boundaries against the kernel's
// centre-based canvas raster; the independent oracle for the Fourier path.
inline glare::RadianceMap spatial_convolve(const glare::RadianceMap& img,
                                           const glare::GsfKernel& k) {
    const int W = img.width(), H = img.height();
    const int cx = k.canvas_width() / 2, cy = k.canvas_height() / 2;
    glare::RadianceMap out(W, H, img.channels());
    for (int c = 0; c < img.channels(); ++c)
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) {
                double s = 0.0;
                for (int v = 0; v < H; ++v)
                    for (int u = 0; u < W; ++u) {
                        const int kx = cx + (x - u), ky = cy + (y - v);
                        if (kx < 0 || ky < 0 || kx >= k.canvas_width() || ky >= k.canvas_height())
                            continue;
                        s += img.at(u, v, c) *
                             k.spatial()[static_cast<std::size_t>(ky) * k.canvas_width() + kx];
                    }
                out.at(x, y, c) = s;
            }
    return out;
}

inline double max_abs_diff(const glare::RadianceMap& a, const glare::RadianceMap& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

inline double rel_rmse(const glare::RadianceMap& a, const glare::RadianceMap& ref) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.data()[i] - ref.data()[i];
        num += d * d;
        den += ref.data()[i] * ref.data()[i];
    }
    return std::sqrt(num / std::max(den, 1e-300));
}

// Log-domain RMSE over the pixels where mask is true (per-pixel mask,
// applied across channels).
inline double log_rmse(const glare::RadianceMap& a, const glare::RadianceMap& ref,
                       const std::vector<bool>& mask) {
    const double eps = 1e-6 * ref.max_value();
    double s = 0.0;
    std::size_t n = 0;
    const int C = ref.channels();
    for (int y = 0; y < ref.height(); ++y)
        for (int x = 0; x < ref.width(); ++x) {
            if (!mask[static_cast<std::size_t>(y) * ref.width() + x]) continue;
            for (int c = 0; c < C; ++c) {
                const double d = std::log(a.at(x, y, c) + eps) - std::log(ref.at(x, y, c) + eps);
                s += d * d;
                ++n;
            }
        }
    return std::sqrt(s / static_cast<double>(n));
}

}  // namespace th
