#include "glare/filters.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace glare {

namespace {

std::vector<double> gaussian_taps(double sigma) {
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> taps(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        taps[i + radius] = std::exp(-0.5 * (i / sigma) * (i / sigma));
        sum += taps[i + radius];
    }
    for (double& t : taps) t /= sum;
    return taps;
}

int reflect(int i, int n) {
    if (n == 1) return 0;
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - i - 1;
    }
    return i;
}

}  // namespace

RadianceMap gaussian_blur(const RadianceMap& img, double sigma) {
    if (!(sigma > 0.0)) throw ArgumentError("gaussian_blur: sigma must be > 0");
    const auto taps = gaussian_taps(sigma);
    const int radius = static_cast<int>(taps.size()) / 2;
    const int W = img.width(), H = img.height(), C = img.channels();

    RadianceMap tmp(W, H, C), out(W, H, C);
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x)
            for (int c = 0; c < C; ++c) {
                double s = 0.0;
                for (int k = -radius; k <= radius; ++k)
                    s += taps[k + radius] * img.at(reflect(x + k, W), y, c);
                tmp.at(x, y, c) = s;
            }
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x)
            for (int c = 0; c < C; ++c) {
                double s = 0.0;
                for (int k = -radius; k <= radius; ++k)
                    s += taps[k + radius] * tmp.at(x, reflect(y + k, H), c);
                out.at(x, y, c) = s;
            }
    return out;
}

RadianceMap unsharp_mask(const RadianceMap& img, double sigma, double amount) {
    RadianceMap blurred = gaussian_blur(img, sigma);
    RadianceMap out(img.width(), img.height(), img.channels());
    for (std::size_t i = 0; i < img.size(); ++i)
        out.data()[i] = std::max(0.0, img.data()[i] + amount * (img.data()[i] - blurred.data()[i]));
    return out;
}

}  // namespace glare
