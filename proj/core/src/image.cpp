#include "glare/image.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace glare {

RadianceMap::RadianceMap(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels),
      data_(static_cast<std::size_t>(width) * height * channels, fill) {
    if (width <= 0 || height <= 0 || (channels != 1 && channels != 3))
        throw DimensionError("RadianceMap dimensions must be positive with 1 or 3 channels");
}

RadianceMap::RadianceMap(int width, int height, int channels, std::vector<double> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
    if (width <= 0 || height <= 0 || (channels != 1 && channels != 3))
        throw DimensionError("RadianceMap dimensions must be positive with 1 or 3 channels");
    if (data_.size() != static_cast<std::size_t>(width) * height * channels)
        throw DimensionError("RadianceMap buffer size does not match dimensions");
}

double RadianceMap::max_value() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, v);
    return m;
}

double RadianceMap::sum() const {
    double s = 0.0;
    for (double v : data_) s += v;
    return s;
}

RadianceMap RadianceMap::channel(int c) const {
    if (c < 0 || c >= channels_) throw ArgumentError("channel index out of range");
    RadianceMap out(width_, height_, 1);
    for (int y = 0; y < height_; ++y)
        for (int x = 0; x < width_; ++x)
            out.at(x, y) = at(x, y, c);
    return out;
}

RadianceMap RadianceMap::from_channels(const std::vector<RadianceMap>& planes) {
    if (planes.empty()) throw ArgumentError("from_channels: no planes");
    if (planes.size() != 1 && planes.size() != 3)
        throw ArgumentError("from_channels: expected 1 or 3 planes");
    const RadianceMap& p0 = planes.front();
    RadianceMap out(p0.width(), p0.height(), static_cast<int>(planes.size()));
    for (std::size_t c = 0; c < planes.size(); ++c) {
        if (!planes[c].same_shape(p0) || planes[c].channels() != 1)
            throw DimensionError("from_channels: mismatched plane shapes");
        for (int y = 0; y < p0.height(); ++y)
            for (int x = 0; x < p0.width(); ++x)
                out.at(x, y, static_cast<int>(c)) = planes[c].at(x, y);
    }
    return out;
}

void RadianceMap::validate() const {
    if (data_.size() != static_cast<std::size_t>(width_) * height_ * channels_)
        throw DimensionError("RadianceMap buffer size does not match dimensions");
    for (double v : data_) {
        if (!std::isfinite(v)) throw FormatError("RadianceMap contains a non-finite value");
        if (v < 0.0) throw FormatError("RadianceMap contains a negative value");
    }
}

void RadianceMap::clamp_non_negative() {
    for (double& v : data_) v = std::max(v, 0.0);
}

CfaPattern cfa_from_string(const std::string& s) {
    if (s == "RGGB") return CfaPattern::RGGB;
    if (s == "BGGR") return CfaPattern::BGGR;
    if (s == "GRBG") return CfaPattern::GRBG;
    if (s == "GBRG") return CfaPattern::GBRG;
    throw ArgumentError("unknown CFA pattern: " + s);
}

std::string to_string(CfaPattern p) {
    switch (p) {
        case CfaPattern::RGGB: return "RGGB";
        case CfaPattern::BGGR: return "BGGR";
        case CfaPattern::GRBG: return "GRBG";
        case CfaPattern::GBRG: return "GBRG";
    }
    return "RGGB";
}

void RawFrame::validate() const {
    if (width <= 0 || height <= 0) throw DimensionError("RawFrame dimensions must be positive");
    if (width % 2 != 0 || height % 2 != 0)
        throw DimensionError("RawFrame dimensions must be even (full CFA tiles)");
    if (bit_depth < 8 || bit_depth > 16) throw ArgumentError("RawFrame bit depth must be in [8,16]");
    if (samples.size() != static_cast<std::size_t>(width) * height)
        throw DimensionError("RawFrame buffer size does not match dimensions");
    const double ceil = static_cast<double>((1u << bit_depth) - 1u);
    for (double v : samples)
        if (!(v >= 0.0 && v <= ceil))
            throw FormatError("RawFrame sample out of range for bit depth");
}

void Rect::validate_inside(int img_w, int img_h) const {
    if (w <= 0 || h <= 0) throw ArgumentError("Rect extents must be positive");
    if (x < 0 || y < 0 || x + w > img_w || y + h > img_h)
        throw ArgumentError("Rect lies outside the image");
}

namespace {

// Channel index (0=R,1=G,2=B) of the CFA site at (x, y).
int cfa_channel(CfaPattern p, int x, int y) {
    const int col = x & 1, row = y & 1;
    switch (p) {
        case CfaPattern::RGGB: return row == 0 ? (col == 0 ? 0 : 1) : (col == 0 ? 1 : 2);
        case CfaPattern::BGGR: return row == 0 ? (col == 0 ? 2 : 1) : (col == 0 ? 1 : 0);
        case CfaPattern::GRBG: return row == 0 ? (col == 0 ? 1 : 0) : (col == 0 ? 2 : 1);
        case CfaPattern::GBRG: return row == 0 ? (col == 0 ? 1 : 2) : (col == 0 ? 0 : 1);
    }
    return 1;
}

}  // namespace

RadianceMap demosaic_bilinear(const RawFrame& raw) {
    raw.validate();
    const int W = raw.width, H = raw.height;
    RadianceMap out(W, H, 3);

    // Average of same-channel neighbours at the given offsets; offsets
    // falling off the image are dropped (edge replication via renormalized
    // weights).
    auto avg = [&](int x, int y, int c, std::initializer_list<std::pair<int, int>> offs) {
        double s = 0.0;
        int n = 0;
        for (auto [dx, dy] : offs) {
            const int xx = x + dx, yy = y + dy;
            if (xx < 0 || yy < 0 || xx >= W || yy >= H) continue;
            if (cfa_channel(raw.cfa, xx, yy) != c) continue;
            s += raw.at(xx, yy);
            ++n;
        }
        return n > 0 ? s / n : 0.0;
    };

    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            const int site = cfa_channel(raw.cfa, x, y);
            for (int c = 0; c < 3; ++c) {
                double v;
                if (c == site) {
                    v = raw.at(x, y);
                } else if (c == 1) {
                    // green at a red/blue site: 4-connected cross
                    v = avg(x, y, 1, {{-1, 0}, {1, 0}, {0, -1}, {0, 1}});
                } else if (site == 1) {
                    // red/blue at a green site: axial neighbours
                    v = avg(x, y, c, {{-1, 0}, {1, 0}, {0, -1}, {0, 1}});
                } else {
                    // red at blue site or blue at red site: diagonals
                    v = avg(x, y, c, {{-1, -1}, {1, -1}, {-1, 1}, {1, 1}});
                }
                out.at(x, y, c) = v;
            }
        }
    }
    return out;
}

RadianceMap white_balance(const RadianceMap& img, const Rect& white_patch) {
    if (img.channels() != 3) throw ArgumentError("white_balance requires a 3-channel image");
    white_patch.validate_inside(img.width(), img.height());

    double mean[3] = {0.0, 0.0, 0.0};
    const double n = static_cast<double>(white_patch.w) * white_patch.h;
    for (int y = white_patch.y; y < white_patch.y + white_patch.h; ++y)
        for (int x = white_patch.x; x < white_patch.x + white_patch.w; ++x)
            for (int c = 0; c < 3; ++c)
                mean[c] += img.at(x, y, c);
    for (double& m : mean) m /= n;

    for (int c = 0; c < 3; ++c)
        if (!(mean[c] > 0.0))
            throw DegeneratePatchError("white patch has zero mean in a channel");

    const double gain[3] = {mean[1] / mean[0], 1.0, mean[1] / mean[2]};
    RadianceMap out(img.width(), img.height(), 3);
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            for (int c = 0; c < 3; ++c)
                out.at(x, y, c) = img.at(x, y, c) * gain[c];
    return out;
}

}  // namespace glare
