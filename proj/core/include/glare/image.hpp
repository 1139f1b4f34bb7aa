#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glare/errors.hpp"

namespace glare {

/// Linear radiance image. Row-major, channel-interleaved, 1 or 3 channels.
/// Values are finite, non-negative relative radiance; arithmetic that can
/// produce small negatives must clamp before handing a map back out.
class RadianceMap {
public:
    RadianceMap() = default;
    RadianceMap(int width, int height, int channels, double fill = 0.0);
    RadianceMap(int width, int height, int channels, std::vector<double> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int channels() const noexcept { return channels_; }
    std::size_t size() const noexcept { return data_.size(); }

    double& at(int x, int y, int c = 0) {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }
    double at(int x, int y, int c = 0) const {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    double max_value() const;
    double sum() const;

    /// Single-channel view of channel c (copies).
    RadianceMap channel(int c) const;
    /// Reassemble interleaved image from per-channel planes.
    static RadianceMap from_channels(const std::vector<RadianceMap>& planes);

    /// Throws if any value is non-finite or negative, or the buffer size
    /// does not match the dimensions.
    void validate() const;
    /// Clamp negatives to zero in place.
    void clamp_non_negative();

    bool same_shape(const RadianceMap& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    int channels_ = 1;
    std::vector<double> data_;
};

enum class CfaPattern { RGGB, BGGR, GRBG, GBRG };

CfaPattern cfa_from_string(const std::string& s);
std::string to_string(CfaPattern p);

/// Undemosaiced sensor frame; integer counts stored as doubles.
struct RawFrame {
    int width = 0;
    int height = 0;
    int bit_depth = 12;  // 8..16
    CfaPattern cfa = CfaPattern::RGGB;
    std::vector<double> samples;

    double at(int x, int y) const { return samples[static_cast<std::size_t>(y) * width + x]; }
    void validate() const;
};

struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    void validate_inside(int img_w, int img_h) const;
};

/// Bilinear CFA interpolation. Known sample positions pass through
/// unchanged; output stays linear in counts.
RadianceMap demosaic_bilinear(const RawFrame& raw);

/// Per-channel gains chosen so the white-patch means of R, G, B are equal,
/// normalized to the green-channel patch mean (green gain = 1).
RadianceMap white_balance(const RadianceMap& img, const Rect& white_patch);

}  // namespace glare
