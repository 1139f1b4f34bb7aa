#include "glare/hdr.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "glare/image_io.hpp"

namespace glare {

void SourceSpec::validate() const {
    if (!(intensity_phi > 0.0)) throw ArgumentError("SourceSpec: intensity_phi must be > 0");
    if (!(aperture_d > 0.0)) throw ArgumentError("SourceSpec: aperture_d must be > 0");
}

double aperture_flux(const SourceSpec& spec) {
    spec.validate();
    return spec.intensity_phi * M_PI * spec.aperture_d * spec.aperture_d / 4.0;
}

double captured_light(double phi_a, double t) {
    if (t < 0.0) throw ArgumentError("captured_light: t must be >= 0");
    return phi_a * t;
}

void ExposureStack::validate() const {
    if (frames.empty()) throw ArgumentError("empty exposure stack");
    if (frames.size() < 2) throw StackError("exposure stack needs at least 2 frames");
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const ExposureFrame& f = frames[i];
        if (!(f.exposure_t > 0.0)) throw StackError("exposure times must be > 0");
        if (!(f.saturation_level > 0.0)) throw StackError("saturation level must be > 0");
        if (i > 0 && !(f.exposure_t > frames[i - 1].exposure_t))
            throw StackError("exposure times must be strictly increasing");
        if (!f.image.same_shape(frames.front().image))
            throw StackError("exposure frames have mismatched dimensions");
        for (double v : f.image.data())
            if (v > f.saturation_level)
                throw StackError("frame value exceeds its saturation level");
    }
    for (double v : frames.front().image.data())
        if (v >= frames.front().saturation_level)
            throw StackError("shortest-exposure frame contains saturated pixels");
}

double hat_weight(double v, double saturation_level) {
    if (v >= 0.98 * saturation_level) return 0.0;
    return std::max(0.0, 1.0 - std::abs(2.0 * v / saturation_level - 1.0));
}

RadianceMap merge_hdr(const ExposureStack& stack) {
    stack.validate();
    const RadianceMap& first = stack.frames.front().image;
    RadianceMap out(first.width(), first.height(), first.channels());

    const std::size_t n = first.size();
    for (std::size_t i = 0; i < n; ++i) {
        double num = 0.0, den = 0.0;
        bool all_saturated = true;
        double best_unsat = 0.0;
        for (const ExposureFrame& f : stack.frames) {
            const double v = f.image.data()[i];
            const bool saturated = v >= 0.98 * f.saturation_level;
            if (!saturated) {
                all_saturated = false;
                best_unsat = v / f.exposure_t;  // longest unsaturated exposure wins
            }
            const double w = hat_weight(v, f.saturation_level);
            num += w * (v / f.exposure_t);
            den += w;
        }
        if (den > 0.0) {
            out.data()[i] = num / den;
        } else if (all_saturated) {
            const ExposureFrame& s = stack.frames.front();
            out.data()[i] = s.image.data()[i] / s.exposure_t;
        } else {
            // every weight vanished without saturation (hat is 0 at v = 0):
            // fall back to the best-SNR unsaturated estimate
            out.data()[i] = best_unsat;
        }
    }
    out.clamp_non_negative();
    return out;
}

ExposureStack load_stack_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    nlohmann::json j;
    in >> j;
    if (!j.is_array()) throw FormatError("stack manifest must be a JSON array");

    const auto base = std::filesystem::path(path).parent_path();
    ExposureStack stack;
    for (const auto& entry : j) {
        ExposureFrame f;
        std::filesystem::path p = entry.at("path").get<std::string>();
        if (p.is_relative()) p = base / p;
        f.image = load_image(p.string());
        f.exposure_t = entry.at("exposure_t").get<double>();
        f.saturation_level = entry.at("saturation_level").get<double>();
        stack.frames.push_back(std::move(f));
    }
    return stack;
}

}  // namespace glare
