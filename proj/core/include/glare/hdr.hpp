#pragma once

#include <string>
#include <vector>

#include "glare/image.hpp"

namespace glare {

/// Point-source calibration rig: light of intensity phi behind a circular
/// aperture of diameter d (millimetres).
struct SourceSpec {
    double intensity_phi = 1.0;
    double aperture_d = 2.0;

    void validate() const;
};

/// Flux through the aperture: phi * pi * d^2 / 4.
double aperture_flux(const SourceSpec& spec);

/// Light captured in one exposure: phi_a * t.
double captured_light(double phi_a, double t);

struct ExposureFrame {
    RadianceMap image;          // linear counts, pre-merge
    double exposure_t = 0.0;    // seconds
    double saturation_level = 1.0;
};

struct ExposureStack {
    std::vector<ExposureFrame> frames;  // strictly increasing exposure_t

    void validate() const;
};

/// Debevec-style hat weight on [0, s]: max(0, 1 - |2v/s - 1|), forced to 0
/// at or above 0.98*s.
double hat_weight(double v, double saturation_level);

/// Weighted merge of an exposure stack into a single radiance map.
/// A pixel saturated in every frame falls back to the shortest-exposure
/// estimate, which the stack invariant guarantees is unsaturated.
RadianceMap merge_hdr(const ExposureStack& stack);

/// Stack manifest: JSON list of {path, exposure_t, saturation_level}.
ExposureStack load_stack_manifest(const std::string& path);

}  // namespace glare
