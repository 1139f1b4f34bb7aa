#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "glare/gsf.hpp"
#include "glare/image.hpp"

namespace glare {

/// Pixel split into saturated (S) and unsaturated (U) sets. The mask is
/// joint across channels: a pixel clipping in any channel is saturated.
struct SaturationPartition {
    std::vector<bool> mask;   // true = saturated, one entry per pixel
    double threshold = 0.0;   // absolute value used
    int saturated_count = 0;
    int unsaturated_count = 0;
};

/// Dark-pixel subset D of U with the blurred observation there, which the
/// dark channel prior reads as the local stray-light level.
struct DarkPixelSet {
    std::vector<int> indices;            // pixel indices into the image, D subset of U
    std::vector<double> stray_estimate;  // |D| x channels, interleaved
    double blur_sigma = 0.0;
};

struct WienerConfig {
    double nsr = 1e-6;  // noise-to-signal power ratio, >= 0
};

struct DeglareOptions {
    double sat_threshold_frac = 0.98;
    std::optional<double> ceiling;    // known sensor max; image max when absent
    double dark_sigma = 2.0;
    int dark_patch = 7;
    double dark_quantile = 0.05;
    double lambda1 = -1.0;            // < 0: auto, 1e-3 * mean of Y_u(D)
    WienerConfig wiener;
    int max_inner_iterations = 500;
    double inner_tol = 1e-7;
};

struct DeglareReport {
    int saturated_count = 0;
    int unsaturated_count = 0;
    int dark_count = 0;
    int inner_iterations = 0;
    double final_objective = 0.0;
    bool lower_bound_active = false;
    // Signed minima of the constraint expressions at exit; success means
    // unsat_residual/deconv >= -tolerance and stray >= 0.
    double unsat_residual_min = 0.0;
    double stray_min = 0.0;
    double deconv_min = 0.0;
    double tolerance = 0.0;

    std::string to_json() const;
};

SaturationPartition detect_saturation(const RadianceMap& Y, double threshold_frac,
                                      std::optional<double> ceiling = std::nullopt);

DarkPixelSet estimate_dark_stray(const RadianceMap& Y, const SaturationPartition& part,
                                 double sigma, int patch, double quantile);

/// Constrained estimate of the latent radiance on S:
/// minimizes the dark-pixel data term with an L1 penalty on the residual
/// stray variable, subject to X_s >= clipped observation and the stray
/// variable >= 0. Returns a full-size map that is zero off S.
RadianceMap estimate_saturated_radiance(const RadianceMap& Y, const SaturationPartition& part,
                                        const DarkPixelSet& dark, const GsfKernel& kernel,
                                        double lambda1, const DeglareOptions& opts,
                                        DeglareReport* report = nullptr);

/// Frequency-domain Wiener filter: conj(G) * FT(Y) / (|G|^2 + nsr).
RadianceMap wiener_deconvolve(const RadianceMap& Y, const GsfKernel& kernel,
                              const WienerConfig& cfg);

/// Full saturated-pixel-aware pipeline: partition, dark-pixel stray
/// estimation, constrained recovery of the saturated radiance, then Wiener
/// deconvolution of the composite that carries the glare-spread of the
/// recovered radiance on S (the estimated unclipped observation) and the
/// observation on U. With no saturated pixels this is exactly the plain
/// Wiener filter.
std::pair<RadianceMap, DeglareReport> deglare(const RadianceMap& Y, const GsfKernel& kernel,
                                              const DeglareOptions& opts = {});

}  // namespace glare
