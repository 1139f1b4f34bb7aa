#pragma once

#include <complex>
#include <string>
#include <vector>

#include "glare/image.hpp"

namespace glare {

/// Four-parameter radially symmetric glare model: a delta spike of mass p1
/// at the origin plus a decaying tail p2*exp(-p3*r^p4).
struct GsfParams {
    double p1 = 0.9;   // delta-spike mass, > 0
    double p2 = 0.0;   // tail amplitude, >= 0
    double p3 = 1.0;   // decay rate, > 0
    double p4 = 1.0;   // decay exponent, > 0

    void validate() const;

    std::string to_json() const;
    static GsfParams from_json(const std::string& text);
    static GsfParams load(const std::string& path);
    void save(const std::string& path) const;
};

/// Tail value p2*exp(-p3*r^p4) for r > 0; p1 + p2 at r = 0 (the delta is
/// realized as a point mass on the centre pixel at rasterization).
double eval_gsf(const GsfParams& params, double r);

/// Rasterized GSF on a canvas twice the (even-rounded) image size,
/// normalized to unit sum, with the Fourier spectrum cached. The spectrum
/// is taken with the kernel centre pre-shifted to the origin so that
/// spectral products need no further phase handling.
class GsfKernel {
public:
    GsfKernel(const GsfParams& params, int base_width, int base_height);

    int base_width() const noexcept { return base_w_; }
    int base_height() const noexcept { return base_h_; }
    int canvas_width() const noexcept { return canvas_w_; }
    int canvas_height() const noexcept { return canvas_h_; }
    const GsfParams& params() const noexcept { return params_; }

    /// Centre-based spatial kernel, row-major canvas_width x canvas_height,
    /// centre at (canvas_width/2, canvas_height/2).
    const std::vector<double>& spatial() const noexcept { return spatial_; }
    /// Spectrum of the origin-shifted kernel.
    const std::vector<std::complex<double>>& spectrum() const noexcept { return spectrum_; }

    bool matches(const RadianceMap& img) const noexcept {
        return img.width() == base_w_ && img.height() == base_h_;
    }

    /// Zero-embed a single-channel image at the canvas centre.
    std::vector<double> pad(const RadianceMap& channel) const;
    /// Extract the centred base window from a canvas array.
    RadianceMap crop(const std::vector<double>& canvas) const;

private:
    GsfParams params_;
    int base_w_, base_h_;    // as given (may be odd)
    int even_w_, even_h_;    // rounded up to even
    int canvas_w_, canvas_h_;
    std::vector<double> spatial_;
    std::vector<std::complex<double>> spectrum_;
};

GsfKernel rasterize_kernel(const GsfParams& params, int width, int height);

/// Fourier-domain glare simulation: zero-pad to the kernel canvas,
/// multiply spectra, inverse transform, crop, clamp to >= 0. Multi-channel
/// inputs are processed per channel.
RadianceMap simulate_glare(const RadianceMap& l_in, const GsfKernel& kernel);

}  // namespace glare
