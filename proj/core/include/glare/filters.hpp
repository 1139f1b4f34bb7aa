#pragma once

#include "glare/image.hpp"

namespace glare {

/// Separable Gaussian blur with reflected borders. Kernel radius is
/// ceil(3*sigma).
RadianceMap gaussian_blur(const RadianceMap& img, double sigma);

/// Classic unsharp mask: img + amount * (img - blur(img, sigma)),
/// clamped to >= 0. Operates on encoded or linear values alike; used as
/// the encoded-domain glare-reduction baseline.
RadianceMap unsharp_mask(const RadianceMap& img, double sigma, double amount);

}  // namespace glare
