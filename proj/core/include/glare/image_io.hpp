#pragma once

#include <string>

#include "glare/image.hpp"

namespace glare {

/// Load a radiance map. Dispatches on extension: .pfm (float, lossless)
/// or .png (16-bit linear with `<path>.json` sidecar `{"max": <float>}`).
RadianceMap load_image(const std::string& path);

/// Save a radiance map, dispatching the same way. PFM round trips
/// bit-exactly; PNG quantizes by the recorded max value.
void save_image(const RadianceMap& img, const std::string& path);

// Format-specific entry points.
RadianceMap load_pfm(const std::string& path);
void save_pfm(const RadianceMap& img, const std::string& path);

RadianceMap load_png16(const std::string& path);
void save_png16(const RadianceMap& img, const std::string& path);

}  // namespace glare
