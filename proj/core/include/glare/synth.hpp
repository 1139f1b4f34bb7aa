#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glare/gsf.hpp"
#include "glare/hdr.hpp"
#include "glare/image.hpp"

namespace glare {

/// Portable seeded generator (xoshiro256++ with splitmix64 seeding) so
/// synthetic fixtures reproduce bitwise across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    /// Uniform in [0, 1).
    double uniform();
    /// Standard normal via Box-Muller.
    double gaussian();

private:
    std::uint64_t state_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct DiskSource {
    double cx = 0.0, cy = 0.0;  // centre, pixels
    double radius = 1.0;
    double intensity = 1.0;
};

struct LabeledRect {
    Rect rect;
    std::string label;
    double intensity = 0.0;
};

struct SceneSpec {
    int width = 0, height = 0;
    int channels = 1;
    double background = 0.0;
    std::vector<Rect> dark_patches;       // forced to exactly 0
    std::vector<DiskSource> sources;      // bright disks
    std::vector<LabeledRect> objects;     // metric-harness ground truth
    std::uint64_t seed = 0;

    void validate() const;

    std::string to_json() const;
    static SceneSpec from_json(const std::string& text);
    static SceneSpec load(const std::string& path);
};

/// Everything needed to reproduce a degraded image bit-for-bit and to
/// score a restoration against ground truth.
struct DegradationRecord {
    GsfParams params;
    double ceiling = 0.0;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    std::vector<bool> clip_mask;   // true where pre-clip value >= ceiling
    RadianceMap pristine;

    std::string to_json() const;  // mask + parameters; pristine saved separately
};

RadianceMap make_scene(const SceneSpec& spec);

/// Forward degradation: glare, seeded Gaussian noise (sigma relative to
/// the ceiling), clip. The record carries the clip mask and pristine map.
std::pair<RadianceMap, DegradationRecord> degrade(const RadianceMap& scene,
                                                  const GsfParams& params,
                                                  double ceiling,
                                                  double noise_sigma = 0.0,
                                                  std::uint64_t seed = 0);

/// Frame i = clip(scene * t_i + noise, ceiling).
ExposureStack make_exposure_stack(const RadianceMap& scene,
                                  const std::vector<double>& times,
                                  double ceiling,
                                  double noise_sigma = 0.0,
                                  std::uint64_t seed = 0);

}  // namespace glare
