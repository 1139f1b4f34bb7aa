#include "glare/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

namespace glare {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return mag * std::cos(2.0 * M_PI * u2);
}

void SceneSpec::validate() const {
    if (width <= 0 || height <= 0) throw SceneSpecError("scene dimensions must be positive");
    if (channels != 1 && channels != 3) throw SceneSpecError("scene channels must be 1 or 3");
    if (background < 0.0) throw SceneSpecError("background must be >= 0");
    for (const Rect& r : dark_patches) {
        try {
            r.validate_inside(width, height);
        } catch (const Error&) {
            throw SceneSpecError("dark patch outside scene bounds");
        }
    }
    for (const DiskSource& s : sources) {
        if (s.intensity < 0.0) throw SceneSpecError("source intensity must be >= 0");
        if (!(s.radius > 0.0)) throw SceneSpecError("source radius must be > 0");
        if (s.cx - s.radius < 0 || s.cy - s.radius < 0 ||
            s.cx + s.radius > width || s.cy + s.radius > height)
            throw SceneSpecError("source disk outside scene bounds");
        for (const Rect& r : dark_patches) {
            const double nx = std::clamp(s.cx, static_cast<double>(r.x), static_cast<double>(r.x + r.w));
            const double ny = std::clamp(s.cy, static_cast<double>(r.y), static_cast<double>(r.y + r.h));
            if (std::hypot(s.cx - nx, s.cy - ny) < s.radius)
                throw SceneSpecError("source disk overlaps a dark patch");
        }
    }
    for (const LabeledRect& o : objects) {
        try {
            o.rect.validate_inside(width, height);
        } catch (const Error&) {
            throw SceneSpecError("object rectangle outside scene bounds");
        }
    }
}

std::string SceneSpec::to_json() const {
    nlohmann::json j;
    j["width"] = width;
    j["height"] = height;
    j["channels"] = channels;
    j["background"] = background;
    j["seed"] = seed;
    j["dark_patches"] = nlohmann::json::array();
    for (const Rect& r : dark_patches)
        j["dark_patches"].push_back({{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}});
    j["sources"] = nlohmann::json::array();
    for (const DiskSource& s : sources)
        j["sources"].push_back({{"cx", s.cx}, {"cy", s.cy}, {"radius", s.radius}, {"intensity", s.intensity}});
    j["objects"] = nlohmann::json::array();
    for (const LabeledRect& o : objects)
        j["objects"].push_back({{"x", o.rect.x}, {"y", o.rect.y}, {"w", o.rect.w}, {"h", o.rect.h},
                                {"label", o.label}, {"intensity", o.intensity}});
    return j.dump(2);
}

SceneSpec SceneSpec::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    SceneSpec spec;
    spec.width = j.at("width").get<int>();
    spec.height = j.at("height").get<int>();
    spec.channels = j.value("channels", 1);
    spec.background = j.value("background", 0.0);
    spec.seed = j.value("seed", std::uint64_t{0});
    for (const auto& r : j.value("dark_patches", nlohmann::json::array()))
        spec.dark_patches.push_back(Rect{r.at("x"), r.at("y"), r.at("w"), r.at("h")});
    for (const auto& s : j.value("sources", nlohmann::json::array()))
        spec.sources.push_back(DiskSource{s.at("cx"), s.at("cy"), s.at("radius"), s.at("intensity")});
    for (const auto& o : j.value("objects", nlohmann::json::array())) {
        LabeledRect lr;
        lr.rect = Rect{o.at("x"), o.at("y"), o.at("w"), o.at("h")};
        lr.label = o.value("label", std::string{});
        lr.intensity = o.value("intensity", 0.0);
        spec.objects.push_back(std::move(lr));
    }
    spec.validate();
    return spec;
}

SceneSpec SceneSpec::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

RadianceMap make_scene(const SceneSpec& spec) {
    spec.validate();
    RadianceMap img(spec.width, spec.height, spec.channels, spec.background);

    for (const LabeledRect& o : spec.objects)
        for (int y = o.rect.y; y < o.rect.y + o.rect.h; ++y)
            for (int x = o.rect.x; x < o.rect.x + o.rect.w; ++x)
                for (int c = 0; c < spec.channels; ++c)
                    img.at(x, y, c) = o.intensity;

    // Disk membership by pixel-centre distance.
    for (const DiskSource& s : spec.sources)
        for (int y = 0; y < spec.height; ++y)
            for (int x = 0; x < spec.width; ++x)
                if (std::hypot(x + 0.5 - s.cx, y + 0.5 - s.cy) <= s.radius)
                    for (int c = 0; c < spec.channels; ++c)
                        img.at(x, y, c) = s.intensity;

    for (const Rect& r : spec.dark_patches)
        for (int y = r.y; y < r.y + r.h; ++y)
            for (int x = r.x; x < r.x + r.w; ++x)
                for (int c = 0; c < spec.channels; ++c)
                    img.at(x, y, c) = 0.0;

    return img;
}

std::string DegradationRecord::to_json() const {
    nlohmann::json j;
    j["gsf"] = nlohmann::json::parse(params.to_json());
    j["ceiling"] = ceiling;
    j["noise_sigma"] = noise_sigma;
    j["seed"] = seed;
    std::string mask(clip_mask.size(), '0');
    for (std::size_t i = 0; i < clip_mask.size(); ++i)
        if (clip_mask[i]) mask[i] = '1';
    j["clip_mask"] = mask;
    return j.dump();
}

std::pair<RadianceMap, DegradationRecord> degrade(const RadianceMap& scene,
                                                  const GsfParams& params,
                                                  double ceiling,
                                                  double noise_sigma,
                                                  std::uint64_t seed) {
    if (!(ceiling > 0.0)) throw ArgumentError("degrade: ceiling must be > 0");
    GsfKernel kernel = rasterize_kernel(params, scene.width(), scene.height());
    RadianceMap glared = simulate_glare(scene, kernel);

    DegradationRecord rec;
    rec.params = params;
    rec.ceiling = ceiling;
    rec.noise_sigma = noise_sigma;
    rec.seed = seed;
    rec.pristine = scene;
    rec.clip_mask.resize(glared.size());

    Rng rng(seed);
    for (std::size_t i = 0; i < glared.size(); ++i) {
        double v = glared.data()[i];
        if (noise_sigma > 0.0) v += noise_sigma * ceiling * rng.gaussian();
        v = std::max(v, 0.0);
        rec.clip_mask[i] = v >= ceiling;
        glared.data()[i] = std::min(v, ceiling);
    }
    return {std::move(glared), std::move(rec)};
}

ExposureStack make_exposure_stack(const RadianceMap& scene,
                                  const std::vector<double>& times,
                                  double ceiling,
                                  double noise_sigma,
                                  std::uint64_t seed) {
    if (times.empty()) throw ArgumentError("make_exposure_stack: no exposure times");
    if (!(ceiling > 0.0)) throw ArgumentError("make_exposure_stack: ceiling must be > 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw StackError("exposure times must be strictly increasing");
    for (double v : scene.data())
        if (v * times.front() >= ceiling)
            throw StackError("shortest exposure saturates: violates stack invariant");

    Rng rng(seed);
    ExposureStack stack;
    for (double t : times) {
        ExposureFrame f;
        f.exposure_t = t;
        f.saturation_level = ceiling;
        f.image = RadianceMap(scene.width(), scene.height(), scene.channels());
        for (std::size_t i = 0; i < scene.size(); ++i) {
            double v = scene.data()[i] * t;
            if (noise_sigma > 0.0) v += noise_sigma * ceiling * rng.gaussian();
            f.image.data()[i] = std::clamp(v, 0.0, ceiling);
        }
        stack.frames.push_back(std::move(f));
    }
    return stack;
}

}  // namespace glare
