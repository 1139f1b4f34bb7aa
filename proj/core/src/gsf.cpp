#include "glare/gsf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "glare/fft.hpp"

namespace glare {

void GsfParams::validate() const {
    if (!(p1 > 0.0)) throw ParameterError("p1 must be > 0");
    if (!(p2 >= 0.0)) throw ParameterError("p2 must be >= 0");
    if (!(p3 > 0.0)) throw ParameterError("p3 must be > 0");
    if (!(p4 > 0.0)) throw ParameterError("p4 must be > 0");
}

std::string GsfParams::to_json() const {
    nlohmann::json j{{"p1", p1}, {"p2", p2}, {"p3", p3}, {"p4", p4}};
    return j.dump();
}

GsfParams GsfParams::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    GsfParams p;
    p.p1 = j.at("p1").get<double>();
    p.p2 = j.at("p2").get<double>();
    p.p3 = j.at("p3").get<double>();
    p.p4 = j.at("p4").get<double>();
    p.validate();
    return p;
}

GsfParams GsfParams::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

void GsfParams::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path);
    out << to_json() << "\n";
}

double eval_gsf(const GsfParams& params, double r) {
    if (r < 0.0) throw ArgumentError("eval_gsf: r must be >= 0");
    if (r == 0.0) return params.p1 + params.p2;
    return params.p2 * std::exp(-params.p3 * std::pow(r, params.p4));
}

GsfKernel::GsfKernel(const GsfParams& params, int base_width, int base_height)
    : params_(params), base_w_(base_width), base_h_(base_height) {
    params.validate();
    if (base_width <= 0 || base_height <= 0)
        throw ArgumentError("kernel base dimensions must be positive");
    even_w_ = base_w_ + (base_w_ & 1);
    even_h_ = base_h_ + (base_h_ & 1);
    canvas_w_ = 2 * even_w_;
    canvas_h_ = 2 * even_h_;

    const int cx = canvas_w_ / 2, cy = canvas_h_ / 2;
    spatial_.resize(static_cast<std::size_t>(canvas_w_) * canvas_h_);
    double sum = 0.0;
    for (int y = 0; y < canvas_h_; ++y) {
        for (int x = 0; x < canvas_w_; ++x) {
            double v;
            if (x == cx && y == cy) {
                v = params.p1 + params.p2;
            } else {
                const double r = std::hypot(x - cx, y - cy);
                v = params.p2 * std::exp(-params.p3 * std::pow(r, params.p4));
            }
            if (!std::isfinite(v))
                throw ParameterError("GSF rasterization produced a non-finite value");
            spatial_[static_cast<std::size_t>(y) * canvas_w_ + x] = v;
            sum += v;
        }
    }
    if (!(sum > 0.0) || !std::isfinite(sum))
        throw ParameterError("GSF rasterization has non-normalizable mass");
    for (double& v : spatial_) v /= sum;

    // Shift the centre to the origin before transforming, baking the
    // centring into the spectrum.
    std::vector<double> shifted(spatial_.size());
    for (int y = 0; y < canvas_h_; ++y)
        for (int x = 0; x < canvas_w_; ++x) {
            const int sx = (x + cx) % canvas_w_;
            const int sy = (y + cy) % canvas_h_;
            shifted[static_cast<std::size_t>(y) * canvas_w_ + x] =
                spatial_[static_cast<std::size_t>(sy) * canvas_w_ + sx];
        }
    spectrum_ = fft2(shifted, canvas_w_, canvas_h_);
}

std::vector<double> GsfKernel::pad(const RadianceMap& channel) const {
    if (channel.channels() != 1) throw ArgumentError("pad expects a single-channel image");
    if (channel.width() != base_w_ || channel.height() != base_h_)
        throw KernelError("image dimensions do not match kernel base");
    std::vector<double> canvas(static_cast<std::size_t>(canvas_w_) * canvas_h_, 0.0);
    const int ox = (canvas_w_ - base_w_) / 2;
    const int oy = (canvas_h_ - base_h_) / 2;
    for (int y = 0; y < base_h_; ++y)
        for (int x = 0; x < base_w_; ++x)
            canvas[static_cast<std::size_t>(y + oy) * canvas_w_ + (x + ox)] = channel.at(x, y);
    return canvas;
}

RadianceMap GsfKernel::crop(const std::vector<double>& canvas) const {
    if (canvas.size() != static_cast<std::size_t>(canvas_w_) * canvas_h_)
        throw ArgumentError("crop: canvas size mismatch");
    const int ox = (canvas_w_ - base_w_) / 2;
    const int oy = (canvas_h_ - base_h_) / 2;
    RadianceMap out(base_w_, base_h_, 1);
    for (int y = 0; y < base_h_; ++y)
        for (int x = 0; x < base_w_; ++x)
            out.at(x, y) = canvas[static_cast<std::size_t>(y + oy) * canvas_w_ + (x + ox)];
    return out;
}

GsfKernel rasterize_kernel(const GsfParams& params, int width, int height) {
    return GsfKernel(params, width, height);
}

RadianceMap simulate_glare(const RadianceMap& l_in, const GsfKernel& kernel) {
    if (!kernel.matches(l_in)) throw KernelError("image dimensions do not match kernel base");
    std::vector<RadianceMap> planes;
    planes.reserve(l_in.channels());
    for (int c = 0; c < l_in.channels(); ++c) {
        auto canvas = kernel.pad(l_in.channel(c));
        auto spec = fft2(canvas, kernel.canvas_width(), kernel.canvas_height());
        for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= kernel.spectrum()[i];
        auto conv = ifft2_real(spec, kernel.canvas_width(), kernel.canvas_height());
        RadianceMap plane = kernel.crop(conv);
        plane.clamp_non_negative();
        planes.push_back(std::move(plane));
    }
    return l_in.channels() == 1 ? planes.front() : RadianceMap::from_channels(planes);
}

}  // namespace glare
