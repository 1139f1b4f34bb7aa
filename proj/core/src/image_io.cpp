#include "glare/image_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

#include <json.hpp>

namespace glare {

namespace {

bool has_suffix(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

}  // namespace

RadianceMap load_image(const std::string& path) {
    if (has_suffix(path, ".pfm")) return load_pfm(path);
    if (has_suffix(path, ".png")) return load_png16(path);
    throw FormatError("unsupported image format: " + path);
}

void save_image(const RadianceMap& img, const std::string& path) {
    if (has_suffix(path, ".pfm")) return save_pfm(img, path);
    if (has_suffix(path, ".png")) return save_png16(img, path);
    throw FormatError("unsupported image format: " + path);
}

RadianceMap load_pfm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path);

    std::string magic;
    in >> magic;
    int channels;
    if (magic == "PF") channels = 3;
    else if (magic == "Pf") channels = 1;
    else throw FormatError("not a PFM file: " + path);

    int w = 0, h = 0;
    double scale = 0.0;
    in >> w >> h >> scale;
    if (!in || w <= 0 || h <= 0 || scale == 0.0)
        throw FormatError("malformed PFM header: " + path);
    in.get();  // single whitespace after the scale

    const bool little_endian = scale < 0.0;
    if (!little_endian) throw FormatError("big-endian PFM not supported: " + path);

    std::vector<float> row(static_cast<std::size_t>(w) * channels);
    RadianceMap img(w, h, channels);
    // PFM rows run bottom-to-top.
    for (int y = h - 1; y >= 0; --y) {
        in.read(reinterpret_cast<char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(float)));
        if (!in) throw FormatError("truncated PFM data: " + path);
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < channels; ++c) {
                const float v = row[static_cast<std::size_t>(x) * channels + c];
                if (std::isnan(v)) throw FormatError("NaN in PFM data: " + path);
                img.at(x, y, c) = v;
            }
    }
    img.clamp_non_negative();
    return img;
}

void save_pfm(const RadianceMap& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + path);
    out << (img.channels() == 3 ? "PF" : "Pf") << "\n"
        << img.width() << " " << img.height() << "\n"
        << "-1.0\n";
    std::vector<float> row(static_cast<std::size_t>(img.width()) * img.channels());
    for (int y = img.height() - 1; y >= 0; --y) {
        for (int x = 0; x < img.width(); ++x)
            for (int c = 0; c < img.channels(); ++c)
                row[static_cast<std::size_t>(x) * img.channels() + c] =
                    static_cast<float>(img.at(x, y, c));
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
    if (!out) throw FormatError("short write to " + path);
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

std::string sidecar_path(const std::string& png_path) { return png_path + ".json"; }

}  // namespace

RadianceMap load_png16(const std::string& path) {
    double max_value = 1.0;
    {
        std::ifstream sc(sidecar_path(path));
        if (sc) {
            nlohmann::json j;
            sc >> j;
            max_value = j.at("max").get<double>();
        }
    }
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw FormatError("cannot open " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (!png || !info) throw FormatError("libpng init failed");
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("libpng read error: " + path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));
    const int depth = png_get_bit_depth(png, info);
    const int color = png_get_color_type(png, info);
    if (depth != 16 || (color != PNG_COLOR_TYPE_GRAY && color != PNG_COLOR_TYPE_RGB)) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("expected 16-bit gray or RGB PNG: " + path);
    }
    const int channels = color == PNG_COLOR_TYPE_RGB ? 3 : 1;
    png_set_swap(png);  // PNG is big-endian on disk

    std::vector<std::uint16_t> row(static_cast<std::size_t>(w) * channels);
    RadianceMap img(w, h, channels);
    for (int y = 0; y < h; ++y) {
        png_read_row(png, reinterpret_cast<png_bytep>(row.data()), nullptr);
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < channels; ++c)
                img.at(x, y, c) =
                    row[static_cast<std::size_t>(x) * channels + c] / 65535.0 * max_value;
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void save_png16(const RadianceMap& img, const std::string& path) {
    const double max_value = img.max_value() > 0.0 ? img.max_value() : 1.0;

    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw FormatError("cannot write " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (!png || !info) throw FormatError("libpng init failed");
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw FormatError("libpng write error: " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width(), img.height(), 16,
                 img.channels() == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_set_swap(png);

    std::vector<std::uint16_t> row(static_cast<std::size_t>(img.width()) * img.channels());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x)
            for (int c = 0; c < img.channels(); ++c) {
                const double v = img.at(x, y, c) / max_value;
                row[static_cast<std::size_t>(x) * img.channels() + c] =
                    static_cast<std::uint16_t>(std::lround(std::clamp(v, 0.0, 1.0) * 65535.0));
            }
        png_write_row(png, reinterpret_cast<png_bytep>(row.data()));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);

    std::ofstream sc(sidecar_path(path));
    if (!sc) throw FormatError("cannot write " + sidecar_path(path));
    nlohmann::json j;
    j["max"] = max_value;
    sc << j.dump() << "\n";
}

}  // namespace glare
