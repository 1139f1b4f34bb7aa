#include "glare/encode.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace glare {

void validate(const TransferFunction& tf) {
    if (const auto* g = std::get_if<GammaTf>(&tf)) {
        if (!(g->gamma > 0.0)) throw ArgumentError("gamma must be > 0");
    } else if (const auto* l = std::get_if<LogTf>(&tf)) {
        if (l->n_bits < 8 || l->n_bits > 16) throw ArgumentError("log n_bits must be in [8,16]");
    } else if (const auto* ln = std::get_if<LinearTf>(&tf)) {
        if (!(ln->m > 0.0)) throw ArgumentError("linear gain m must be > 0");
    }
}

std::string tf_to_json(const TransferFunction& tf) {
    nlohmann::json j;
    if (const auto* g = std::get_if<GammaTf>(&tf)) {
        j["type"] = "gamma";
        j["gamma"] = g->gamma;
    } else if (const auto* l = std::get_if<LogTf>(&tf)) {
        j["type"] = "log";
        j["n_bits"] = l->n_bits;
    } else if (const auto* ln = std::get_if<LinearTf>(&tf)) {
        j["type"] = "linear";
        j["m"] = ln->m;
        j["c"] = ln->c;
    }
    return j.dump();
}

TransferFunction tf_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    const std::string type = j.at("type").get<std::string>();
    TransferFunction tf;
    if (type == "gamma") tf = GammaTf{j.at("gamma").get<double>()};
    else if (type == "log") tf = LogTf{j.at("n_bits").get<int>()};
    else if (type == "linear") tf = LinearTf{j.at("m").get<double>(), j.value("c", 0.0)};
    else throw ArgumentError("unknown transfer function type: " + type);
    validate(tf);
    return tf;
}

TransferFunction tf_from_flag(const std::string& flag) {
    const auto colon = flag.find(':');
    const std::string kind = flag.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : flag.substr(colon + 1);
    TransferFunction tf;
    try {
        if (kind == "gamma") {
            tf = GammaTf{args.empty() ? 2.2 : std::stod(args)};
        } else if (kind == "log") {
            tf = LogTf{args.empty() ? 16 : std::stoi(args)};
        } else if (kind == "linear") {
            const auto comma = args.find(',');
            LinearTf lt;
            if (!args.empty()) {
                lt.m = std::stod(args.substr(0, comma));
                if (comma != std::string::npos) lt.c = std::stod(args.substr(comma + 1));
            }
            tf = lt;
        } else {
            throw ArgumentError("unknown transfer function: " + flag);
        }
    } catch (const std::invalid_argument&) {
        throw ArgumentError("malformed transfer function flag: " + flag);
    }
    validate(tf);
    return tf;
}

EncodedImage encode(const RadianceMap& img, const TransferFunction& tf) {
    validate(tf);
    EncodedImage out{RadianceMap(img.width(), img.height(), img.channels()), tf, std::nullopt};

    if (const auto* g = std::get_if<GammaTf>(&tf)) {
        const double exponent = 1.0 / g->gamma;
        for (std::size_t i = 0; i < img.size(); ++i) {
            const double v = img.data()[i];
            if (v < 0.0) throw ArgumentError("gamma encoding requires non-negative input");
            out.values.data()[i] = std::min(1.0, std::pow(v, exponent));
        }
    } else if (const auto* l = std::get_if<LogTf>(&tf)) {
        const double denom = std::log2(std::pow(2.0, l->n_bits) - 1.0);
        for (std::size_t i = 0; i < img.size(); ++i) {
            const double y = img.data()[i];
            out.values.data()[i] = y >= 1.0 ? std::min(1.0, std::log2(y) / denom) : 0.0;
        }
    } else if (const auto* ln = std::get_if<LinearTf>(&tf)) {
        for (std::size_t i = 0; i < img.size(); ++i)
            out.values.data()[i] = std::clamp(ln->m * img.data()[i] + ln->c, 0.0, 1.0);
    }
    return out;
}

RadianceMap decode(const EncodedImage& enc) {
    RadianceMap out(enc.values.width(), enc.values.height(), enc.values.channels());
    if (const auto* g = std::get_if<GammaTf>(&enc.tf)) {
        for (std::size_t i = 0; i < out.size(); ++i)
            out.data()[i] = std::pow(enc.values.data()[i], g->gamma);
    } else if (const auto* l = std::get_if<LogTf>(&enc.tf)) {
        const double denom = std::log2(std::pow(2.0, l->n_bits) - 1.0);
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double e = enc.values.data()[i];
            out.data()[i] = e > 0.0 ? std::exp2(e * denom) : 0.0;
        }
    } else if (const auto* ln = std::get_if<LinearTf>(&enc.tf)) {
        for (std::size_t i = 0; i < out.size(); ++i)
            out.data()[i] = std::max(0.0, (enc.values.data()[i] - ln->c) / ln->m);
    }
    return out;
}

EncodedImage quantize(const EncodedImage& enc, int bits) {
    if (bits < 1 || bits > 16) throw ArgumentError("quantize bits must be in [1,16]");
    const double levels = std::pow(2.0, bits) - 1.0;
    EncodedImage out = enc;
    for (double& v : out.values.data()) v = std::round(v * levels) / levels;
    out.quant_bits = bits;
    return out;
}

}  // namespace glare
