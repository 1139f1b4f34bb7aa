#pragma once

#include <optional>
#include <string>
#include <variant>

#include "glare/image.hpp"

namespace glare {

/// V_out = V_in^(1/gamma) on [0,1] inputs.
struct GammaTf {
    double gamma = 2.2;  // > 0
};

/// E(Y) = log2(Y) / log2(2^N - 1) for Y >= 1, else 0; raw digital input.
struct LogTf {
    int n_bits = 16;  // source bit depth, in [8, 16]
};

/// V_out = clamp(m * V_in + c, 0, 1).
struct LinearTf {
    double m = 1.0;  // gain, > 0
    double c = 0.0;  // offset
};

using TransferFunction = std::variant<GammaTf, LogTf, LinearTf>;

void validate(const TransferFunction& tf);
std::string tf_to_json(const TransferFunction& tf);
TransferFunction tf_from_json(const std::string& text);
/// CLI shorthand: "gamma:2.2" | "log:16" | "linear:m,c".
TransferFunction tf_from_flag(const std::string& flag);

/// Encoded image: values in [0,1], with the transfer function and any
/// quantization depth recorded so decode can invert.
struct EncodedImage {
    RadianceMap values;
    TransferFunction tf;
    std::optional<int> quant_bits;
};

/// Gamma/Linear inputs must be pre-normalized to [0,1] by the caller's
/// ceiling; Log inputs are raw digital values in [0, 2^N - 1].
EncodedImage encode(const RadianceMap& img, const TransferFunction& tf);

/// Exact functional inverse on the invertible domain.
RadianceMap decode(const EncodedImage& enc);

/// Round to the nearest multiple of 1/(2^bits - 1).
EncodedImage quantize(const EncodedImage& enc, int bits);

}  // namespace glare
