#pragma once

#include <stdexcept>
#include <string>

namespace glare {

// All library failures derive from Error and carry a stable,
// module-qualified code (e.g. "radiance/dimension") that the CLI
// surfaces in its machine-readable error output.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(msg), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error("radiance/dimension", msg) {}
};

class FormatError : public Error {
public:
    explicit FormatError(const std::string& msg) : Error("radiance/format", msg) {}
};

class DegeneratePatchError : public Error {
public:
    explicit DegeneratePatchError(const std::string& msg) : Error("radiance/degenerate-patch", msg) {}
};

class StackError : public Error {
public:
    explicit StackError(const std::string& msg) : Error("hdrmerge/stack", msg) {}
};

class KernelError : public Error {
public:
    explicit KernelError(const std::string& msg) : Error("gsf/kernel", msg) {}
};

class ParameterError : public Error {
public:
    explicit ParameterError(const std::string& msg) : Error("gsf/parameter", msg) {}
};

class ObjectiveError : public Error {
public:
    explicit ObjectiveError(const std::string& msg) : Error("calib/objective", msg) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error("calib/validation", msg) {}
};

class DegenerateImageError : public Error {
public:
    explicit DegenerateImageError(const std::string& msg) : Error("deglare/degenerate", msg) {}
};

class EstimationError : public Error {
public:
    explicit EstimationError(const std::string& msg) : Error("deglare/estimation", msg) {}
};

class MetricError : public Error {
public:
    explicit MetricError(const std::string& msg) : Error("metrics/argument", msg) {}
};

class SceneSpecError : public Error {
public:
    explicit SceneSpecError(const std::string& msg) : Error("synth/spec", msg) {}
};

class ArgumentError : public Error {
public:
    explicit ArgumentError(const std::string& msg) : Error("common/argument", msg) {}
};

}  // namespace glare
