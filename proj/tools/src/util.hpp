#pragma once

#include <chrono>
#include <cstdio>
#include <string>

#include <json.hpp>

namespace cli {

// Structured log line on stderr; stdout stays reserved for payloads.
inline void log(const std::string& level, const std::string& module, const std::string& msg) {
    const auto now = std::chrono::system_clock::now();
    const auto secs = std::chrono::floor<std::chrono::seconds>(now);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now - secs).count();
    const std::time_t tt = std::chrono::system_clock::to_time_t(secs);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char ts[96];
    std::snprintf(ts, sizeof ts, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                  static_cast<int>(ms));
    nlohmann::json j{{"ts", ts}, {"level", level}, {"module", module}, {"msg", msg}};
    std::fprintf(stderr, "%s\n", j.dump().c_str());
}

// Reject unknown keys so configs stay reproducible across versions.
inline void check_keys(const nlohmann::json& obj, const std::string& ctx,
                       std::initializer_list<const char*> allowed) {
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) { ok = true; break; }
        if (!ok)
            throw nlohmann::json::other_error::create(
                580, "unknown key '" + key + "' in " + ctx, &obj);
    }
}

// Format a double so integral values still read as floating point ("1.0").
inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    std::string s(buf);
    if (s.find_first_of(".einf") == std::string::npos) s += ".0";
    return s;
}

// Deterministic pairwise summation for batch reductions.
inline double pairwise_sum(const double* v, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

}  // namespace cli
