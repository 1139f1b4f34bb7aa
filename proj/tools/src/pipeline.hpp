#pragma once

#include <optional>
#include <string>

#include "glare/deglare.hpp"
#include "glare/image.hpp"
#include "glare/metrics.hpp"

namespace cli {

// Linear-domain glare-reduction stage: the saturation-aware method, a plain
// Wiener filter, or a pass-through.
struct GlareAConfig {
    std::string method = "deglare";  // deglare | wiener | none
    std::string gsf_path;
    glare::DeglareOptions opts;
};

glare::RadianceMap run_glare_a(const glare::RadianceMap& img, const GlareAConfig& cfg,
                               glare::DeglareReport* report);

struct ScoreRequest {
    std::string metric;  // miou | map | mota | motp | lane-rmse | depth-rmse
    std::string pred;
    std::string ref;
    std::string mask;      // depth-rmse only, optional
    double iou = 0.5;
    std::string out_json;  // optional report paths
    std::string out_csv;
};

glare::ScoreRecord run_score(const ScoreRequest& req);

// Full staged run from a fail-closed JSON config. Returns the process exit
// code (always 0; errors throw).
int run_pipeline(const std::string& config_path);

}  // namespace cli
