#pragma once

#include <string>
#include <vector>

#include "glare/gsf.hpp"
#include "glare/image.hpp"

namespace glare {

/// One camera's calibration capture: ground-truth point-source scene and
/// the merged HDR image of the same scene with glare.
struct CalibScene {
    std::string camera_id;
    RadianceMap l_in;     // glare-free ground truth
    RadianceMap l_capt;   // merged HDR capture
    double alpha = 1.0;   // weight in [0, 1]

    void validate() const;
};

struct CalibDataset {
    std::vector<CalibScene> scenes;
    double lambda = 0.0;

    void validate() const;
};

/// Search-space bounds, enforced by projection. p3 is searched in log scale.
struct ParamBounds {
    double p1_lo = 1e-4, p1_hi = 1.0;
    double p2_lo = 0.0, p2_hi = 1.0;
    double p3_lo = 1e-4, p3_hi = 1e3;
    double p4_lo = 0.1, p4_hi = 4.0;

    GsfParams clamp(const GsfParams& p) const;
};

struct FitOptions {
    int max_iterations = 2000;
    double objective_tol = 1e-8;   // relative decrease over a simplex cycle
    double simplex_tol = 1e-6;     // simplex diameter
    ParamBounds bounds;
};

struct FitReport {
    GsfParams params;
    double final_objective = 0.0;
    std::vector<double> per_scene_residual;  // log-domain RMSE per camera
    std::vector<std::string> scene_ids;
    int iterations = 0;
    bool converged = false;

    std::string to_json() const;
};

/// Weighted sum of squared log-domain residuals plus L2 regularization of
/// the parameters: sum_i alpha_i * ||log(l_si+eps) - log(l_capt_i+eps)||^2
/// + lambda * |p|^2, with l_si the simulated glare of scene i.
double joint_objective(const GsfParams& params, const CalibDataset& ds);

/// Log-domain RMSE between the simulated and captured image of one scene.
double scene_log_rmse(const GsfParams& params, const CalibScene& scene);

/// Nelder-Mead simplex descent with bound projection; restarts once from
/// a perturbed init when the first pass fails to converge.
FitReport fit_joint_gsf(const CalibDataset& ds, const GsfParams& init, const FitOptions& opts = {});

struct TuneResult {
    GsfParams params;
    double lambda = 0.0;
    std::vector<double> alphas;
    double holdout_rmse = 0.0;
    FitReport report;
};

enum class AlphaPolicy { Uniform, InverseResidual };

/// Grid search over lambda scored by mean holdout log-RMSE, with an
/// optional inverse-residual re-weighting pass.
TuneResult validate_and_tune(const CalibDataset& train,
                             const std::vector<CalibScene>& holdout,
                             const std::vector<double>& lambda_grid,
                             AlphaPolicy alpha_policy,
                             const GsfParams& init,
                             const FitOptions& opts = {});

/// Calibration manifest: {scenes:[{camera_id, l_in_path, l_capt_path, alpha}], lambda}.
CalibDataset load_calib_manifest(const std::string& path);

}  // namespace glare
