#include "glare/calib.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "glare/image_io.hpp"

namespace glare {

void CalibScene::validate() const {
    if (camera_id.empty()) throw ArgumentError("CalibScene: empty camera_id");
    if (!l_in.same_shape(l_capt)) throw DimensionError("CalibScene: l_in/l_capt shape mismatch");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ArgumentError("CalibScene: alpha must be in [0,1]");
}

void CalibDataset::validate() const {
    if (scenes.empty()) throw ArgumentError("CalibDataset: no scenes");
    if (lambda < 0.0) throw ArgumentError("CalibDataset: lambda must be >= 0");
    bool any_alpha = false;
    for (const CalibScene& s : scenes) {
        s.validate();
        any_alpha = any_alpha || s.alpha > 0.0;
    }
    if (!any_alpha) throw ArgumentError("CalibDataset: at least one alpha must be > 0");
}

GsfParams ParamBounds::clamp(const GsfParams& p) const {
    GsfParams q = p;
    q.p1 = std::clamp(q.p1, p1_lo, p1_hi);
    q.p2 = std::clamp(q.p2, p2_lo, p2_hi);
    q.p3 = std::clamp(q.p3, p3_lo, p3_hi);
    q.p4 = std::clamp(q.p4, p4_lo, p4_hi);
    return q;
}

namespace {

// Shared per-fit cache: kernels keyed by (params, dims) are recomputed for
// every candidate, but scenes with identical dims reuse one rasterization.
struct ObjectiveEval {
    const CalibDataset* ds;

    double residual_term(const GsfParams& params, const CalibScene& scene) const {
        GsfKernel kernel = rasterize_kernel(params, scene.l_in.width(), scene.l_in.height());
        RadianceMap ls = simulate_glare(scene.l_in, kernel);
        const double eps = 1e-6 * std::max(scene.l_capt.max_value(), 1e-30);
        double sum = 0.0;
        for (std::size_t i = 0; i < ls.size(); ++i) {
            const double d = std::log(ls.data()[i] + eps) - std::log(scene.l_capt.data()[i] + eps);
            sum += d * d;
        }
        if (!std::isfinite(sum))
            throw ObjectiveError("non-finite residual for scene " + scene.camera_id);
        return sum;
    }

    double operator()(const GsfParams& params) const {
        double obj = ds->lambda * (params.p1 * params.p1 + params.p2 * params.p2 +
                                   params.p3 * params.p3 + params.p4 * params.p4);
        for (const CalibScene& scene : ds->scenes) {
            if (scene.alpha == 0.0) continue;
            obj += scene.alpha * residual_term(params, scene);
        }
        return obj;
    }
};

using Coords = std::array<double, 4>;  // (p1, p2, log p3, p4)

Coords to_coords(const GsfParams& p) {
    return {p.p1, p.p2, std::log(p.p3), p.p4};
}

GsfParams from_coords(const Coords& c) {
    GsfParams p;
    p.p1 = c[0];
    p.p2 = c[1];
    p.p3 = std::exp(c[2]);
    p.p4 = c[3];
    return p;
}

Coords project(const Coords& c, const ParamBounds& b) {
    Coords q = c;
    q[0] = std::clamp(q[0], b.p1_lo, b.p1_hi);
    q[1] = std::clamp(q[1], b.p2_lo, b.p2_hi);
    q[2] = std::clamp(q[2], std::log(b.p3_lo), std::log(b.p3_hi));
    q[3] = std::clamp(q[3], b.p4_lo, b.p4_hi);
    return q;
}

double simplex_diameter(const std::array<Coords, 5>& verts) {
    double d = 0.0;
    for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = i + 1; j < verts.size(); ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) {
                const double diff = verts[i][k] - verts[j][k];
                s += diff * diff;
            }
            d = std::max(d, std::sqrt(s));
        }
    return d;
}

struct NmResult {
    Coords best;
    double best_value;
    int iterations;
    bool converged;
};

NmResult nelder_mead(const ObjectiveEval& f, const Coords& start, const FitOptions& opts,
                     int iteration_budget) {
    constexpr int N = 4;
    const ParamBounds& b = opts.bounds;
    const Coords steps = {0.1, 0.01, 0.4, 0.25};

    std::array<Coords, N + 1> verts;
    std::array<double, N + 1> vals;
    verts[0] = project(start, b);
    vals[0] = f(from_coords(verts[0]));
    for (int i = 0; i < N; ++i) {
        Coords v = verts[0];
        v[i] += steps[i];
        verts[i + 1] = project(v, b);
        // degenerate vertex after projection: step the other way
        if (verts[i + 1] == verts[0]) {
            v[i] = verts[0][i] - steps[i];
            verts[i + 1] = project(v, b);
        }
        vals[i + 1] = f(from_coords(verts[i + 1]));
    }

    auto order = [&] {
        std::array<int, N + 1> idx;
        for (int i = 0; i <= N; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](int a, int c) { return vals[a] < vals[c]; });
        std::array<Coords, N + 1> nv;
        std::array<double, N + 1> nf;
        for (int i = 0; i <= N; ++i) {
            nv[i] = verts[idx[i]];
            nf[i] = vals[idx[i]];
        }
        verts = nv;
        vals = nf;
    };
    order();

    int iter = 0;
    bool converged = false;
    double prev_best = vals[0];
    double prev_worst = vals[N];
    while (iter < iteration_budget) {
        ++iter;

        Coords centroid{};
        for (int i = 0; i < N; ++i)
            for (int k = 0; k < N; ++k) centroid[k] += verts[i][k] / N;

        auto blend = [&](double t) {
            Coords v;
            for (int k = 0; k < N; ++k) v[k] = centroid[k] + t * (centroid[k] - verts[N][k]);
            return project(v, b);
        };

        const Coords xr = blend(1.0);
        const double fr = f(from_coords(xr));
        if (fr < vals[0]) {
            const Coords xe = blend(2.0);
            const double fe = f(from_coords(xe));
            if (fe < fr) {
                verts[N] = xe;
                vals[N] = fe;
            } else {
                verts[N] = xr;
                vals[N] = fr;
            }
        } else if (fr < vals[N - 1]) {
            verts[N] = xr;
            vals[N] = fr;
        } else {
            const bool outside = fr < vals[N];
            const Coords xc = blend(outside ? 0.5 : -0.5);
            const double fc = f(from_coords(xc));
            if (fc < std::min(fr, vals[N])) {
                verts[N] = xc;
                vals[N] = fc;
            } else {
                // shrink toward the best vertex
                for (int i = 1; i <= N; ++i) {
                    for (int k = 0; k < N; ++k)
                        verts[i][k] = verts[0][k] + 0.5 * (verts[i][k] - verts[0][k]);
                    verts[i] = project(verts[i], b);
                    vals[i] = f(from_coords(verts[i]));
                }
            }
        }
        order();

        // The best vertex can sit still for many iterations while the simplex
        // reshapes, so the relative-decrease test fires once per full cycle of
        // N+1 iterations and also requires the worst vertex to have stalled —
        // a still-contracting simplex keeps changing its worst value.
        if (iter % (N + 1) == 0) {
            const double denom = std::max(std::abs(prev_best), 1e-30);
            const double denom_w = std::max(std::abs(prev_worst), 1e-30);
            if (std::abs(prev_best - vals[0]) / denom < opts.objective_tol &&
                std::abs(prev_worst - vals[N]) / denom_w < opts.objective_tol) {
                converged = true;
                break;
            }
            prev_best = vals[0];
            prev_worst = vals[N];
        }
        if (simplex_diameter(verts) < opts.simplex_tol) {
            converged = true;
            break;
        }
    }
    return {verts[0], vals[0], iter, converged};
}

}  // namespace

double joint_objective(const GsfParams& params, const CalibDataset& ds) {
    params.validate();
    ds.validate();
    return ObjectiveEval{&ds}(params);
}

double scene_log_rmse(const GsfParams& params, const CalibScene& scene) {
    GsfKernel kernel = rasterize_kernel(params, scene.l_in.width(), scene.l_in.height());
    RadianceMap ls = simulate_glare(scene.l_in, kernel);
    const double eps = 1e-6 * std::max(scene.l_capt.max_value(), 1e-30);
    double sum = 0.0;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        const double d = std::log(ls.data()[i] + eps) - std::log(scene.l_capt.data()[i] + eps);
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(ls.size()));
}

FitReport fit_joint_gsf(const CalibDataset& ds, const GsfParams& init, const FitOptions& opts) {
    ds.validate();
    const GsfParams start = opts.bounds.clamp(init);
    start.validate();
    ObjectiveEval f{&ds};

    NmResult res = nelder_mead(f, to_coords(start), opts, opts.max_iterations);
    int total_iters = res.iterations;
    if (!res.converged) {
        // one restart from a perturbed best point
        Coords perturbed = res.best;
        perturbed[0] *= 1.05;
        perturbed[1] = perturbed[1] * 1.05 + 1e-4;
        perturbed[2] += 0.1;
        perturbed[3] *= 1.05;
        NmResult res2 = nelder_mead(f, perturbed, opts, opts.max_iterations);
        total_iters += res2.iterations;
        if (res2.best_value < res.best_value) res = res2;
    }

    FitReport report;
    report.params = opts.bounds.clamp(from_coords(res.best));
    report.final_objective = res.best_value;
    report.iterations = total_iters;
    report.converged = res.converged;
    for (const CalibScene& s : ds.scenes) {
        report.scene_ids.push_back(s.camera_id);
        report.per_scene_residual.push_back(scene_log_rmse(report.params, s));
    }
    return report;
}

std::string FitReport::to_json() const {
    nlohmann::json j;
    j["params"] = nlohmann::json::parse(params.to_json());
    j["final_objective"] = final_objective;
    j["iterations"] = iterations;
    j["converged"] = converged;
    j["per_scene_residual"] = nlohmann::json::object();
    for (std::size_t i = 0; i < scene_ids.size(); ++i)
        j["per_scene_residual"][scene_ids[i]] = per_scene_residual[i];
    return j.dump(2);
}

TuneResult validate_and_tune(const CalibDataset& train,
                             const std::vector<CalibScene>& holdout,
                             const std::vector<double>& lambda_grid,
                             AlphaPolicy alpha_policy,
                             const GsfParams& init,
                             const FitOptions& opts) {
    if (lambda_grid.empty()) throw ValidationError("empty lambda grid");
    if (holdout.empty()) throw ValidationError("empty holdout set");
    train.validate();

    auto holdout_rmse = [&](const GsfParams& p) {
        double sum = 0.0;
        for (const CalibScene& s : holdout) sum += scene_log_rmse(p, s);
        return sum / static_cast<double>(holdout.size());
    };

    CalibDataset ds = train;
    for (CalibScene& s : ds.scenes) s.alpha = 1.0;  // pilot pass is uniform

    TuneResult best;
    bool have_best = false;
    for (double lambda : lambda_grid) {
        ds.lambda = lambda;
        FitReport report = fit_joint_gsf(ds, init, opts);
        const double err = holdout_rmse(report.params);
        if (!have_best || err < best.holdout_rmse) {
            best.params = report.params;
            best.lambda = lambda;
            best.holdout_rmse = err;
            best.report = report;
            have_best = true;
        }
    }

    best.alphas.assign(train.scenes.size(), 1.0);
    if (alpha_policy == AlphaPolicy::InverseResidual) {
        double max_inv = 0.0;
        std::vector<double> inv(train.scenes.size());
        for (std::size_t i = 0; i < inv.size(); ++i) {
            inv[i] = 1.0 / std::max(best.report.per_scene_residual[i], 1e-12);
            max_inv = std::max(max_inv, inv[i]);
        }
        for (std::size_t i = 0; i < inv.size(); ++i) {
            ds.scenes[i].alpha = inv[i] / max_inv;  // renormalized so max alpha = 1
            best.alphas[i] = ds.scenes[i].alpha;
        }
        ds.lambda = best.lambda;
        FitReport refit = fit_joint_gsf(ds, best.params, opts);
        best.params = refit.params;
        best.report = refit;
        best.holdout_rmse = holdout_rmse(refit.params);
    }
    return best;
}

CalibDataset load_calib_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    nlohmann::json j;
    in >> j;

    const auto base = std::filesystem::path(path).parent_path();
    auto resolve = [&](const std::string& p) {
        std::filesystem::path fp = p;
        return (fp.is_relative() ? base / fp : fp).string();
    };

    CalibDataset ds;
    ds.lambda = j.value("lambda", 0.0);
    for (const auto& s : j.at("scenes")) {
        CalibScene scene;
        scene.camera_id = s.at("camera_id").get<std::string>();
        scene.l_in = load_image(resolve(s.at("l_in_path").get<std::string>()));
        scene.l_capt = load_image(resolve(s.at("l_capt_path").get<std::string>()));
        scene.alpha = s.value("alpha", 1.0);
        ds.scenes.push_back(std::move(scene));
    }
    ds.validate();
    return ds;
}

}  // namespace glare
