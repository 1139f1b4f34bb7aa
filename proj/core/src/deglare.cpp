#include "glare/deglare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include <json.hpp>

#include "glare/fft.hpp"
#include "glare/filters.hpp"

namespace glare {

namespace {

// Single-channel planes as flat W*H vectors.
using Plane = std::vector<double>;

Plane extract_plane(const RadianceMap& img, int c) {
    Plane p(static_cast<std::size_t>(img.width()) * img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            p[static_cast<std::size_t>(y) * img.width() + x] = img.at(x, y, c);
    return p;
}

// Spectral filtering on the kernel canvas: zero-embed, transform,
// multiply, inverse transform, extract. No clamping.
class SpectralOps {
public:
    SpectralOps(const GsfKernel& kernel, double nsr)
        : k_(kernel), W_(kernel.base_width()), H_(kernel.base_height()),
          CW_(kernel.canvas_width()), CH_(kernel.canvas_height()),
          ox_((CW_ - W_) / 2), oy_((CH_ - H_) / 2) {
        const auto& g = kernel.spectrum();
        conv_m_.resize(g.size());
        corr_m_.resize(g.size());
        wiener_m_.resize(g.size());
        conv_wiener_m_.resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            conv_m_[i] = g[i];
            corr_m_[i] = std::conj(g[i]);
            wiener_m_[i] = std::conj(g[i]) / (std::norm(g[i]) + nsr);
            conv_wiener_m_[i] = conv_m_[i] * wiener_m_[i];
        }
    }

    Plane convolve(const Plane& p) const { return apply(p, conv_m_); }
    Plane correlate(const Plane& p) const { return apply(p, corr_m_); }
    Plane wiener(const Plane& p) const { return apply(p, wiener_m_); }
    // G * wiener(p) as one spectral product, avoiding the information loss
    // of cropping the deconvolved intermediate back to the base window.
    Plane convolve_wiener(const Plane& p) const { return apply(p, conv_wiener_m_); }

    int width() const { return W_; }
    int height() const { return H_; }

private:
    Plane apply(const Plane& p, const std::vector<std::complex<double>>& m) const {
        std::vector<double> canvas(static_cast<std::size_t>(CW_) * CH_, 0.0);
        for (int y = 0; y < H_; ++y)
            for (int x = 0; x < W_; ++x)
                canvas[static_cast<std::size_t>(y + oy_) * CW_ + (x + ox_)] =
                    p[static_cast<std::size_t>(y) * W_ + x];
        auto spec = fft2(canvas, CW_, CH_);
        for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= m[i];
        auto res = ifft2_real(spec, CW_, CH_);
        Plane out(p.size());
        for (int y = 0; y < H_; ++y)
            for (int x = 0; x < W_; ++x)
                out[static_cast<std::size_t>(y) * W_ + x] =
                    res[static_cast<std::size_t>(y + oy_) * CW_ + (x + ox_)];
        return out;
    }

    const GsfKernel& k_;
    int W_, H_, CW_, CH_, ox_, oy_;
    std::vector<std::complex<double>> conv_m_, corr_m_, wiener_m_, conv_wiener_m_;
};

struct ChannelSolution {
    Plane xs;                 // zero off S
    double objective = 0.0;
    int iterations = 0;
    bool lower_bound_active = false;
    double unsat_residual_min = 0.0;
    double stray_min = 0.0;
    double deconv_min = 0.0;
    double compose_max_ = 0.0;
};

// Projected gradient with backtracking on the dark-pixel data term,
// followed by constraint evaluation and repair for one channel.
ChannelSolution solve_channel(const Plane& y, const SaturationPartition& part,
                              const std::vector<int>& dark_idx, const SpectralOps& ops,
                              double lambda1, const DeglareOptions& opts, double tol,
                              double clip_level) {
    const std::size_t n = y.size();
    std::vector<int> sat_idx;
    for (std::size_t i = 0; i < n; ++i)
        if (part.mask[i]) sat_idx.push_back(static_cast<int>(i));
    const std::size_t ns = sat_idx.size(), nd = dark_idx.size();

    // The observation bounds the latent radiance from below only where the
    // sensor actually clipped; pixels included in S conservatively (threshold
    // margin, dilation) carry stray-dominated observations that may far
    // exceed their true radiance, so they are left free above zero.
    std::vector<double> lb(ns);
    for (std::size_t i = 0; i < ns; ++i) {
        const double v = y[sat_idx[i]];
        lb[i] = v >= clip_level ? v : 0.0;
    }
    std::vector<double> ydark(nd);
    for (std::size_t i = 0; i < nd; ++i) ydark[i] = y[dark_idx[i]];

    auto embed_s = [&](const std::vector<double>& xs) {
        Plane img(n, 0.0);
        for (std::size_t i = 0; i < ns; ++i) img[sat_idx[i]] = xs[i];
        return img;
    };
    auto forward_d = [&](const std::vector<double>& xs) {
        Plane conv = ops.convolve(embed_s(xs));
        std::vector<double> out(nd);
        for (std::size_t i = 0; i < nd; ++i) out[i] = conv[dark_idx[i]];
        return out;
    };
    auto adjoint_s = [&](const std::vector<double>& r) {
        Plane img(n, 0.0);
        for (std::size_t i = 0; i < nd; ++i) img[dark_idx[i]] = r[i];
        Plane corr = ops.correlate(img);
        std::vector<double> out(ns);
        for (std::size_t i = 0; i < ns; ++i) out[i] = corr[sat_idx[i]];
        return out;
    };

    // The stray variable z has a closed-form minimizer z = max(0, r - l/2)
    // at residual r = ydark - A*xs, so it is minimized out exactly: the
    // marginal objective is a one-sided Huber loss in r. Optimizing xs alone
    // against it avoids the stall where a gradient-updated z soaks up the
    // residual before xs can move. At lambda1 = 0 the joint problem is
    // degenerate (z absorbs any underestimate at zero cost); the documented
    // contract is that it reduces to plain least squares, so the stray
    // variable is disabled there (z pinned at 0, infinite knee).
    const double knee = lambda1 > 0.0 ? 0.5 * lambda1
                                      : std::numeric_limits<double>::infinity();
    auto objective = [&](const std::vector<double>& axs) {
        double obj = 0.0;
        for (std::size_t i = 0; i < nd; ++i) {
            const double r = ydark[i] - axs[i];
            obj += r <= knee ? r * r : lambda1 * r - knee * knee;
        }
        return obj;
    };
    auto slope = [&](const std::vector<double>& axs) {
        std::vector<double> s(nd);
        for (std::size_t i = 0; i < nd; ++i) {
            const double r = ydark[i] - axs[i];
            s[i] = r <= knee ? 2.0 * r : lambda1;
        }
        return s;
    };

    // Multiplicative (exponentiated-gradient) updates: the dark pixels sit
    // far from S, so the data term barely distinguishes where inside S the
    // radiance lives. An additive step would spread the recovered flux evenly
    // across S — including the conservatively-included rim whose true
    // radiance is small — producing an over-subtraction halo around sources.
    // Scaling instead keeps the distribution proportional to the clip
    // profile, which is where the sources actually are.
    std::vector<double> xs(ns);
    for (std::size_t i = 0; i < ns; ++i) xs[i] = std::max(lb[i], 0.01 * clip_level);
    std::vector<double> axs = forward_d(xs);
    double obj = objective(axs);

    auto try_step = [&](const std::vector<double>& gxs, double s, std::vector<double>& xs_out,
                        std::vector<double>& axs_out) {
        xs_out = xs;
        for (std::size_t i = 0; i < ns; ++i) {
            const double expo = std::clamp(s * gxs[i], -50.0, 50.0);
            xs_out[i] = std::max(lb[i], xs[i] * std::exp(expo));
        }
        axs_out = forward_d(xs_out);
        return objective(axs_out);
    };

    double step = 1.0;
    int iter = 0;
    for (; iter < opts.max_inner_iterations; ++iter) {
        std::vector<double> s = slope(axs);
        double smax = 0.0;
        for (double v : s) smax = std::max(smax, std::abs(v));
        std::vector<double> gxs = adjoint_s(s);  // -grad of the marginal objective
        // Normalize the exponent so the step search is invariant to the
        // image scale: scaling Y by c scales the gradient by c^2, which
        // would otherwise shift the whole backtracking schedule. A gradient
        // at transform-roundoff level (e.g. a delta kernel couples S to no
        // dark pixel) counts as zero, not as a direction to amplify.
        double gmax = 0.0;
        for (double g : gxs) gmax = std::max(gmax, std::abs(g));
        if (gmax <= 1e-12 * smax) break;
        for (double& g : gxs) g /= gmax;
        // Backtrack to an acceptable step...
        bool accepted = false;
        double new_obj = obj;
        std::vector<double> xs_new, axs_new;
        while (step > 1e-14) {
            new_obj = try_step(gxs, step, xs_new, axs_new);
            if (new_obj <= obj) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        // ...then expand while doubling keeps paying. The Huber slope can be
        // many orders below the data scale, so the useful step is unknown a
        // priori; without expansion the relative-decrease test below would
        // fire while the iterate has barely moved.
        while (step < 1e12) {
            std::vector<double> xs2, axs2;
            const double obj2 = try_step(gxs, 2.0 * step, xs2, axs2);
            if (obj2 < new_obj) {
                step *= 2.0;
                new_obj = obj2;
                xs_new = std::move(xs2);
                axs_new = std::move(axs2);
            } else {
                break;
            }
        }
        const double rel = (obj - new_obj) / std::max(std::abs(obj), 1e-30);
        xs = std::move(xs_new);
        axs = std::move(axs_new);
        obj = new_obj;
        if (rel < opts.inner_tol) break;
    }
    std::vector<double> z(nd);
    for (std::size_t i = 0; i < nd; ++i) z[i] = std::max(0.0, ydark[i] - axs[i] - knee);

    // Zeroed observation = Y_u extended by zeros over S.
    Plane yz = y;
    for (int i : sat_idx) yz[i] = 0.0;

    auto eval_unsat_residual = [&](const std::vector<double>& xs_try) {
        Plane gxs = ops.convolve(embed_s(xs_try));
        Plane stray_removed(n);
        for (std::size_t i = 0; i < n; ++i)
            stray_removed[i] = part.mask[i] ? 0.0 : std::max(0.0, yz[i] - gxs[i]);
        Plane recon = ops.convolve_wiener(stray_removed);
        double mn = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (!part.mask[i]) mn = std::min(mn, yz[i] - gxs[i] - recon[i]);
        return mn;
    };
    // The composite under test carries the estimated unclipped observation
    // (the glare-spread of the recovered radiance, never below the clipped
    // reading) at pixels that actually clipped, and the valid observation
    // everywhere else — the same image the final deconvolution consumes.
    auto eval_deconv_floor = [&](const std::vector<double>& xs_try, double* out_max,
                         Plane* out_wdc) {
        Plane gxs = ops.convolve(embed_s(xs_try));
        Plane compose(n);
        double mx = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            compose[i] = y[i] >= clip_level ? std::max(gxs[i], y[i]) : y[i];
            mx = std::max(mx, compose[i]);
        }
        Plane wdc = ops.wiener(compose);
        double mn = 0.0;
        for (double v : wdc) mn = std::min(mn, v);
        if (out_max) *out_max = mx;
        if (out_wdc) *out_wdc = std::move(wdc);
        return mn;
    };

    // Deconvolution-positivity repair: clamp the deconvolved composite and re-project X_s
    // from it, keeping the best iterate.
    double compose_max = 0.0;
    Plane wdc;
    double dc_floor = eval_deconv_floor(xs, &compose_max, &wdc);
    {
        std::vector<double> best_xs = xs;
        double best_floor = dc_floor;
        for (int rep = 0; rep < 8 && dc_floor < -tol; ++rep) {
            std::vector<double> xs_try(ns);
            for (std::size_t i = 0; i < ns; ++i)
                xs_try[i] = std::max(lb[i], wdc[sat_idx[i]]);
            dc_floor = eval_deconv_floor(xs_try, &compose_max, &wdc);
            if (dc_floor > best_floor) {
                best_floor = dc_floor;
                best_xs = xs_try;
            } else {
                break;
            }
            xs = xs_try;
        }
        xs = best_xs;
        dc_floor = best_floor;
    }

    // Unsaturated-residual repair: shrink the excess over the lower bound until the
    // stray light attributed to S no longer over-explains the observation.
    double resid_u = eval_unsat_residual(xs);
    if (resid_u < -tol) {
        double lo = 0.0, hi = 1.0;
        std::vector<double> xs_try(ns);
        for (int it = 0; it < 24; ++it) {
            const double beta = 0.5 * (lo + hi);
            for (std::size_t i = 0; i < ns; ++i)
                xs_try[i] = lb[i] + beta * (xs[i] - lb[i]);
            if (eval_unsat_residual(xs_try) >= -tol) lo = beta; else hi = beta;
        }
        for (std::size_t i = 0; i < ns; ++i) xs[i] = lb[i] + lo * (xs[i] - lb[i]);
        resid_u = eval_unsat_residual(xs);
    }

    // Residual deconvolution-floor overshoot after re-projection: bisect the recovered
    // excess toward the bound. At the bound the composite degenerates to the
    // observation itself, whose deconvolution is non-negative, so a feasible
    // scale always exists.
    dc_floor = eval_deconv_floor(xs, &compose_max, nullptr);
    if (dc_floor < -tol) {
        double lo = 0.0, hi = 1.0;
        std::vector<double> xs_try(ns);
        for (int it = 0; it < 24; ++it) {
            const double beta = 0.5 * (lo + hi);
            for (std::size_t i = 0; i < ns; ++i)
                xs_try[i] = lb[i] + beta * (xs[i] - lb[i]);
            if (eval_deconv_floor(xs_try, nullptr, nullptr) >= -tol) lo = beta; else hi = beta;
        }
        for (std::size_t i = 0; i < ns; ++i) xs[i] = lb[i] + lo * (xs[i] - lb[i]);
        resid_u = eval_unsat_residual(xs);
        dc_floor = eval_deconv_floor(xs, &compose_max, nullptr);
    }

    ChannelSolution sol;
    sol.xs = embed_s(xs);
    sol.objective = obj;
    sol.iterations = iter;
    sol.unsat_residual_min = resid_u;
    sol.stray_min = nd == 0 ? 0.0 : *std::min_element(z.begin(), z.end());
    sol.deconv_min = dc_floor;
    sol.compose_max_ = compose_max;
    for (std::size_t i = 0; i < ns; ++i)
        if (xs[i] <= lb[i] * (1.0 + 1e-12)) {
            sol.lower_bound_active = true;
            break;
        }
    return sol;
}

}  // namespace

SaturationPartition detect_saturation(const RadianceMap& Y, double threshold_frac,
                                      std::optional<double> ceiling) {
    if (!(threshold_frac > 0.0 && threshold_frac <= 1.0))
        throw ArgumentError("threshold_frac must be in (0, 1]");
    const double ceil_value = ceiling.value_or(Y.max_value());
    if (!(ceil_value > 0.0)) throw DegenerateImageError("image has no positive values");

    const int W = Y.width(), H = Y.height();
    SaturationPartition part;
    part.threshold = threshold_frac * ceil_value;
    std::vector<bool> raw(static_cast<std::size_t>(W) * H, false);
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x)
            for (int c = 0; c < Y.channels(); ++c)
                if (Y.at(x, y, c) >= part.threshold) {
                    raw[static_cast<std::size_t>(y) * W + x] = true;
                    break;
                }

    // 1-pixel 8-connected dilation
    part.mask.assign(raw.size(), false);
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            bool v = false;
            for (int dy = -1; dy <= 1 && !v; ++dy)
                for (int dx = -1; dx <= 1 && !v; ++dx) {
                    const int xx = x + dx, yy = y + dy;
                    if (xx >= 0 && yy >= 0 && xx < W && yy < H)
                        v = raw[static_cast<std::size_t>(yy) * W + xx];
                }
            part.mask[static_cast<std::size_t>(y) * W + x] = v;
        }

    for (bool b : part.mask) (b ? part.saturated_count : part.unsaturated_count)++;
    if (part.unsaturated_count == 0)
        throw DegenerateImageError("every pixel is saturated; nothing anchors estimation");
    return part;
}

DarkPixelSet estimate_dark_stray(const RadianceMap& Y, const SaturationPartition& part,
                                 double sigma, int patch, double quantile) {
    if (!(sigma > 0.0)) throw ArgumentError("dark sigma must be > 0");
    if (patch < 1 || patch % 2 == 0) throw ArgumentError("dark patch must be odd and >= 1");
    if (!(quantile > 0.0 && quantile <= 1.0)) throw ArgumentError("dark quantile must be in (0, 1]");
    if (part.unsaturated_count == 0) throw DegenerateImageError("no unsaturated pixels");

    const int W = Y.width(), H = Y.height(), C = Y.channels();
    RadianceMap blurred = gaussian_blur(Y, sigma);
    const int r = patch / 2;

    // (dark-channel value, own blurred value, pixel index): the own value
    // breaks ties so that within an equally-dark neighborhood the pixels
    // whose readings actually anchor the stray estimate are preferred.
    std::vector<std::tuple<double, double, int>> dark;
    dark.reserve(part.unsaturated_count);
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            const int idx = y * W + x;
            if (part.mask[idx]) continue;
            double mn = std::numeric_limits<double>::infinity();
            double own = std::numeric_limits<double>::infinity();
            for (int c = 0; c < C; ++c) own = std::min(own, blurred.at(x, y, c));
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx) {
                    const int xx = x + dx, yy = y + dy;
                    if (xx < 0 || yy < 0 || xx >= W || yy >= H) continue;
                    if (part.mask[static_cast<std::size_t>(yy) * W + xx]) continue;
                    for (int c = 0; c < C; ++c)
                        mn = std::min(mn, blurred.at(xx, yy, c));
                }
            dark.emplace_back(mn, own, idx);
        }

    std::sort(dark.begin(), dark.end());
    const std::size_t take =
        std::max<std::size_t>(1, static_cast<std::size_t>(quantile * dark.size()));

    DarkPixelSet out;
    out.blur_sigma = sigma;
    out.indices.reserve(take);
    for (std::size_t i = 0; i < take && i < dark.size(); ++i)
        out.indices.push_back(std::get<2>(dark[i]));
    std::sort(out.indices.begin(), out.indices.end());
    out.stray_estimate.reserve(take * C);
    for (int idx : out.indices) {
        const int x = idx % W, y = idx / W;
        for (int c = 0; c < C; ++c) out.stray_estimate.push_back(blurred.at(x, y, c));
    }
    return out;
}

RadianceMap estimate_saturated_radiance(const RadianceMap& Y, const SaturationPartition& part,
                                        const DarkPixelSet& dark, const GsfKernel& kernel,
                                        double lambda1, const DeglareOptions& opts,
                                        DeglareReport* report) {
    if (!kernel.matches(Y)) throw KernelError("image dimensions do not match kernel base");
    if (dark.indices.empty()) throw EstimationError("empty dark pixel set");
    if (part.saturated_count == 0) throw EstimationError("no saturated pixels to estimate");
    if (lambda1 < 0.0) throw ArgumentError("lambda1 must be >= 0");

    const double tol_y = 1e-6 * Y.max_value();
    const double clip_level = (1.0 - 1e-9) * opts.ceiling.value_or(Y.max_value());
    SpectralOps ops(kernel, opts.wiener.nsr);

    DeglareReport rep;
    rep.saturated_count = part.saturated_count;
    rep.unsaturated_count = part.unsaturated_count;
    rep.dark_count = static_cast<int>(dark.indices.size());
    rep.unsat_residual_min = rep.stray_min = rep.deconv_min = std::numeric_limits<double>::infinity();

    std::vector<RadianceMap> planes;
    double compose_max = 0.0;
    for (int c = 0; c < Y.channels(); ++c) {
        ChannelSolution sol =
            solve_channel(extract_plane(Y, c), part, dark.indices, ops, lambda1, opts, tol_y,
                          clip_level);
        rep.inner_iterations += sol.iterations;
        rep.final_objective += sol.objective;
        rep.lower_bound_active = rep.lower_bound_active || sol.lower_bound_active;
        rep.unsat_residual_min = std::min(rep.unsat_residual_min, sol.unsat_residual_min);
        rep.stray_min = std::min(rep.stray_min, sol.stray_min);
        rep.deconv_min = std::min(rep.deconv_min, sol.deconv_min);
        compose_max = std::max(compose_max, sol.compose_max_);
        planes.emplace_back(Y.width(), Y.height(), 1, std::move(sol.xs));
    }
    rep.tolerance = 1e-6 * std::max(Y.max_value(), compose_max);

    if (report) *report = rep;
    return Y.channels() == 1 ? planes.front() : RadianceMap::from_channels(planes);
}

RadianceMap wiener_deconvolve(const RadianceMap& Y, const GsfKernel& kernel,
                              const WienerConfig& cfg) {
    if (!kernel.matches(Y)) throw KernelError("image dimensions do not match kernel base");
    if (cfg.nsr < 0.0) throw ArgumentError("nsr must be >= 0");
    SpectralOps ops(kernel, cfg.nsr);
    std::vector<RadianceMap> planes;
    for (int c = 0; c < Y.channels(); ++c) {
        Plane out = ops.wiener(extract_plane(Y, c));
        RadianceMap plane(Y.width(), Y.height(), 1, std::move(out));
        plane.clamp_non_negative();
        planes.push_back(std::move(plane));
    }
    return Y.channels() == 1 ? planes.front() : RadianceMap::from_channels(planes);
}

std::pair<RadianceMap, DeglareReport> deglare(const RadianceMap& Y, const GsfKernel& kernel,
                                              const DeglareOptions& opts) {
    if (!kernel.matches(Y)) throw KernelError("image dimensions do not match kernel base");
    SaturationPartition part = detect_saturation(Y, opts.sat_threshold_frac, opts.ceiling);

    DeglareReport rep;
    rep.saturated_count = part.saturated_count;
    rep.unsaturated_count = part.unsaturated_count;
    rep.tolerance = 1e-6 * Y.max_value();

    if (part.saturated_count == 0) {
        return {wiener_deconvolve(Y, kernel, opts.wiener), rep};
    }

    DarkPixelSet dark =
        estimate_dark_stray(Y, part, opts.dark_sigma, opts.dark_patch, opts.dark_quantile);

    double lambda1 = opts.lambda1;
    if (lambda1 < 0.0) {
        double mean = 0.0;
        for (double v : dark.stray_estimate) mean += v;
        mean /= static_cast<double>(dark.stray_estimate.size());
        lambda1 = 1e-3 * mean;
    }

    RadianceMap xs = estimate_saturated_radiance(Y, part, dark, kernel, lambda1, opts, &rep);

    // Final composite: at pixels the sensor actually clipped, the estimate of
    // what it would have read without clipping — the glare-spread of the
    // recovered radiance, never below the clipped reading — and the valid
    // observation everywhere else. Substituting the raw radiance instead
    // over-represents the sources by the non-centre kernel mass and carves an
    // over-subtraction halo into U after deconvolution.
    const double clip_level = (1.0 - 1e-9) * opts.ceiling.value_or(Y.max_value());
    const RadianceMap spread = simulate_glare(xs, kernel);
    RadianceMap composite(Y.width(), Y.height(), Y.channels());
    for (int y = 0; y < Y.height(); ++y)
        for (int x = 0; x < Y.width(); ++x)
            for (int c = 0; c < Y.channels(); ++c) {
                const double obs = Y.at(x, y, c);
                composite.at(x, y, c) =
                    obs >= clip_level ? std::max(spread.at(x, y, c), obs) : obs;
            }

    RadianceMap restored = wiener_deconvolve(composite, kernel, opts.wiener);
    return {std::move(restored), rep};
}

std::string DeglareReport::to_json() const {
    nlohmann::json j;
    j["saturated_count"] = saturated_count;
    j["unsaturated_count"] = unsaturated_count;
    j["dark_count"] = dark_count;
    j["inner_iterations"] = inner_iterations;
    j["final_objective"] = final_objective;
    j["lower_bound_active"] = lower_bound_active;
    j["unsat_residual_min"] = unsat_residual_min;
    j["stray_min"] = stray_min;
    j["deconv_min"] = deconv_min;
    j["tolerance"] = tolerance;
    return j.dump(2);
}

}  // namespace glare
