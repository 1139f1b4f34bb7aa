#include "pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <vector>

#include <json.hpp>

#include "glare/encode.hpp"
#include "glare/errors.hpp"
#include "glare/filters.hpp"
#include "glare/gsf.hpp"
#include "glare/image_io.hpp"
#include "util.hpp"

using nlohmann::json;

namespace cli {

glare::RadianceMap run_glare_a(const glare::RadianceMap& img, const GlareAConfig& cfg,
                               glare::DeglareReport* report) {
    if (cfg.method == "none") return img;
    const glare::GsfParams params = glare::GsfParams::load(cfg.gsf_path);
    const glare::GsfKernel kernel(params, img.width(), img.height());
    if (cfg.method == "wiener") {
        glare::RadianceMap out = glare::wiener_deconvolve(img, kernel, cfg.opts.wiener);
        out.clamp_non_negative();
        return out;
    }
    if (cfg.method == "deglare") {
        auto [out, rep] = glare::deglare(img, kernel, cfg.opts);
        if (report) *report = rep;
        return out;
    }
    throw glare::ArgumentError("unknown glare reduction method: " + cfg.method);
}

namespace {

glare::DepthMap load_depth(const std::string& path) {
    glare::RadianceMap img = glare::load_image(path);
    if (img.channels() != 1)
        throw glare::MetricError("depth maps must be single-channel: " + path);
    return glare::DepthMap{img.width(), img.height(), img.data()};
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return pairwise_sum(v.data(), v.size()) / static_cast<double>(v.size());
}

std::map<std::string, std::vector<glare::BoundingBox>> by_class(
    const std::vector<glare::BoundingBox>& boxes) {
    std::map<std::string, std::vector<glare::BoundingBox>> out;
    for (const auto& b : boxes) out[b.class_id].push_back(b);
    return out;
}

}  // namespace

glare::ScoreRecord run_score(const ScoreRequest& req) {
    glare::ScoreRecord rec;
    rec.metric = req.metric;

    if (req.metric == "miou" || req.metric == "map") {
        const auto preds = glare::load_detections_jsonl(req.pred);
        const auto refs = glare::load_detections_jsonl(req.ref);
        std::map<std::string, const glare::DetectionSet*> pred_by_id;
        for (const auto& p : preds) pred_by_id[p.image_id] = &p;
        std::vector<double> values;
        for (const auto& r : refs) {
            glare::DetectionSet pred;  // empty when the image has no predictions
            pred.image_id = r.image_id;
            if (auto it = pred_by_id.find(r.image_id); it != pred_by_id.end()) pred = *it->second;
            if (req.metric == "miou")
                values.push_back(glare::miou(pred, r));
            else
                values.push_back(glare::mean_ap(by_class(pred.boxes), by_class(r.boxes), req.iou));
        }
        rec.value = mean_of(values);
        rec.support = static_cast<long>(values.size());
    } else if (req.metric == "mota" || req.metric == "motp") {
        const auto preds = glare::load_tracks_jsonl(req.pred);
        const auto refs = glare::load_tracks_jsonl(req.ref);
        const glare::TrackingScore s = glare::mota_motp(preds, refs, req.iou);
        rec.value = req.metric == "mota" ? s.mota : s.motp;
        rec.support = static_cast<long>(refs.size());
    } else if (req.metric == "lane-rmse") {
        const auto preds = glare::load_lanes_jsonl(req.pred);
        const auto refs = glare::load_lanes_jsonl(req.ref);
        if (preds.size() != refs.size())
            throw glare::MetricError("lane files differ in line count");
        std::vector<double> values;
        for (std::size_t i = 0; i < refs.size(); ++i)
            values.push_back(glare::rmse_points(preds[i], refs[i]));
        rec.value = mean_of(values);
        rec.support = static_cast<long>(values.size());
    } else if (req.metric == "depth-rmse") {
        const glare::DepthMap pred = load_depth(req.pred);
        const glare::DepthMap ref = load_depth(req.ref);
        std::vector<bool> mask(ref.data.size(), true);
        if (!req.mask.empty()) {
            const glare::RadianceMap m = glare::load_image(req.mask);
            if (m.channels() != 1 || static_cast<std::size_t>(m.width()) * m.height() != mask.size())
                throw glare::MetricError("mask shape does not match the reference depth map");
            for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = m.data()[i] != 0.0;
        }
        rec.value = glare::rmse_depth(pred, ref, mask);
        rec.support = static_cast<long>(std::count(mask.begin(), mask.end(), true));
    } else {
        throw glare::ArgumentError("unknown metric: " + req.metric);
    }

    if (!req.out_json.empty()) {
        std::ofstream f(req.out_json);
        if (!f) throw glare::ArgumentError("cannot write " + req.out_json);
        f << rec.to_json() << "\n";
    }
    if (!req.out_csv.empty()) glare::write_score_csv(req.out_csv, {rec});
    return rec;
}

namespace {

json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw glare::ArgumentError("cannot open " + path);
    return json::parse(f);
}

GlareAConfig parse_glare_a(const json& j) {
    check_keys(j, "glare_reduction_a",
               {"method", "gsf", "nsr", "sat_threshold", "dark_sigma", "dark_patch",
                "dark_quantile", "lambda1", "ceiling"});
    GlareAConfig cfg;
    cfg.method = j.value("method", std::string("deglare"));
    if (cfg.method != "none") cfg.gsf_path = j.at("gsf").get<std::string>();
    cfg.opts.wiener.nsr = j.value("nsr", cfg.opts.wiener.nsr);
    cfg.opts.sat_threshold_frac = j.value("sat_threshold", cfg.opts.sat_threshold_frac);
    cfg.opts.dark_sigma = j.value("dark_sigma", cfg.opts.dark_sigma);
    cfg.opts.dark_patch = j.value("dark_patch", cfg.opts.dark_patch);
    cfg.opts.dark_quantile = j.value("dark_quantile", cfg.opts.dark_quantile);
    cfg.opts.lambda1 = j.value("lambda1", cfg.opts.lambda1);
    if (j.contains("ceiling")) cfg.opts.ceiling = j.at("ceiling").get<double>();
    return cfg;
}

}  // namespace

int run_pipeline(const std::string& config_path) {
    const json cfg = load_json_file(config_path);
    check_keys(cfg, "pipeline config",
               {"version", "input", "demosaic", "white_balance", "glare_reduction_a", "encode",
                "glare_reduction_b", "score", "output"});
    if (cfg.value("version", 0) != 1)
        throw glare::ArgumentError("pipeline config requires \"version\": 1");

    const json& input = cfg.at("input");
    check_keys(input, "input", {"image", "raw"});
    if (input.contains("image") == input.contains("raw"))
        throw glare::ArgumentError("input needs exactly one of \"image\" or \"raw\"");

    json report;
    report["config"] = config_path;
    glare::RadianceMap img;
    if (input.contains("raw")) {
        const json& r = input.at("raw");
        check_keys(r, "input.raw", {"path", "bit_depth", "cfa"});
        glare::RawFrame raw;
        const glare::RadianceMap counts = glare::load_image(r.at("path").get<std::string>());
        if (counts.channels() != 1)
            throw glare::ArgumentError("raw input must be a single-channel count image");
        raw.width = counts.width();
        raw.height = counts.height();
        raw.samples = counts.data();
        raw.bit_depth = r.value("bit_depth", 12);
        raw.cfa = glare::cfa_from_string(r.value("cfa", std::string("RGGB")));
        if (!cfg.value("demosaic", true))
            throw glare::ArgumentError("raw input requires the demosaic stage");
        img = glare::demosaic_bilinear(raw);
        report["stages"].push_back("demosaic");
    } else {
        if (cfg.value("demosaic", false))
            throw glare::ArgumentError("demosaic requires a raw input");
        img = glare::load_image(input.at("image").get<std::string>());
    }

    if (cfg.contains("white_balance") && !cfg.at("white_balance").is_null()) {
        const json& wb = cfg.at("white_balance");
        check_keys(wb, "white_balance", {"x", "y", "w", "h"});
        glare::Rect patch{wb.at("x").get<int>(), wb.at("y").get<int>(), wb.at("w").get<int>(),
                          wb.at("h").get<int>()};
        img = glare::white_balance(img, patch);
        report["stages"].push_back("white_balance");
    }

    if (cfg.contains("glare_reduction_a")) {
        const GlareAConfig ga = parse_glare_a(cfg.at("glare_reduction_a"));
        if (ga.method != "none") {
            glare::DeglareReport rep;
            img = run_glare_a(img, ga, &rep);
            report["stages"].push_back("glare_reduction_a:" + ga.method);
            if (ga.method == "deglare") report["deglare"] = json::parse(rep.to_json());
        }
    }

    if (cfg.contains("encode")) {
        const json& e = cfg.at("encode");
        check_keys(e, "encode", {"tf", "ceiling", "quant_bits"});
        const glare::TransferFunction tf = glare::tf_from_flag(e.at("tf").get<std::string>());
        if (!std::holds_alternative<glare::LogTf>(tf)) {
            double ceiling = e.contains("ceiling") ? e.at("ceiling").get<double>() : img.max_value();
            if (ceiling <= 0.0) ceiling = 1.0;
            for (double& v : img.data()) v /= ceiling;
            report["encode_ceiling"] = ceiling;
        }
        glare::EncodedImage enc = glare::encode(img, tf);
        if (e.contains("quant_bits") && !e.at("quant_bits").is_null())
            enc = glare::quantize(enc, e.at("quant_bits").get<int>());
        img = enc.values;
        report["stages"].push_back("encode");
    }

    if (cfg.contains("glare_reduction_b")) {
        const json& b = cfg.at("glare_reduction_b");
        check_keys(b, "glare_reduction_b", {"method", "sigma", "amount"});
        const std::string method = b.value("method", std::string("unsharp"));
        if (method == "unsharp") {
            img = glare::unsharp_mask(img, b.value("sigma", 1.5), b.value("amount", 0.5));
            report["stages"].push_back("glare_reduction_b:unsharp");
        } else if (method != "none") {
            throw glare::ArgumentError("unknown glare reduction B method: " + method);
        }
    }

    const json& output = cfg.at("output");
    check_keys(output, "output", {"image", "report"});
    const std::string out_path = output.at("image").get<std::string>();
    glare::save_image(img, out_path);
    report["output"] = out_path;

    if (cfg.contains("score")) {
        const json& s = cfg.at("score");
        check_keys(s, "score", {"metric", "pred", "ref", "mask", "iou", "out", "csv"});
        ScoreRequest req;
        req.metric = s.at("metric").get<std::string>();
        req.pred = s.at("pred").get<std::string>();
        req.ref = s.at("ref").get<std::string>();
        req.mask = s.value("mask", std::string());
        req.iou = s.value("iou", 0.5);
        req.out_json = s.value("out", std::string());
        req.out_csv = s.value("csv", std::string());
        const glare::ScoreRecord rec = run_score(req);
        report["score"] = json::parse(rec.to_json());
    }

    if (output.contains("report") && !output.at("report").is_null()) {
        std::ofstream f(output.at("report").get<std::string>());
        if (!f) throw glare::ArgumentError("cannot write pipeline report");
        f << report.dump(2) << "\n";
    }
    log("info", "cli", "pipeline complete: " + out_path);
    return 0;
}

}  // namespace cli
