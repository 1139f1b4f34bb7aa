#include "glare/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include <json.hpp>

namespace glare {

void BoundingBox::validate() const {
    if (!(x1 < x2 && y1 < y2)) throw MetricError("degenerate bounding box");
}

double box_iou(const BoundingBox& a, const BoundingBox& b) {
    const double ix = std::max(0.0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
    const double iy = std::max(0.0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

void TrackFrame::validate() const {
    std::set<int> ids;
    for (const TrackEntry& e : entries)
        if (!ids.insert(e.track_id).second)
            throw MetricError("duplicate track id in frame");
}

double miou(const DetectionSet& pred, const DetectionSet& ref) {
    for (const auto& b : pred.boxes) b.validate();
    for (const auto& b : ref.boxes) b.validate();
    if (pred.boxes.empty() && ref.boxes.empty()) return 1.0;
    if (pred.boxes.empty() || ref.boxes.empty()) return 0.0;

    // Rasterize both unions over their joint integer bounding region;
    // a pixel (x, y) is covered when [x, x+1) x [y, y+1) starts inside the box.
    int x_lo = std::numeric_limits<int>::max(), y_lo = x_lo;
    int x_hi = std::numeric_limits<int>::min(), y_hi = x_hi;
    auto grow = [&](const BoundingBox& b) {
        x_lo = std::min(x_lo, static_cast<int>(std::floor(b.x1)));
        y_lo = std::min(y_lo, static_cast<int>(std::floor(b.y1)));
        x_hi = std::max(x_hi, static_cast<int>(std::ceil(b.x2)));
        y_hi = std::max(y_hi, static_cast<int>(std::ceil(b.y2)));
    };
    for (const auto& b : pred.boxes) grow(b);
    for (const auto& b : ref.boxes) grow(b);

    long inter = 0, uni = 0;
    for (int y = y_lo; y < y_hi; ++y)
        for (int x = x_lo; x < x_hi; ++x) {
            auto covered = [&](const std::vector<BoundingBox>& boxes) {
                for (const auto& b : boxes)
                    if (x >= b.x1 && x < b.x2 && y >= b.y1 && y < b.y2) return true;
                return false;
            };
            const bool p = covered(pred.boxes), r = covered(ref.boxes);
            if (p && r) ++inter;
            if (p || r) ++uni;
        }
    return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 1.0;
}

double average_precision(std::vector<BoundingBox> preds, const std::vector<BoundingBox>& refs,
                         double iou_thresh) {
    if (!(iou_thresh > 0.0 && iou_thresh < 1.0)) throw MetricError("iou_thresh must be in (0,1)");
    if (refs.empty()) return preds.empty() ? 1.0 : 0.0;

    std::stable_sort(preds.begin(), preds.end(),
                     [](const BoundingBox& a, const BoundingBox& b) { return a.score > b.score; });

    std::vector<bool> used(refs.size(), false);
    double ap = 0.0;
    double prev_recall = 0.0;
    int tp = 0;
    for (std::size_t n = 0; n < preds.size(); ++n) {
        int best = -1;
        double best_iou = iou_thresh;
        for (std::size_t j = 0; j < refs.size(); ++j) {
            if (used[j]) continue;
            const double iou = box_iou(preds[n], refs[j]);
            if (iou >= best_iou) {
                best_iou = iou;
                best = static_cast<int>(j);
            }
        }
        if (best >= 0) {
            used[best] = true;
            ++tp;
        }
        const double recall = static_cast<double>(tp) / static_cast<double>(refs.size());
        const double precision = static_cast<double>(tp) / static_cast<double>(n + 1);
        ap += (recall - prev_recall) * precision;
        prev_recall = recall;
    }
    return ap;
}

double mean_ap(const std::map<std::string, std::vector<BoundingBox>>& per_class_preds,
               const std::map<std::string, std::vector<BoundingBox>>& per_class_refs,
               double iou_thresh) {
    if (per_class_refs.empty()) throw MetricError("mean_ap: no classes in references");
    double sum = 0.0;
    for (const auto& [cls, refs] : per_class_refs) {
        const auto it = per_class_preds.find(cls);
        static const std::vector<BoundingBox> kEmpty;
        sum += average_precision(it != per_class_preds.end() ? it->second : kEmpty, refs, iou_thresh);
    }
    return sum / static_cast<double>(per_class_refs.size());
}

TrackingScore mota_motp(const std::vector<TrackFrame>& pred_frames,
                        const std::vector<TrackFrame>& ref_frames, double iou_thresh) {
    if (!(iou_thresh > 0.0 && iou_thresh < 1.0)) throw MetricError("iou_thresh must be in (0,1)");
    std::map<int, const TrackFrame*> preds_by_t, refs_by_t;
    for (const auto& f : pred_frames) {
        f.validate();
        preds_by_t[f.t] = &f;
    }
    std::set<int> times;
    for (const auto& f : ref_frames) {
        f.validate();
        refs_by_t[f.t] = &f;
        times.insert(f.t);
    }
    for (const auto& f : pred_frames) times.insert(f.t);

    TrackingScore score;
    double dist_sum = 0.0;
    std::map<int, int> last_match;  // gt track id -> pred track id

    for (int t : times) {
        static const TrackFrame kEmpty;
        const TrackFrame& pf = preds_by_t.count(t) ? *preds_by_t[t] : kEmpty;
        const TrackFrame& rf = refs_by_t.count(t) ? *refs_by_t[t] : kEmpty;
        score.ground_truth += static_cast<int>(rf.entries.size());

        std::vector<bool> pred_used(pf.entries.size(), false);
        std::vector<bool> ref_used(rf.entries.size(), false);
        std::vector<std::pair<int, int>> pairs;  // (ref idx, pred idx)

        // persistence: keep last frame's pairing when still valid
        for (std::size_t j = 0; j < rf.entries.size(); ++j) {
            const auto it = last_match.find(rf.entries[j].track_id);
            if (it == last_match.end()) continue;
            for (std::size_t i = 0; i < pf.entries.size(); ++i) {
                if (pred_used[i] || pf.entries[i].track_id != it->second) continue;
                if (box_iou(rf.entries[j].box, pf.entries[i].box) >= iou_thresh) {
                    pairs.emplace_back(static_cast<int>(j), static_cast<int>(i));
                    ref_used[j] = pred_used[i] = true;
                }
                break;
            }
        }
        // greedy IoU for the rest
        while (true) {
            double best_iou = iou_thresh;
            int bj = -1, bi = -1;
            for (std::size_t j = 0; j < rf.entries.size(); ++j) {
                if (ref_used[j]) continue;
                for (std::size_t i = 0; i < pf.entries.size(); ++i) {
                    if (pred_used[i]) continue;
                    const double iou = box_iou(rf.entries[j].box, pf.entries[i].box);
                    if (iou > best_iou || (iou == best_iou && bj < 0)) {
                        best_iou = iou;
                        bj = static_cast<int>(j);
                        bi = static_cast<int>(i);
                    }
                }
            }
            if (bj < 0) break;
            pairs.emplace_back(bj, bi);
            ref_used[bj] = pred_used[bi] = true;
        }

        for (const auto& [j, i] : pairs) {
            const int gt_id = rf.entries[j].track_id;
            const int pred_id = pf.entries[i].track_id;
            const auto it = last_match.find(gt_id);
            if (it != last_match.end() && it->second != pred_id) ++score.id_switches;
            last_match[gt_id] = pred_id;
            dist_sum += 1.0 - box_iou(rf.entries[j].box, pf.entries[i].box);
            ++score.matches;
        }
        score.false_negatives += static_cast<int>(rf.entries.size() - pairs.size());
        score.false_positives += static_cast<int>(pf.entries.size() - pairs.size());
    }

    if (score.ground_truth == 0) throw MetricError("MOTA undefined: no ground-truth objects");
    score.mota = 1.0 - static_cast<double>(score.false_negatives + score.false_positives +
                                           score.id_switches) /
                           static_cast<double>(score.ground_truth);
    score.motp = score.matches > 0 ? 1.0 - dist_sum / static_cast<double>(score.matches) : 0.0;
    return score;
}

std::vector<std::pair<double, double>> resample_at_rows(const LanePointSet& lane, int y_lo,
                                                        int y_hi) {
    if (lane.points.size() < 2) throw MetricError("lane needs at least 2 points");
    std::vector<std::pair<double, double>> out;
    for (int y = y_lo; y <= y_hi; ++y) {
        const double yy = y;
        bool found = false;
        for (std::size_t i = 0; i + 1 < lane.points.size() && !found; ++i) {
            const auto& [ax, ay] = lane.points[i];
            const auto& [bx, by] = lane.points[i + 1];
            const double lo = std::min(ay, by), hi = std::max(ay, by);
            if (yy < lo || yy > hi) continue;
            const double t = hi == lo ? 0.0 : (yy - ay) / (by - ay);
            out.emplace_back(ax + t * (bx - ax), yy);
            found = true;
        }
        if (!found) {
            // outside the polyline's y-span: clamp to the nearest endpoint
            const auto& nearest =
                std::abs(lane.points.front().second - yy) <= std::abs(lane.points.back().second - yy)
                    ? lane.points.front()
                    : lane.points.back();
            out.emplace_back(nearest.first, yy);
        }
    }
    return out;
}

double rmse_points(const LanePointSet& pred, const LanePointSet& ref) {
    if (pred.points.size() < 2 || ref.points.size() < 2)
        throw MetricError("rmse_points needs at least 2 points per polyline");
    double ry_lo = std::numeric_limits<double>::infinity(), ry_hi = -ry_lo;
    for (const auto& [x, y] : ref.points) {
        ry_lo = std::min(ry_lo, y);
        ry_hi = std::max(ry_hi, y);
    }
    const int y_lo = static_cast<int>(std::ceil(ry_lo));
    const int y_hi = static_cast<int>(std::floor(ry_hi));
    if (y_hi < y_lo) throw MetricError("reference lane spans no integer rows");

    const auto a = resample_at_rows(ref, y_lo, y_hi);
    const auto p = resample_at_rows(pred, y_lo, y_hi);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double dx = a[i].first - p[i].first;
        const double dy = a[i].second - p[i].second;
        sum += dx * dx + dy * dy;
    }
    return std::sqrt(sum / static_cast<double>(a.size()));
}

double rmse_depth(const DepthMap& pred, const DepthMap& ref, const std::vector<bool>& mask) {
    if (pred.width != ref.width || pred.height != ref.height)
        throw MetricError("depth map dimensions differ");
    if (mask.size() != pred.data.size()) throw MetricError("mask size mismatch");

    std::vector<double> ratios;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i] && pred.data[i] != 0.0) ratios.push_back(ref.data[i] / pred.data[i]);
    double scale = 1.0;
    if (!ratios.empty()) {
        std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
        scale = ratios[ratios.size() / 2];
        if (ratios.size() % 2 == 0) {
            const double upper = scale;
            std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2 - 1, ratios.end());
            scale = 0.5 * (ratios[ratios.size() / 2 - 1] + upper);
        }
    }

    double sum = 0.0;
    long n = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (!mask[i]) continue;
        const double d = scale * pred.data[i] - ref.data[i];
        sum += d * d;
        ++n;
    }
    if (n == 0) throw MetricError("rmse_depth: empty mask");
    return std::sqrt(sum / static_cast<double>(n));
}

namespace {

BoundingBox box_from_json(const nlohmann::json& j) {
    BoundingBox b;
    b.x1 = j.at("x1").get<double>();
    b.y1 = j.at("y1").get<double>();
    b.x2 = j.at("x2").get<double>();
    b.y2 = j.at("y2").get<double>();
    if (j.contains("class")) b.class_id = j.at("class").get<std::string>();
    if (j.contains("score")) b.score = j.at("score").get<double>();
    b.validate();
    return b;
}

std::vector<nlohmann::json> read_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    std::vector<nlohmann::json> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        lines.push_back(nlohmann::json::parse(line));
    }
    return lines;
}

}  // namespace

std::vector<DetectionSet> load_detections_jsonl(const std::string& path) {
    std::vector<DetectionSet> out;
    for (const auto& j : read_jsonl(path)) {
        DetectionSet set;
        set.image_id = j.at("image_id").get<std::string>();
        if (set.image_id.empty()) throw FormatError("empty image_id in " + path);
        for (const auto& b : j.value("boxes", nlohmann::json::array()))
            set.boxes.push_back(box_from_json(b));
        out.push_back(std::move(set));
    }
    return out;
}

std::vector<TrackFrame> load_tracks_jsonl(const std::string& path) {
    std::vector<TrackFrame> out;
    for (const auto& j : read_jsonl(path)) {
        TrackFrame f;
        f.t = j.at("t").get<int>();
        for (const auto& e : j.value("entries", nlohmann::json::array())) {
            TrackEntry entry;
            entry.track_id = e.at("id").get<int>();
            entry.box = box_from_json(e.at("box"));
            f.entries.push_back(std::move(entry));
        }
        f.validate();
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<LanePointSet> load_lanes_jsonl(const std::string& path) {
    std::vector<LanePointSet> out;
    for (const auto& j : read_jsonl(path)) {
        LanePointSet lane;
        lane.image_id = j.at("image_id").get<std::string>();
        for (const auto& p : j.at("points"))
            lane.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        out.push_back(std::move(lane));
    }
    return out;
}

std::string ScoreRecord::to_json() const {
    nlohmann::json j{{"metric", metric}, {"value", value}, {"support", support}};
    return j.dump();
}

void write_score_csv(const std::string& path, const std::vector<ScoreRecord>& records) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path);
    out << "metric,value,support\n";
    for (const auto& r : records) out << r.metric << "," << r.value << "," << r.support << "\n";
}

}  // namespace glare
