#pragma once

#include <map>
#include <string>
#include <vector>

#include "glare/errors.hpp"

namespace glare {

struct BoundingBox {
    double x1 = 0, y1 = 0, x2 = 0, y2 = 0;  // x1 < x2, y1 < y2
    std::string class_id;
    double score = 0.0;  // predictions only

    void validate() const;
    double area() const { return (x2 - x1) * (y2 - y1); }
};

/// Intersection-over-union of two axis-aligned boxes.
double box_iou(const BoundingBox& a, const BoundingBox& b);

struct DetectionSet {
    std::string image_id;
    std::vector<BoundingBox> boxes;
};

struct TrackEntry {
    int track_id = 0;
    BoundingBox box;
};

struct TrackFrame {
    int t = 0;
    std::vector<TrackEntry> entries;  // track ids unique within a frame

    void validate() const;
};

struct LanePointSet {
    std::string image_id;
    std::vector<std::pair<double, double>> points;  // ordered (x, y)
};

struct DepthMap {
    int width = 0, height = 0;
    std::vector<double> data;  // finite relative depth

    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

/// Region IoU of the rasterized unions of all boxes on the integer pixel
/// grid. Both empty -> 1; one empty -> 0.
double miou(const DetectionSet& pred, const DetectionSet& ref);

/// Ranked-sweep average precision for one class with greedy one-to-one
/// matching at the IoU threshold.
double average_precision(std::vector<BoundingBox> preds, const std::vector<BoundingBox>& refs,
                         double iou_thresh);

/// Unweighted mean AP over classes present in the references.
double mean_ap(const std::map<std::string, std::vector<BoundingBox>>& per_class_preds,
               const std::map<std::string, std::vector<BoundingBox>>& per_class_refs,
               double iou_thresh);

struct TrackingScore {
    double mota = 0.0;  // may be negative
    double motp = 0.0;
    int false_negatives = 0;
    int false_positives = 0;
    int id_switches = 0;
    int ground_truth = 0;
    int matches = 0;
};

/// Frame-by-frame greedy IoU assignment with previous-pairing persistence.
TrackingScore mota_motp(const std::vector<TrackFrame>& pred_frames,
                        const std::vector<TrackFrame>& ref_frames, double iou_thresh);

/// Both polylines resampled at the integer y rows spanned by the reference,
/// then pointwise 2-D RMSE.
double rmse_points(const LanePointSet& pred, const LanePointSet& ref);

/// Linear interpolation of x at each integer row in [y_lo, y_hi] along the
/// polyline; exposed for oracle tests.
std::vector<std::pair<double, double>> resample_at_rows(const LanePointSet& lane, int y_lo, int y_hi);

/// RMSE over masked pixels after median-ratio scale alignment of pred.
double rmse_depth(const DepthMap& pred, const DepthMap& ref, const std::vector<bool>& mask);

// JSON Lines prediction/ground-truth files.
std::vector<DetectionSet> load_detections_jsonl(const std::string& path);
std::vector<TrackFrame> load_tracks_jsonl(const std::string& path);
std::vector<LanePointSet> load_lanes_jsonl(const std::string& path);

struct ScoreRecord {
    std::string metric;
    double value = 0.0;
    long support = 0;

    std::string to_json() const;
};

void write_score_csv(const std::string& path, const std::vector<ScoreRecord>& records);

}  // namespace glare
