#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace capsynth::eval {

/// Axis-aligned box in continuous pixel coordinates, corners (x0,y0)-(x1,y1).
struct Box {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    double area() const { return (x1 - x0) * (y1 - y0); }
    bool degenerate() const { return x1 <= x0 || y1 <= y0; }
};

/// Intersection over union; throws on degenerate boxes.
double iou(const Box& a, const Box& b);

struct Detection {
    std::string image_id;
    int class_id = 0;
    Box box;
    double confidence = 0.0;
};

struct GroundTruth {
    std::string image_id;
    int class_id = 0;
    Box box;
};

struct MatchResult {
    std::vector<std::uint8_t> det_is_tp;   // per input detection
    std::vector<int> det_matched_gt;       // index into gts, -1 for FP
    std::vector<std::uint8_t> gt_matched;  // per ground truth
};

/// Greedy one-to-one matching: detections in descending confidence order
/// (ties by input order) take the unmatched same-class, same-image ground
/// truth of highest IoU when that IoU is strictly above the threshold.
MatchResult match_detections(const std::vector<Detection>& dets,
                             const std::vector<GroundTruth>& gts, double iou_threshold = 0.5);

/// All-point interpolated area under the precision-recall curve.
/// `conf_tp` pairs (confidence, is_tp) need not be sorted. When n_gt is 0
/// and detections exist the AP is defined as 0 and flagged.
double average_precision(const std::vector<std::pair<double, bool>>& conf_tp, std::size_t n_gt,
                         bool* flagged_no_gt = nullptr);

struct ClassReport {
    int class_id = 0;
    double ap = 0.0;
    std::size_t tp = 0, fp = 0, fn = 0, n_gt = 0;
    bool flagged_no_gt = false;
};

struct EvalReport {
    std::vector<ClassReport> per_class;  // ascending class id
    double map = 0.0;
    double iou_threshold = 0.5;
};

EvalReport evaluate(const std::vector<Detection>& dets, const std::vector<GroundTruth>& gts,
                    double iou_threshold = 0.5);

/// Line format: image_id class confidence x_min y_min x_max y_max.
std::vector<Detection> read_detections(const std::string& path);
void write_detections(const std::string& path, const std::vector<Detection>& dets);

/// Human-readable table plus machine-readable key-value file.
void write_report(const std::string& table_path, const std::string& kv_path,
                  const EvalReport& report);

}  // namespace capsynth::eval
