#include "capsynth/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace capsynth::eval {

double iou(const Box& a, const Box& b) {
    if (a.degenerate() || b.degenerate()) throw std::invalid_argument("iou: degenerate box");
    double ix0 = std::max(a.x0, b.x0), iy0 = std::max(a.y0, b.y0);
    double ix1 = std::min(a.x1, b.x1), iy1 = std::min(a.y1, b.y1);
    double iw = ix1 - ix0, ih = iy1 - iy0;
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    double inter = iw * ih;
    return inter / (a.area() + b.area() - inter);
}

MatchResult match_detections(const std::vector<Detection>& dets,
                             const std::vector<GroundTruth>& gts, double iou_threshold) {
    MatchResult r;
    r.det_is_tp.assign(dets.size(), 0);
    r.det_matched_gt.assign(dets.size(), -1);
    r.gt_matched.assign(gts.size(), 0);

    std::vector<size_t> order(dets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return dets[a].confidence > dets[b].confidence;
    });

    for (size_t oi : order) {
        const Detection& det = dets[oi];
        double best_iou = 0.0;
        int best_gt = -1;
        for (size_t g = 0; g < gts.size(); ++g) {
            if (r.gt_matched[g]) continue;
            if (gts[g].class_id != det.class_id || gts[g].image_id != det.image_id) continue;
            double v = iou(det.box, gts[g].box);
            if (v > best_iou) {
                best_iou = v;
                best_gt = static_cast<int>(g);
            }
        }
        if (best_gt >= 0 && best_iou > iou_threshold) {
            r.det_is_tp[oi] = 1;
            r.det_matched_gt[oi] = best_gt;
            r.gt_matched[static_cast<size_t>(best_gt)] = 1;
        }
    }
    return r;
}

double average_precision(const std::vector<std::pair<double, bool>>& conf_tp, std::size_t n_gt,
                         bool* flagged_no_gt) {
    if (flagged_no_gt) *flagged_no_gt = false;
    if (n_gt == 0) {
        if (!conf_tp.empty() && flagged_no_gt) *flagged_no_gt = true;
        return 0.0;
    }
    if (conf_tp.empty()) return 0.0;

    std::vector<size_t> order(conf_tp.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return conf_tp[a].first > conf_tp[b].first; });

    const size_t n = order.size();
    std::vector<double> precision(n), recall(n);
    size_t tp = 0;
    for (size_t k = 0; k < n; ++k) {
        tp += conf_tp[order[k]].second ? 1 : 0;
        precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
        recall[k] = static_cast<double>(tp) / static_cast<double>(n_gt);
    }

    // Monotone non-increasing precision envelope, then the area under the
    // stepwise curve.
    for (size_t k = n - 1; k-- > 0;) precision[k] = std::max(precision[k], precision[k + 1]);

    double ap = 0.0;
    double prev_recall = 0.0;
    for (size_t k = 0; k < n; ++k) {
        ap += (recall[k] - prev_recall) * precision[k];
        prev_recall = recall[k];
    }
    return ap;
}

EvalReport evaluate(const std::vector<Detection>& dets, const std::vector<GroundTruth>& gts,
                    double iou_threshold) {
    MatchResult match = match_detections(dets, gts, iou_threshold);

    std::set<int> classes;
    for (const auto& d : dets) classes.insert(d.class_id);
    for (const auto& g : gts) classes.insert(g.class_id);

    EvalReport report;
    report.iou_threshold = iou_threshold;
    double ap_sum = 0.0;
    for (int cls : classes) {
        ClassReport cr;
        cr.class_id = cls;
        std::vector<std::pair<double, bool>> conf_tp;
        for (size_t i = 0; i < dets.size(); ++i) {
            if (dets[i].class_id != cls) continue;
            bool tp = match.det_is_tp[i] != 0;
            conf_tp.emplace_back(dets[i].confidence, tp);
            (tp ? cr.tp : cr.fp) += 1;
        }
        for (const auto& g : gts) cr.n_gt += g.class_id == cls;
        cr.fn = cr.n_gt - cr.tp;
        cr.ap = average_precision(conf_tp, cr.n_gt, &cr.flagged_no_gt);
        ap_sum += cr.ap;
        report.per_class.push_back(cr);
    }
    report.map = report.per_class.empty() ? 0.0 : ap_sum / static_cast<double>(report.per_class.size());
    return report;
}

std::vector<Detection> read_detections(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path);
    std::vector<Detection> dets;
    std::string line;
    size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        Detection d;
        if (!(ls >> d.image_id >> d.class_id >> d.confidence >> d.box.x0 >> d.box.y0 >> d.box.x1 >>
              d.box.y1))
            throw std::runtime_error(path + ": malformed detection at line " +
                                     std::to_string(lineno));
        if (d.box.degenerate())
            throw std::runtime_error(path + ": degenerate box at line " + std::to_string(lineno));
        if (d.confidence < 0.0 || d.confidence > 1.0)
            throw std::runtime_error(path + ": confidence out of [0,1] at line " +
                                     std::to_string(lineno));
        dets.push_back(std::move(d));
    }
    return dets;
}

void write_detections(const std::string& path, const std::vector<Detection>& dets) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << "# image_id class confidence x_min y_min x_max y_max\n";
    char buf[256];
    for (const auto& d : dets) {
        std::snprintf(buf, sizeof(buf), " %d %.6f %.3f %.3f %.3f %.3f\n", d.class_id, d.confidence,
                      d.box.x0, d.box.y0, d.box.x1, d.box.y1);
        os << d.image_id << buf;
    }
}

void write_report(const std::string& table_path, const std::string& kv_path,
                  const EvalReport& report) {
    {
        std::ofstream os(table_path);
        if (!os) throw std::runtime_error("cannot write " + table_path);
        char buf[256];
        os << "class      AP        TP     FP     FN     nGT\n";
        for (const auto& c : report.per_class) {
            std::snprintf(buf, sizeof(buf), "%-9d %-9.6f %-6zu %-6zu %-6zu %-6zu%s\n", c.class_id,
                          c.ap, c.tp, c.fp, c.fn, c.n_gt, c.flagged_no_gt ? "  (no gt)" : "");
            os << buf;
        }
        std::snprintf(buf, sizeof(buf), "mAP %.6f @ IoU %.2f\n", report.map, report.iou_threshold);
        os << buf;
    }
    {
        std::ofstream os(kv_path);
        if (!os) throw std::runtime_error("cannot write " + kv_path);
        char buf[256];
        for (const auto& c : report.per_class) {
            std::snprintf(buf, sizeof(buf), "ap.%d %.12f\ntp.%d %zu\nfp.%d %zu\nfn.%d %zu\n",
                          c.class_id, c.ap, c.class_id, c.tp, c.class_id, c.fp, c.class_id, c.fn);
            os << buf;
        }
        std::snprintf(buf, sizeof(buf), "map %.12f\niou_threshold %.3f\n", report.map,
                      report.iou_threshold);
        os << buf;
    }
}

}  // namespace capsynth::eval
