#include "textspot/eval.hpp"

#include "textspot/charset.hpp"

#include <algorithm>
#include <numeric>

namespace textspot {

namespace {

// IoU with a cheap bounding-rect rejection before the raster computation.
double safe_polygon_iou(const Polygon& a, const Polygon& b, double resolution) {
    const AxisRect ra = bounding_rect(a);
    const AxisRect rb = bounding_rect(b);
    if (ra.xmax <= rb.xmin || rb.xmax <= ra.xmin || ra.ymax <= rb.ymin ||
        rb.ymax <= ra.ymin)
        return 0.0;
    return polygon_iou(a, b, resolution);
}

bool texts_equal(const std::string& a, const std::string& b) {
    return charset::fold_string(a) == charset::fold_string(b);
}

bool word_spotting_cares(const std::string& transcription) {
    const std::string folded = charset::fold_string(transcription);
    if (folded.size() < 3) return false;
    return charset::is_charset_word(folded);
}

EvalReport match_greedy(const std::vector<SpottedInstance>& dets,
                        const std::vector<GtLabel>& gts,
                        const std::vector<bool>& care, double iou_threshold,
                        double resolution, bool require_text) {
    std::vector<std::size_t> order(dets.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return dets[i].det_score > dets[j].det_score;
    });

    std::vector<bool> gt_matched(gts.size(), false);
    std::size_t tp = 0, fp = 0;
    std::vector<MatchedPair> matches;

    for (std::size_t det_idx : order) {
        const SpottedInstance& det = dets[det_idx];

        double best_iou = 0.0;
        std::size_t best_gt = gts.size();
        bool hits_dont_care = false;
        for (std::size_t g = 0; g < gts.size(); ++g) {
            const double iou = safe_polygon_iou(det.polygon, gts[g].polygon, resolution);
            if (iou < iou_threshold) continue;
            if (!care[g]) {
                hits_dont_care = true;
                continue;
            }
            if (gt_matched[g]) continue;
            if (require_text && !texts_equal(det.text, gts[g].transcription))
                continue;
            if (iou > best_iou) {
                best_iou = iou;
                best_gt = g;
            }
        }

        if (best_gt < gts.size()) {
            gt_matched[best_gt] = true;
            ++tp;
            matches.push_back({det_idx, best_gt, best_iou});
        } else if (!hits_dont_care) {
            ++fp;
        }
    }

    const std::size_t care_count =
        static_cast<std::size_t>(std::count(care.begin(), care.end(), true));
    EvalReport report = make_report(tp, fp, care_count);
    report.matches = std::move(matches);
    return report;
}

} // namespace

EvalReport make_report(std::size_t true_positives, std::size_t false_positives,
                       std::size_t care_gt_count) {
    EvalReport r;
    r.true_positives = true_positives;
    r.false_positives = false_positives;
    r.care_gt_count = care_gt_count;
    const std::size_t dets = true_positives + false_positives;
    r.precision = dets == 0 ? 1.0 : static_cast<double>(true_positives) / dets;
    r.recall = care_gt_count == 0
                   ? 1.0
                   : static_cast<double>(true_positives) / care_gt_count;
    r.fmeasure = (r.precision + r.recall) == 0.0
                     ? 0.0
                     : 2.0 * r.precision * r.recall / (r.precision + r.recall);
    return r;
}

EvalReport eval_detection(const std::vector<SpottedInstance>& dets,
                          const std::vector<GtLabel>& gts, double iou_threshold,
                          double iou_resolution) {
    std::vector<bool> care(gts.size());
    for (std::size_t g = 0; g < gts.size(); ++g) care[g] = gts[g].care;
    return match_greedy(dets, gts, care, iou_threshold, iou_resolution,
                        /*require_text=*/false);
}

EvalReport eval_end_to_end(const std::vector<SpottedInstance>& spots,
                           const std::vector<GtLabel>& gts, EvalMode mode,
                           double iou_threshold, double iou_resolution) {
    std::vector<bool> care(gts.size());
    for (std::size_t g = 0; g < gts.size(); ++g) {
        care[g] = gts[g].care;
        if (care[g] && mode == EvalMode::kWordSpotting)
            care[g] = word_spotting_cares(gts[g].transcription);
    }
    return match_greedy(spots, gts, care, iou_threshold, iou_resolution,
                        /*require_text=*/true);
}

} // namespace textspot
