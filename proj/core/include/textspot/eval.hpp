#pragma once

#include "textspot/decode.hpp"
#include "textspot/geometry.hpp"

#include <string>
#include <vector>

namespace textspot {

// Ground truth for evaluation. Don't-care regions are excluded from scoring;
// detections landing on them count neither way.
struct GtLabel {
    Polygon polygon;
    std::string transcription;
    bool care = true;
};

struct MatchedPair {
    std::size_t det_index = 0;
    std::size_t gt_index = 0;
    double iou = 0.0;
};

struct EvalReport {
    double precision = 0.0;
    double recall = 0.0;
    double fmeasure = 0.0;
    std::vector<MatchedPair> matches;
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    std::size_t care_gt_count = 0;
};

enum class EvalMode { kEndToEnd, kWordSpotting };

// Detection-only scoring: greedy one-to-one matching by descending det_score;
// a detection matches the unmatched care ground truth of highest polygon IoU
// when that IoU >= iou_threshold. Detections overlapping only don't-care
// regions are discarded from the counts.
EvalReport eval_detection(const std::vector<SpottedInstance>& dets,
                          const std::vector<GtLabel>& gts,
                          double iou_threshold = 0.5,
                          double iou_resolution = 4.0);

// Recognition scoring: a match additionally requires case-insensitive
// transcription equality. In word-spotting mode, ground truths shorter than
// 3 symbols or containing non-charset symbols are demoted to don't-care
// before matching.
EvalReport eval_end_to_end(const std::vector<SpottedInstance>& spots,
                           const std::vector<GtLabel>& gts, EvalMode mode,
                           double iou_threshold = 0.5,
                           double iou_resolution = 4.0);

// P/R/F from raw counts with the 0/0 conventions used throughout: precision
// is 1 with no counted detections, recall is 1 with no care ground truths,
// F is 0 when P + R is 0.
EvalReport make_report(std::size_t true_positives, std::size_t false_positives,
                       std::size_t care_gt_count);

} // namespace textspot
