#pragma once

#include "textspot/geometry.hpp"
#include "textspot/grid.hpp"
#include "textspot/mask_stack.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace textspot {

// Mask-branch output resolution.
inline constexpr int kDefaultMapHeight = 32;
inline constexpr int kDefaultMapWidth = 128;

// A character annotation: its box and its (case-folded) charset symbol.
struct CharBox {
    AxisRect box;
    char label = '\0';

    friend bool operator==(const CharBox&, const CharBox&) = default;
};

// Ground truth for one text instance. Character boxes are optional; most
// real-world samples carry only the polygon and transcription.
struct GtInstance {
    Polygon polygon;
    std::optional<std::string> transcription;
    std::optional<std::vector<CharBox>> char_boxes;
};

// Five-stage anchor pyramid: one anchor area per stage, shared aspect
// ratios (ratio = height / width).
struct AnchorConfig {
    std::array<int, 5> strides{4, 8, 16, 32, 64};
    std::array<double, 5> areas{32.0 * 32.0, 64.0 * 64.0, 128.0 * 128.0,
                                256.0 * 256.0, 512.0 * 512.0};
    std::vector<double> ratios{0.5, 1.0, 2.0};
};

struct Anchor {
    AxisRect rect;
    bool inside_image = true; // false when the rect extends past the borders
};

enum class AnchorLabel { kPositive, kNegative, kIgnore };

struct AnchorAssignment {
    AnchorLabel label = AnchorLabel::kNegative;
    int gt_index = -1; // best-IoU ground-truth index for positives
};

// Center/size log-space box regression encoding.
struct BoxDelta {
    double tx = 0.0;
    double ty = 0.0;
    double tw = 0.0;
    double th = 0.0;
};

// Mask-branch training targets for one (instance, proposal) pair.
struct TargetMaps {
    ScoreMap global;       // values exactly {0, 1}
    Grid<int> char_labels; // -1 unannotated, 0 background, c = charset index c-1
};

// One anchor per (feature cell, aspect ratio) for the given stage (1..5).
// The feature grid is ceil(image_dim / stride); anchors sit at cell centers
// with width sqrt(area/ratio) and height ratio * width. Anchors crossing the
// image border are kept and flagged.
std::vector<Anchor> generate_anchors(const AnchorConfig& cfg, int image_h,
                                     int image_w, int stage);

// Threshold-and-argmax anchor assignment. An anchor is positive when its best
// IoU >= pos_iou or when it is the highest-IoU anchor for some ground truth
// (among anchors with IoU > 0); negative when its best IoU < neg_iou;
// otherwise ignored. Positives carry the index of their own best ground truth.
std::vector<AnchorAssignment> match_anchors(const std::vector<AxisRect>& anchors,
                                            const std::vector<AxisRect>& gts,
                                            double pos_iou = 0.7,
                                            double neg_iou = 0.3);

BoxDelta encode_box_delta(const AxisRect& anchor, const AxisRect& gt);
AxisRect decode_box_delta(const AxisRect& anchor, const BoxDelta& d);

// Shift-and-scale points from image coordinates into the proposal's map
// coordinate frame: the proposal corners map to (0,0) and (map_w, map_h).
// Points outside the proposal map outside the frame; nothing is clamped here.
std::vector<Point> normalize_to_roi(const std::vector<Point>& points,
                                    const AxisRect& proposal,
                                    int map_h = kDefaultMapHeight,
                                    int map_w = kDefaultMapWidth);

// Exact inverse of normalize_to_roi.
std::vector<Point> denormalize_from_roi(const std::vector<Point>& points,
                                        const AxisRect& proposal,
                                        int map_h = kDefaultMapHeight,
                                        int map_w = kDefaultMapWidth);

Point normalize_point_to_roi(const Point& p, const AxisRect& proposal,
                             int map_h, int map_w);
Point denormalize_point_from_roi(const Point& p, const AxisRect& proposal,
                                 int map_h, int map_w);

// Pixel-center even-odd fill of a polygon given in map coordinates onto a
// zero-initialized map; filled cells get value 1. The polygon is clipped to
// the map bounds implicitly.
ScoreMap rasterize_global_target(const Polygon& polygon_in_roi, int map_h,
                                 int map_w);

// Same center, both sides divided by 4.
AxisRect shrink_char_box(const AxisRect& b);

// Character label grid from (already shrunk) boxes in map coordinates. Cells
// inside a box get charset_index + 1 (background stays 0); overlaps resolve
// later-box-wins in input order. Absent boxes produce an all -1 grid.
Grid<int> rasterize_char_target(const std::optional<std::vector<CharBox>>& char_boxes,
                                int map_h, int map_w);

// Full mask-branch target generation: normalize the polygon into the
// proposal frame and fill it; shrink, normalize and rasterize the character
// boxes. `proposal` is assumed positively matched to `instance`.
TargetMaps build_mask_targets(const GtInstance& instance, const AxisRect& proposal,
                              int map_h = kDefaultMapHeight,
                              int map_w = kDefaultMapWidth);

} // namespace textspot
