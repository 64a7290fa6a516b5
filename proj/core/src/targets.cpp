#include "textspot/targets.hpp"

#include "textspot/charset.hpp"
#include "textspot/errors.hpp"

#include <cmath>

namespace textspot {

std::vector<Anchor> generate_anchors(const AnchorConfig& cfg, int image_h,
                                     int image_w, int stage) {
    if (stage < 1 || stage > 5)
        throw ConfigError("anchor stage must be in 1..5, got " + std::to_string(stage));
    if (image_h < 1 || image_w < 1)
        throw ConfigError("image dimensions must be >= 1");
    for (double r : cfg.ratios)
        if (r <= 0.0) throw ConfigError("anchor aspect ratio must be > 0");

    const int stride = cfg.strides[stage - 1];
    const double area = cfg.areas[stage - 1];
    const int grid_h = (image_h + stride - 1) / stride;
    const int grid_w = (image_w + stride - 1) / stride;

    std::vector<Anchor> anchors;
    anchors.reserve(static_cast<std::size_t>(grid_h) * grid_w * cfg.ratios.size());
    for (int i = 0; i < grid_h; ++i) {
        for (int j = 0; j < grid_w; ++j) {
            const double cx = (j + 0.5) * stride;
            const double cy = (i + 0.5) * stride;
            for (double ratio : cfg.ratios) {
                const double w = std::sqrt(area / ratio);
                const double h = ratio * w;
                AxisRect rect{cx - w / 2.0, cy - h / 2.0, cx + w / 2.0, cy + h / 2.0};
                const bool inside = rect.xmin >= 0.0 && rect.ymin >= 0.0 &&
                                    rect.xmax <= image_w && rect.ymax <= image_h;
                anchors.push_back({rect, inside});
            }
        }
    }
    return anchors;
}

std::vector<AnchorAssignment> match_anchors(const std::vector<AxisRect>& anchors,
                                            const std::vector<AxisRect>& gts,
                                            double pos_iou, double neg_iou) {
    if (!(neg_iou >= 0.0 && neg_iou <= pos_iou && pos_iou <= 1.0))
        throw ConfigError("match thresholds must satisfy 0 <= neg <= pos <= 1");

    std::vector<AnchorAssignment> out(anchors.size());
    if (gts.empty()) return out; // all negative

    std::vector<double> best_iou(anchors.size(), 0.0);
    std::vector<int> best_gt(anchors.size(), -1);
    std::vector<double> gt_best_iou(gts.size(), 0.0);
    std::vector<int> gt_best_anchor(gts.size(), -1);

    for (std::size_t a = 0; a < anchors.size(); ++a) {
        for (std::size_t g = 0; g < gts.size(); ++g) {
            const double iou = rect_iou(anchors[a], gts[g]);
            if (iou > best_iou[a]) {
                best_iou[a] = iou;
                best_gt[a] = static_cast<int>(g);
            }
            if (iou > gt_best_iou[g]) {
                gt_best_iou[g] = iou;
                gt_best_anchor[g] = static_cast<int>(a);
            }
        }
    }

    for (std::size_t a = 0; a < anchors.size(); ++a) {
        if (best_iou[a] >= pos_iou && best_gt[a] >= 0)
            out[a] = {AnchorLabel::kPositive, best_gt[a]};
        else if (best_iou[a] < neg_iou)
            out[a] = {AnchorLabel::kNegative, -1};
        else
            out[a] = {AnchorLabel::kIgnore, -1};
    }

    // Argmax rule: the best anchor of each ground truth is positive even if
    // it misses the IoU threshold.
    for (std::size_t g = 0; g < gts.size(); ++g) {
        const int a = gt_best_anchor[g];
        if (a >= 0) out[a] = {AnchorLabel::kPositive, best_gt[a]};
    }
    return out;
}

BoxDelta encode_box_delta(const AxisRect& anchor, const AxisRect& gt) {
    require_valid_rect(anchor);
    require_valid_rect(gt);
    const Point ac = anchor.center();
    const Point gc = gt.center();
    return {(gc.x - ac.x) / anchor.width(), (gc.y - ac.y) / anchor.height(),
            std::log(gt.width() / anchor.width()),
            std::log(gt.height() / anchor.height())};
}

AxisRect decode_box_delta(const AxisRect& anchor, const BoxDelta& d) {
    require_valid_rect(anchor);
    const Point ac = anchor.center();
    const double cx = ac.x + d.tx * anchor.width();
    const double cy = ac.y + d.ty * anchor.height();
    const double w = anchor.width() * std::exp(d.tw);
    const double h = anchor.height() * std::exp(d.th);
    return {cx - w / 2.0, cy - h / 2.0, cx + w / 2.0, cy + h / 2.0};
}

Point normalize_point_to_roi(const Point& p, const AxisRect& proposal,
                             int map_h, int map_w) {
    require_valid_rect(proposal);
    return {(p.x - proposal.xmin) * map_w / proposal.width(),
            (p.y - proposal.ymin) * map_h / proposal.height()};
}

Point denormalize_point_from_roi(const Point& p, const AxisRect& proposal,
                                 int map_h, int map_w) {
    require_valid_rect(proposal);
    return {proposal.xmin + p.x * proposal.width() / map_w,
            proposal.ymin + p.y * proposal.height() / map_h};
}

std::vector<Point> normalize_to_roi(const std::vector<Point>& points,
                                    const AxisRect& proposal, int map_h,
                                    int map_w) {
    require_valid_rect(proposal);
    std::vector<Point> out;
    out.reserve(points.size());
    for (const Point& p : points)
        out.push_back(normalize_point_to_roi(p, proposal, map_h, map_w));
    return out;
}

std::vector<Point> denormalize_from_roi(const std::vector<Point>& points,
                                        const AxisRect& proposal, int map_h,
                                        int map_w) {
    require_valid_rect(proposal);
    std::vector<Point> out;
    out.reserve(points.size());
    for (const Point& p : points)
        out.push_back(denormalize_point_from_roi(p, proposal, map_h, map_w));
    return out;
}

ScoreMap rasterize_global_target(const Polygon& polygon_in_roi, int map_h,
                                 int map_w) {
    require_valid_polygon(polygon_in_roi);
    if (polygon_area(polygon_in_roi) == 0.0)
        throw GeometryError("cannot rasterize zero-area polygon");
    ScoreMap map(map_h, map_w, 0.0f);
    for (int r = 0; r < map_h; ++r) {
        for (int c = 0; c < map_w; ++c) {
            if (point_in_polygon({c + 0.5, r + 0.5}, polygon_in_roi))
                map.at(r, c) = 1.0f;
        }
    }
    return map;
}

AxisRect shrink_char_box(const AxisRect& b) {
    require_valid_rect(b);
    const Point c = b.center();
    const double w = b.width() / 4.0;
    const double h = b.height() / 4.0;
    return {c.x - w / 2.0, c.y - h / 2.0, c.x + w / 2.0, c.y + h / 2.0};
}

Grid<int> rasterize_char_target(const std::optional<std::vector<CharBox>>& char_boxes,
                                int map_h, int map_w) {
    if (!char_boxes.has_value()) return Grid<int>(map_h, map_w, -1);

    Grid<int> grid(map_h, map_w, 0);
    for (const CharBox& cb : *char_boxes) {
        const auto index = charset::index_of(cb.label);
        if (!index)
            throw ContractError(std::string("character label outside charset: '") +
                                cb.label + "'");
        const int value = *index + 1;
        for (int r = 0; r < map_h; ++r) {
            const double y = r + 0.5;
            if (y < cb.box.ymin || y >= cb.box.ymax) continue;
            for (int c = 0; c < map_w; ++c) {
                const double x = c + 0.5;
                if (x >= cb.box.xmin && x < cb.box.xmax) grid.at(r, c) = value;
            }
        }
    }
    return grid;
}

TargetMaps build_mask_targets(const GtInstance& instance, const AxisRect& proposal,
                              int map_h, int map_w) {
    require_valid_rect(proposal);

    Polygon roi_poly{normalize_to_roi(instance.polygon.vertices, proposal, map_h, map_w)};
    ScoreMap global = rasterize_global_target(roi_poly, map_h, map_w);

    std::optional<std::vector<CharBox>> roi_boxes;
    if (instance.char_boxes.has_value()) {
        roi_boxes.emplace();
        roi_boxes->reserve(instance.char_boxes->size());
        for (const CharBox& cb : *instance.char_boxes) {
            const AxisRect shrunk = shrink_char_box(cb.box);
            const Point lo = normalize_point_to_roi({shrunk.xmin, shrunk.ymin},
                                                    proposal, map_h, map_w);
            const Point hi = normalize_point_to_roi({shrunk.xmax, shrunk.ymax},
                                                    proposal, map_h, map_w);
            roi_boxes->push_back({AxisRect{lo.x, lo.y, hi.x, hi.y}, cb.label});
        }
    }
    Grid<int> labels = rasterize_char_target(roi_boxes, map_h, map_w);
    return {std::move(global), std::move(labels)};
}

} // namespace textspot
