#include "textspot/geometry.hpp"

#include "textspot/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace textspot {

void require_valid_rect(const AxisRect& r) {
    if (!std::isfinite(r.xmin) || !std::isfinite(r.ymin) ||
        !std::isfinite(r.xmax) || !std::isfinite(r.ymax))
        throw GeometryError("rect has non-finite coordinates");
    if (!(r.xmin < r.xmax) || !(r.ymin < r.ymax))
        throw GeometryError("rect has non-positive extent");
}

void require_valid_polygon(const Polygon& p) {
    if (p.vertices.size() < 3)
        throw GeometryError("polygon needs at least 3 vertices, got " +
                            std::to_string(p.vertices.size()));
    for (const Point& v : p.vertices)
        if (!std::isfinite(v.x) || !std::isfinite(v.y))
            throw GeometryError("polygon has non-finite vertex");
}

double polygon_area(const Polygon& p) {
    require_valid_polygon(p);
    const auto& v = p.vertices;
    double twice = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % v.size()];
        twice += a.x * b.y - b.x * a.y;
    }
    return std::abs(twice) * 0.5;
}

AxisRect bounding_rect(const Polygon& p) {
    require_valid_polygon(p);
    AxisRect r{std::numeric_limits<double>::infinity(),
               std::numeric_limits<double>::infinity(),
               -std::numeric_limits<double>::infinity(),
               -std::numeric_limits<double>::infinity()};
    for (const Point& v : p.vertices) {
        r.xmin = std::min(r.xmin, v.x);
        r.ymin = std::min(r.ymin, v.y);
        r.xmax = std::max(r.xmax, v.x);
        r.ymax = std::max(r.ymax, v.y);
    }
    if (!(r.xmin < r.xmax) || !(r.ymin < r.ymax))
        throw GeometryError("polygon is degenerate: zero extent on an axis");
    return r;
}

double rect_iou(const AxisRect& a, const AxisRect& b) {
    require_valid_rect(a);
    require_valid_rect(b);
    const double iw = std::min(a.xmax, b.xmax) - std::max(a.xmin, b.xmin);
    const double ih = std::min(a.ymax, b.ymax) - std::max(a.ymin, b.ymin);
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    return inter / (a.area() + b.area() - inter);
}

bool point_in_polygon(const Point& pt, const Polygon& poly) {
    const auto& v = poly.vertices;
    bool inside = false;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        const bool crosses = (v[i].y > pt.y) != (v[j].y > pt.y);
        if (!crosses) continue;
        const double x_at =
            v[j].x + (pt.y - v[j].y) / (v[i].y - v[j].y) * (v[i].x - v[j].x);
        if (pt.x < x_at) inside = !inside;
    }
    return inside;
}

double polygon_iou(const Polygon& a, const Polygon& b, double resolution) {
    if (resolution <= 0.0)
        throw ContractError("polygon_iou resolution must be > 0");
    require_valid_polygon(a);
    require_valid_polygon(b);
    if (polygon_area(a) == 0.0 || polygon_area(b) == 0.0)
        throw GeometryError("polygon_iou on zero-area polygon");
    const AxisRect ra = bounding_rect(a);
    const AxisRect rb = bounding_rect(b);
    const double xmin = std::min(ra.xmin, rb.xmin);
    const double ymin = std::min(ra.ymin, rb.ymin);
    const double xmax = std::max(ra.xmax, rb.xmax);
    const double ymax = std::max(ra.ymax, rb.ymax);

    const double cell = 1.0 / resolution;
    const long nx = std::max<long>(1, static_cast<long>(std::ceil((xmax - xmin) * resolution)));
    const long ny = std::max<long>(1, static_cast<long>(std::ceil((ymax - ymin) * resolution)));

    long in_a = 0, in_b = 0, in_both = 0;
    for (long iy = 0; iy < ny; ++iy) {
        const double y = ymin + (iy + 0.5) * cell;
        for (long ix = 0; ix < nx; ++ix) {
            const Point s{xmin + (ix + 0.5) * cell, y};
            const bool pa = point_in_polygon(s, a);
            const bool pb = point_in_polygon(s, b);
            in_a += pa;
            in_b += pb;
            in_both += pa && pb;
        }
    }
    const long uni = in_a + in_b - in_both;
    if (uni == 0) return 0.0;
    return static_cast<double>(in_both) / static_cast<double>(uni);
}

std::vector<std::size_t> nms_indices(const std::vector<ScoredBox>& boxes,
                                     double iou_threshold) {
    if (iou_threshold < 0.0 || iou_threshold > 1.0)
        throw ContractError("nms iou_threshold must be in [0, 1]");
    std::vector<std::size_t> order(boxes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return boxes[i].score > boxes[j].score;
    });

    std::vector<std::size_t> kept;
    for (std::size_t idx : order) {
        bool suppressed = false;
        for (std::size_t k : kept) {
            if (rect_iou(boxes[idx].rect, boxes[k].rect) > iou_threshold) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) kept.push_back(idx);
    }
    return kept;
}

std::vector<ScoredBox> nms(const std::vector<ScoredBox>& boxes,
                           double iou_threshold) {
    std::vector<ScoredBox> kept;
    for (std::size_t idx : nms_indices(boxes, iou_threshold))
        kept.push_back(boxes[idx]);
    return kept;
}

} // namespace textspot
