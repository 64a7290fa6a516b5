#pragma once

#include <vector>

namespace textspot {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

// Axis-aligned rectangle, xmin < xmax and ymin < ymax.
struct AxisRect {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 0.0;
    double ymax = 0.0;

    double width() const noexcept { return xmax - xmin; }
    double height() const noexcept { return ymax - ymin; }
    double area() const noexcept { return width() * height(); }
    Point center() const noexcept {
        return {(xmin + xmax) * 0.5, (ymin + ymax) * 0.5};
    }

    friend bool operator==(const AxisRect&, const AxisRect&) = default;
};

// Simple polygon as an ordered vertex list, closed implicitly.
struct Polygon {
    std::vector<Point> vertices;

    friend bool operator==(const Polygon&, const Polygon&) = default;
};

struct ScoredBox {
    AxisRect rect;
    double score = 0.0; // in [0, 1]

    friend bool operator==(const ScoredBox&, const ScoredBox&) = default;
};

// Throws GeometryError unless the rect has positive extent on both axes and
// finite coordinates.
void require_valid_rect(const AxisRect& r);

// Throws GeometryError unless the polygon has >= 3 finite vertices.
void require_valid_polygon(const Polygon& p);

// Absolute shoelace area. Requires >= 3 vertices (collinear inputs give 0).
double polygon_area(const Polygon& p);

// Minimal axis-aligned rectangle covering all vertices. Throws GeometryError
// for polygons with zero extent on an axis.
AxisRect bounding_rect(const Polygon& p);

// Intersection over union of two rects; 0 when disjoint.
double rect_iou(const AxisRect& a, const AxisRect& b);

// Even-odd rule point-in-polygon test.
bool point_in_polygon(const Point& pt, const Polygon& poly);

// Raster IoU of two (possibly non-convex) polygons, sampled on a shared grid
// over their joint bounding box at `resolution` samples per pixel per axis.
double polygon_iou(const Polygon& a, const Polygon& b, double resolution = 4.0);

// Greedy non-maximum suppression by descending score (ties keep the lower
// input index). Survivors have pairwise IoU <= iou_threshold; the result is
// sorted by descending score.
std::vector<ScoredBox> nms(const std::vector<ScoredBox>& boxes,
                           double iou_threshold);

// Same suppression, returning the surviving input indices in
// descending-score order.
std::vector<std::size_t> nms_indices(const std::vector<ScoredBox>& boxes,
                                     double iou_threshold);

} // namespace textspot
