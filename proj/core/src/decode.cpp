#include "textspot/decode.hpp"

#include "textspot/charset.hpp"
#include "textspot/errors.hpp"
#include "textspot/targets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace textspot {

ProbTable ProbTable::one_hot(const std::string& word) {
    ProbTable table;
    table.entries.reserve(word.size());
    for (char c : word) {
        const auto idx = charset::index_of(c);
        if (!idx)
            throw ContractError(std::string("symbol outside charset: '") + c + "'");
        ProbEntry e;
        e.symbol = charset::fold(c);
        e.probs[static_cast<std::size_t>(*idx)] = 1.0;
        table.entries.push_back(e);
    }
    return table;
}

BinaryMap binarize(const ScoreMap& map, double threshold) {
    if (threshold < 0.0 || threshold > 1.0)
        throw ContractError("binarize threshold must be in [0, 1]");
    require_valid_score_map(map);
    BinaryMap out(map.height, map.width, 0);
    for (std::size_t i = 0; i < map.values.size(); ++i)
        out.values[i] = map.values[i] >= threshold ? 1 : 0;
    return out;
}

std::vector<std::vector<std::uint32_t>> connected_components(
    const BinaryMap& map, Connectivity connectivity) {
    const int h = map.height, w = map.width;
    std::vector<std::int32_t> region_of(map.size(), -1);
    std::vector<std::vector<std::uint32_t>> regions;

    const int dr4[] = {-1, 1, 0, 0};
    const int dc4[] = {0, 0, -1, 1};
    const int dr8[] = {-1, -1, -1, 0, 0, 1, 1, 1};
    const int dc8[] = {-1, 0, 1, -1, 1, -1, 0, 1};
    const int* dr = connectivity == Connectivity::kFour ? dr4 : dr8;
    const int* dc = connectivity == Connectivity::kFour ? dc4 : dc8;
    const int n_dirs = connectivity == Connectivity::kFour ? 4 : 8;

    std::vector<std::uint32_t> stack;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::uint32_t start = static_cast<std::uint32_t>(r) * w + c;
            if (!map.values[start] || region_of[start] >= 0) continue;

            const auto id = static_cast<std::int32_t>(regions.size());
            regions.emplace_back();
            stack.assign(1, start);
            region_of[start] = id;
            while (!stack.empty()) {
                const std::uint32_t cur = stack.back();
                stack.pop_back();
                regions[id].push_back(cur);
                const int cr = static_cast<int>(cur) / w;
                const int cc = static_cast<int>(cur) % w;
                for (int k = 0; k < n_dirs; ++k) {
                    const int nr = cr + dr[k], nc = cc + dc[k];
                    if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
                    const std::uint32_t nb = static_cast<std::uint32_t>(nr) * w + nc;
                    if (map.values[nb] && region_of[nb] < 0) {
                        region_of[nb] = id;
                        stack.push_back(nb);
                    }
                }
            }
            std::sort(regions[id].begin(), regions[id].end());
        }
    }

    // Raster-scan discovery already orders regions by first pixel; re-sort by
    // the documented (min row, min col) key with discovery order as tiebreak.
    std::vector<std::size_t> order(regions.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto key = [&](std::size_t i) {
        std::uint32_t min_row = UINT32_MAX, min_col = UINT32_MAX;
        for (std::uint32_t p : regions[i]) {
            min_row = std::min(min_row, p / static_cast<std::uint32_t>(w));
            min_col = std::min(min_col, p % static_cast<std::uint32_t>(w));
        }
        return std::pair{min_row, min_col};
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

    std::vector<std::vector<std::uint32_t>> sorted;
    sorted.reserve(regions.size());
    for (std::size_t i : order) sorted.push_back(std::move(regions[i]));
    return sorted;
}

std::vector<CharRegion> find_char_regions(const MaskStack& stack,
                                          double bg_threshold,
                                          Connectivity connectivity,
                                          int min_region_pixels) {
    require_valid_stack(stack);
    if (min_region_pixels < 1)
        throw ContractError("min_region_pixels must be >= 1");

    const auto bg = stack.channel(charset::kBackgroundChannel);
    BinaryMap char_mask(stack.height, stack.width, 0);
    for (std::size_t i = 0; i < bg.size(); ++i)
        char_mask.values[i] = bg[i] < bg_threshold ? 1 : 0;

    std::vector<CharRegion> out;
    for (auto& pixels : connected_components(char_mask, connectivity)) {
        if (pixels.size() < static_cast<std::size_t>(min_region_pixels)) continue;
        CharRegion region;
        region.pixels = std::move(pixels);

        double sx = 0.0, sy = 0.0;
        for (std::uint32_t p : region.pixels) {
            sx += (p % static_cast<std::uint32_t>(stack.width)) + 0.5;
            sy += (p / static_cast<std::uint32_t>(stack.width)) + 0.5;
        }
        const double n = static_cast<double>(region.pixels.size());
        region.centroid_x = sx / n;
        region.centroid_y = sy / n;

        for (int k = 0; k < charset::kSize; ++k) {
            const auto ch = stack.channel(charset::channel_of_index(k));
            double sum = 0.0;
            for (std::uint32_t p : region.pixels) sum += ch[p];
            region.probs[static_cast<std::size_t>(k)] = sum / n;
        }
        out.push_back(std::move(region));
    }
    return out;
}

VoteResult pixel_voting(const MaskStack& stack, double bg_threshold,
                        Connectivity connectivity, int min_region_pixels) {
    std::vector<CharRegion> regions =
        find_char_regions(stack, bg_threshold, connectivity, min_region_pixels);

    std::stable_sort(regions.begin(), regions.end(),
                     [](const CharRegion& a, const CharRegion& b) {
                         if (a.centroid_x != b.centroid_x)
                             return a.centroid_x < b.centroid_x;
                         return a.centroid_y < b.centroid_y;
                     });

    VoteResult result;
    result.text.reserve(regions.size());
    result.probs.entries.reserve(regions.size());
    for (const CharRegion& region : regions) {
        int best = 0;
        for (int k = 1; k < charset::kSize; ++k)
            if (region.probs[static_cast<std::size_t>(k)] >
                region.probs[static_cast<std::size_t>(best)])
                best = k;
        ProbEntry entry;
        entry.symbol = charset::symbol_at(best);
        entry.probs = region.probs;
        result.text.push_back(entry.symbol);
        result.probs.entries.push_back(std::move(entry));
    }
    return result;
}

namespace {

// Directions for the edge walk, clockwise on screen (y grows down).
enum Dir : int { kEast = 0, kSouth = 1, kWest = 2, kNorth = 3 };
constexpr int kDx[4] = {1, 0, -1, 0};
constexpr int kDy[4] = {0, 1, 0, -1};

bool fg_at(const BinaryMap& mask, int col, int row) {
    return mask.in_bounds(row, col) && mask.at(row, col) != 0;
}

// Pixels flanking the segment leaving lattice point (x, y) in direction d.
void ahead_pixels(int x, int y, int d, int& lc, int& lr, int& rc, int& rr) {
    switch (d) {
        case kEast:  lc = x;     lr = y - 1; rc = x;     rr = y;     break;
        case kSouth: lc = x;     lr = y;     rc = x - 1; rr = y;     break;
        case kWest:  lc = x - 1; lr = y;     rc = x - 1; rr = y - 1; break;
        default:     lc = x - 1; lr = y - 1; rc = x;     rr = y - 1; break;
    }
}

} // namespace

Polygon trace_component_boundary(const BinaryMap& mask) {
    int start_row = -1, start_col = -1;
    for (int r = 0; r < mask.height && start_row < 0; ++r)
        for (int c = 0; c < mask.width; ++c)
            if (mask.at(r, c)) {
                start_row = r;
                start_col = c;
                break;
            }
    if (start_row < 0)
        throw ContractError("trace_component_boundary on an empty mask");

    // Walk cracks with the region on the right, starting along the top edge
    // of the first pixel in raster order.
    const int sx = start_col, sy = start_row;
    int x = sx, y = sy, d = kEast;
    std::vector<Point> path{{static_cast<double>(sx), static_cast<double>(sy)}};
    const std::size_t step_limit = 4 * mask.size() + 8;
    for (std::size_t steps = 0;; ++steps) {
        if (steps > step_limit)
            throw Error("boundary trace did not close (corrupt mask?)");
        x += kDx[d];
        y += kDy[d];
        int lc, lr, rc, rr;
        ahead_pixels(x, y, d, lc, lr, rc, rr);
        const bool left = fg_at(mask, lc, lr);
        const bool right = fg_at(mask, rc, rr);
        int nd;
        if (left && right)
            nd = (d + 3) % 4; // turn left
        else if (right)
            nd = d; // straight
        else
            nd = (d + 1) % 4; // turn right
        if (x == sx && y == sy && nd == kEast) break;
        path.push_back({static_cast<double>(x), static_cast<double>(y)});
        d = nd;
    }

    // Merge collinear runs (the walk emits unit steps).
    std::vector<Point> ring;
    const std::size_t n = path.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& prev = path[(i + n - 1) % n];
        const Point& cur = path[i];
        const Point& next = path[(i + 1) % n];
        const double cross = (cur.x - prev.x) * (next.y - cur.y) -
                             (cur.y - prev.y) * (next.x - cur.x);
        if (cross != 0.0) ring.push_back(cur);
    }
    if (ring.size() < 3) ring = path;
    return Polygon{std::move(ring)};
}

namespace {

double segment_distance(const Point& p, const Point& a, const Point& b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double len2 = vx * vx + vy * vy;
    if (len2 == 0.0) return std::hypot(p.x - a.x, p.y - a.y);
    double t = ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

void douglas_peucker(const std::vector<Point>& pts, std::size_t first,
                     std::size_t last, double tol, std::vector<bool>& keep) {
    if (last <= first + 1) return;
    double max_dist = -1.0;
    std::size_t split = first;
    for (std::size_t i = first + 1; i < last; ++i) {
        const double dist = segment_distance(pts[i], pts[first], pts[last]);
        if (dist > max_dist) {
            max_dist = dist;
            split = i;
        }
    }
    if (max_dist > tol) {
        keep[split] = true;
        douglas_peucker(pts, first, split, tol, keep);
        douglas_peucker(pts, split, last, tol, keep);
    }
}

} // namespace

Polygon simplify_polygon(const Polygon& ring, double tolerance) {
    require_valid_polygon(ring);
    if (tolerance <= 0.0 || ring.vertices.size() <= 3) return ring;

    // Split the closed ring at its first vertex and the vertex farthest from
    // it, simplify both open chains, and rejoin.
    const auto& v = ring.vertices;
    std::size_t far = 1;
    double best = -1.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        const double dist = std::hypot(v[i].x - v[0].x, v[i].y - v[0].y);
        if (dist > best) {
            best = dist;
            far = i;
        }
    }

    std::vector<Point> closed(v.begin(), v.end());
    closed.push_back(v[0]); // wrap for the second chain
    std::vector<bool> keep(closed.size(), false);
    keep[0] = keep[far] = keep[closed.size() - 1] = true;
    douglas_peucker(closed, 0, far, tolerance, keep);
    douglas_peucker(closed, far, closed.size() - 1, tolerance, keep);

    Polygon out;
    for (std::size_t i = 0; i + 1 < closed.size(); ++i)
        if (keep[i]) out.vertices.push_back(closed[i]);

    if (out.vertices.size() < 3 || polygon_area(out) == 0.0) return ring;
    return out;
}

std::optional<Polygon> extract_text_polygon(const ScoreMap& global,
                                            double threshold,
                                            double simplify_tolerance) {
    const BinaryMap binary = binarize(global, threshold);
    const auto components = connected_components(binary, Connectivity::kFour);
    if (components.empty()) return std::nullopt;

    std::size_t largest = 0;
    for (std::size_t i = 1; i < components.size(); ++i)
        if (components[i].size() > components[largest].size()) largest = i;

    BinaryMap mask(global.height, global.width, 0);
    for (std::uint32_t p : components[largest]) mask.values[p] = 1;

    const Polygon ring = trace_component_boundary(mask);
    return simplify_polygon(ring, simplify_tolerance);
}

std::optional<SpottedInstance> spot(const MaskStack& stack, const AxisRect& proposal,
                                    double det_score, const DecodeParams& params) {
    require_valid_stack(stack);
    require_valid_rect(proposal);

    const ScoreMap global = stack.channel_map(charset::kGlobalChannel);
    const auto polygon = extract_text_polygon(global, params.global_threshold,
                                              params.simplify_tolerance);
    if (!polygon) return std::nullopt;

    SpottedInstance instance;
    instance.polygon = Polygon{denormalize_from_roi(polygon->vertices, proposal,
                                                    stack.height, stack.width)};
    VoteResult vote = pixel_voting(stack, params.bg_threshold, params.connectivity,
                                   params.min_region_pixels);
    instance.text = std::move(vote.text);
    instance.probs = std::move(vote.probs);
    instance.det_score = det_score;
    return instance;
}

std::vector<SpottedInstance> run_pipeline(const std::vector<ScoredBox>& candidates,
                                          const MapProvider& provider,
                                          double nms_threshold,
                                          double score_threshold,
                                          const DecodeParams& params) {
    std::vector<ScoredBox> filtered;
    std::vector<std::size_t> original_index;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (candidates[i].score >= score_threshold) {
            filtered.push_back(candidates[i]);
            original_index.push_back(i);
        }
    }

    std::vector<SpottedInstance> out;
    for (std::size_t local : nms_indices(filtered, nms_threshold)) {
        const std::size_t index = original_index[local];
        MaskStack stack;
        try {
            stack = provider(index, candidates[index]);
        } catch (const std::exception& e) {
            throw PipelineError("map provider failed for proposal #" +
                                std::to_string(index) + ": " + e.what());
        }
        auto instance = spot(stack, candidates[index].rect,
                             candidates[index].score, params);
        if (instance) out.push_back(std::move(*instance));
    }

    std::stable_sort(out.begin(), out.end(),
                     [](const SpottedInstance& a, const SpottedInstance& b) {
                         return a.det_score > b.det_score;
                     });
    return out;
}

} // namespace textspot
