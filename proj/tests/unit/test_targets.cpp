#include "textspot/targets.hpp"

#include "textspot/charset.hpp"
#include "textspot/errors.hpp"
#include "textspot/rng.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace textspot;

TEST_CASE("stage-1 square anchors sit at cell centers") {
    AnchorConfig cfg;
    const auto anchors = generate_anchors(cfg, 64, 64, 1);
    CHECK(anchors.size() == 16 * 16 * 3);

    // Cell (0, 0), ratio 1 is the second anchor of the first cell.
    const AxisRect& square = anchors[1].rect;
    CHECK(square.center().x == doctest::Approx(2.0));
    CHECK(square.center().y == doctest::Approx(2.0));
    CHECK(square.width() == doctest::Approx(32.0));
    CHECK(square.height() == doctest::Approx(32.0));
}

TEST_CASE("anchor shape follows width = sqrt(area/ratio)") {
    AnchorConfig cfg;
    const auto anchors = generate_anchors(cfg, 8, 8, 1); // area 1024
    // First cell: ratios 0.5, 1, 2 in order; ratio 2 is index 2.
    const AxisRect& tall = anchors[2].rect;
    CHECK(tall.width() == doctest::Approx(22.627).epsilon(1e-3));
    CHECK(tall.height() == doctest::Approx(45.255).epsilon(1e-3));
    CHECK(anchors[2].inside_image == false);
}

TEST_CASE("anchor grid uses ceil(dim/stride) cells") {
    AnchorConfig cfg;
    CHECK(generate_anchors(cfg, 65, 64, 1).size() == 17 * 16 * 3);
    CHECK(generate_anchors(cfg, 64, 64, 5).size() == 1 * 1 * 3);
    CHECK_THROWS_AS(generate_anchors(cfg, 64, 64, 0), ConfigError);
    CHECK_THROWS_AS(generate_anchors(cfg, 64, 64, 6), ConfigError);
}

TEST_CASE("anchor matching: identity is positive, disjoint is negative") {
    const std::vector<AxisRect> gts{{10, 10, 40, 40}};
    const std::vector<AxisRect> anchors{
        {10, 10, 40, 40},    // identical -> positive
        {200, 200, 230, 230} // disjoint -> negative
    };
    const auto result = match_anchors(anchors, gts);
    CHECK(result[0].label == AnchorLabel::kPositive);
    CHECK(result[0].gt_index == 0);
    CHECK(result[1].label == AnchorLabel::kNegative);
}

TEST_CASE("anchor matching equals the IoU-matrix oracle on random scenes") {
    DetRng rng(5);
    for (int scene = 0; scene < 20; ++scene) {
        std::vector<AxisRect> anchors, gts;
        for (int i = 0; i < 50; ++i)
            anchors.push_back(testsupport::random_rect(rng, 100, 100, 5.0));
        for (int g = 0; g < 5; ++g)
            gts.push_back(testsupport::random_rect(rng, 100, 100, 5.0));

        const auto actual = match_anchors(anchors, gts, 0.7, 0.3);
        const auto expected = oracles::brute_match_anchors(anchors, gts, 0.7, 0.3);
        for (std::size_t a = 0; a < anchors.size(); ++a) {
            CHECK(actual[a].label == expected.labels[a]);
            if (actual[a].label == AnchorLabel::kPositive)
                CHECK(actual[a].gt_index == expected.gt_index[a]);
        }
    }
}

TEST_CASE("every gt with an overlapping anchor gets a positive") {
    DetRng rng(6);
    for (int scene = 0; scene < 20; ++scene) {
        std::vector<AxisRect> anchors, gts;
        for (int i = 0; i < 30; ++i)
            anchors.push_back(testsupport::random_rect(rng, 80, 80, 4.0));
        for (int g = 0; g < 4; ++g)
            gts.push_back(testsupport::random_rect(rng, 80, 80, 4.0));
        const auto result = match_anchors(anchors, gts);

        for (std::size_t g = 0; g < gts.size(); ++g) {
            double best = 0.0;
            std::size_t best_anchor = anchors.size();
            for (std::size_t a = 0; a < anchors.size(); ++a) {
                const double iou = rect_iou(anchors[a], gts[g]);
                if (iou > best) {
                    best = iou;
                    best_anchor = a;
                }
            }
            if (best_anchor == anchors.size()) continue; // no candidate anchor
            CHECK(result[best_anchor].label == AnchorLabel::kPositive);
        }
    }
}

TEST_CASE("no ground truths makes every anchor negative") {
    const std::vector<AxisRect> anchors{{0, 0, 10, 10}, {5, 5, 20, 20}};
    for (const auto& r : match_anchors(anchors, {}))
        CHECK(r.label == AnchorLabel::kNegative);
}

TEST_CASE("box delta encoding: identity and pure translation") {
    const AxisRect anchor{0, 0, 10, 10};
    const BoxDelta zero = encode_box_delta(anchor, anchor);
    CHECK(zero.tx == doctest::Approx(0.0));
    CHECK(zero.ty == doctest::Approx(0.0));
    CHECK(zero.tw == doctest::Approx(0.0));
    CHECK(zero.th == doctest::Approx(0.0));

    const BoxDelta shift = encode_box_delta(anchor, {5, 5, 15, 15});
    CHECK(shift.tx == doctest::Approx(0.5));
    CHECK(shift.ty == doctest::Approx(0.5));
    CHECK(shift.tw == doctest::Approx(0.0));
    CHECK(shift.th == doctest::Approx(0.0));
}

TEST_CASE("box delta encode/decode round-trips within 1e-6 relative") {
    DetRng rng(8);
    double max_rel = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const AxisRect anchor = testsupport::random_rect(rng, 200, 200, 2.0);
        const AxisRect gt = testsupport::random_rect(rng, 200, 200, 2.0);
        const AxisRect back = decode_box_delta(anchor, encode_box_delta(anchor, gt));
        for (auto [got, want] :
             {std::pair{back.xmin, gt.xmin}, std::pair{back.ymin, gt.ymin},
              std::pair{back.xmax, gt.xmax}, std::pair{back.ymax, gt.ymax}}) {
            const double scale = std::max(1.0, std::abs(want));
            max_rel = std::max(max_rel, std::abs(got - want) / scale);
        }
    }
    CHECK(max_rel < 1e-6);
}

TEST_CASE("normalize_to_roi maps the proposal frame onto the map frame") {
    const AxisRect proposal{100, 50, 200, 100};
    const auto pts = normalize_to_roi({{100, 50}, {200, 100}, {150, 75}}, proposal);
    CHECK(pts[0] == Point{0, 0});
    CHECK(pts[1] == Point{128, 32});
    CHECK(pts[2] == Point{64, 16});

    const auto back = denormalize_from_roi(pts, proposal);
    CHECK(back[0] == Point{100, 50});
    CHECK(back[2].x == doctest::Approx(150));
    CHECK(back[2].y == doctest::Approx(75));
}

TEST_CASE("normalize rejects zero-extent proposals") {
    CHECK_THROWS_AS(normalize_to_roi({{0, 0}}, AxisRect{5, 5, 5, 10}),
                    GeometryError);
    CHECK_THROWS_AS(denormalize_from_roi({{0, 0}}, AxisRect{5, 5, 10, 5}),
                    GeometryError);
}

TEST_CASE("rasterize_global_target fills exactly the covered pixel centers") {
    // Full map coverage.
    const Polygon all{{{-1, -1}, {129, -1}, {129, 33}, {-1, 33}}};
    const ScoreMap full = rasterize_global_target(all, 32, 128);
    for (float v : full.values) CHECK(v == 1.0f);

    // Fully outside.
    const Polygon outside{{{200, 200}, {210, 200}, {210, 210}, {200, 210}}};
    const ScoreMap empty = rasterize_global_target(outside, 32, 128);
    for (float v : empty.values) CHECK(v == 0.0f);

    // Left half: columns 0..63.
    const Polygon half{{{0, 0}, {64, 0}, {64, 32}, {0, 32}}};
    const ScoreMap left = rasterize_global_target(half, 32, 128);
    for (int r = 0; r < 32; ++r)
        for (int c = 0; c < 128; ++c)
            CHECK(left.at(r, c) == (c < 64 ? 1.0f : 0.0f));
}

TEST_CASE("rasterization agrees with a convex membership oracle") {
    DetRng rng(9);
    for (int t = 0; t < 20; ++t) {
        // Random triangle (always convex).
        Polygon tri;
        for (int v = 0; v < 3; ++v)
            tri.vertices.push_back({rng.uniform(0, 128), rng.uniform(0, 32)});
        if (polygon_area(tri) < 1.0) continue;

        const ScoreMap map = rasterize_global_target(tri, 32, 128);
        for (int r = 0; r < 32; ++r)
            for (int c = 0; c < 128; ++c) {
                const bool expected = oracles::convex_contains(tri, c + 0.5, r + 0.5);
                CHECK(map.at(r, c) == (expected ? 1.0f : 0.0f));
            }
    }
}

TEST_CASE("foreground fraction tracks clipped polygon area") {
    DetRng rng(10);
    for (int t = 0; t < 20; ++t) {
        const AxisRect r = testsupport::random_rect(rng, 128, 32, 4.0);
        const Polygon p{{{r.xmin, r.ymin},
                         {r.xmax, r.ymin},
                         {r.xmax, r.ymax},
                         {r.xmin, r.ymax}}};
        const ScoreMap map = rasterize_global_target(p, 32, 128);
        double fg = 0.0;
        for (float v : map.values) fg += v;
        const double fraction = fg / (32.0 * 128.0);
        const double area_fraction = r.area() / (32.0 * 128.0);
        CHECK(std::abs(fraction - area_fraction) <= 2.0 / std::sqrt(32.0 * 128.0));
    }
}

TEST_CASE("shrink_char_box keeps the center and quarters the sides") {
    const AxisRect box{6, 8, 14, 12}; // center (10,10), 8x4
    const AxisRect shrunk = shrink_char_box(box);
    CHECK(shrunk.center().x == doctest::Approx(10));
    CHECK(shrunk.center().y == doctest::Approx(10));
    CHECK(shrunk.width() == doctest::Approx(2.0));
    CHECK(shrunk.height() == doctest::Approx(1.0));

    const AxisRect unit = shrink_char_box({0, 0, 1, 4});
    CHECK(unit.width() == doctest::Approx(0.25));

    const AxisRect twice = shrink_char_box(shrink_char_box(box));
    CHECK(twice.width() == doctest::Approx(8.0 / 16.0));
    CHECK(twice.height() == doctest::Approx(4.0 / 16.0));
    CHECK(twice.center().x == doctest::Approx(10));
}

TEST_CASE("shrinking divides the area by 16") {
    DetRng rng(12);
    for (int t = 0; t < 100; ++t) {
        const AxisRect box = testsupport::random_rect(rng, 100, 100, 0.5);
        const AxisRect s = shrink_char_box(box);
        CHECK(s.area() == doctest::Approx(box.area() / 16.0).epsilon(1e-9));
        CHECK(s.center().x == doctest::Approx(box.center().x).epsilon(1e-12));
        CHECK(s.center().y == doctest::Approx(box.center().y).epsilon(1e-12));
    }
}

TEST_CASE("absent character boxes produce an all -1 grid") {
    const Grid<int> grid = rasterize_char_target(std::nullopt, 32, 128);
    for (int v : grid.values) CHECK(v == -1);
}

TEST_CASE("character cells get charset index + 1") {
    std::vector<CharBox> boxes{{{10, 10, 20, 20}, 'a'}}; // charset index 10
    const Grid<int> grid = rasterize_char_target(boxes, 32, 128);
    for (int r = 0; r < 32; ++r)
        for (int c = 0; c < 128; ++c) {
            const bool inside = (c + 0.5 >= 10 && c + 0.5 < 20) &&
                                (r + 0.5 >= 10 && r + 0.5 < 20);
            CHECK(grid.at(r, c) == (inside ? 11 : 0));
        }
}

TEST_CASE("two disjoint boxes label two regions via the membership oracle") {
    std::vector<CharBox> boxes{{{4, 4, 10, 24}, '1'}, {{40, 6, 52, 26}, 'b'}};
    const Grid<int> grid = rasterize_char_target(boxes, 32, 128);
    for (int r = 0; r < 32; ++r)
        for (int c = 0; c < 128; ++c) {
            int expected = 0;
            const double x = c + 0.5, y = r + 0.5;
            if (x >= 4 && x < 10 && y >= 4 && y < 24) expected = 2;   // '1' -> 1+1
            if (x >= 40 && x < 52 && y >= 6 && y < 26) expected = 12; // 'b' -> 11+1
            CHECK(grid.at(r, c) == expected);
        }
}

TEST_CASE("overlapping shrunk boxes resolve later-box-wins") {
    std::vector<CharBox> boxes{{{10, 10, 30, 20}, 'a'}, {{10, 10, 30, 20}, 'b'}};
    const Grid<int> grid = rasterize_char_target(boxes, 32, 128);
    CHECK(grid.at(15, 15) == 12); // 'b'
}

TEST_CASE("char labels outside the charset are rejected") {
    std::vector<CharBox> boxes{{{0, 0, 4, 4}, '!'}};
    CHECK_THROWS_AS(rasterize_char_target(boxes, 32, 128), ContractError);
}

TEST_CASE("build_mask_targets composes the component operations") {
    GtInstance instance;
    const AxisRect proposal{100, 50, 228, 82};
    instance.polygon = Polygon{
        {{100, 50}, {228, 50}, {228, 82}, {100, 82}}}; // equals the proposal
    instance.transcription = "hi";

    SUBCASE("polygon = proposal, no char boxes") {
        const TargetMaps maps = build_mask_targets(instance, proposal);
        for (float v : maps.global.values) CHECK(v == 1.0f);
        for (int v : maps.char_labels.values) CHECK(v == -1);
    }

    SUBCASE("with character boxes, equals manual composition") {
        instance.char_boxes = std::vector<CharBox>{
            {{110, 55, 150, 75}, 'h'}, {{160, 55, 200, 75}, 'i'}};
        const TargetMaps maps = build_mask_targets(instance, proposal);

        const ScoreMap expected_global = rasterize_global_target(
            Polygon{normalize_to_roi(instance.polygon.vertices, proposal)}, 32, 128);
        CHECK(maps.global == expected_global);

        std::vector<CharBox> roi_boxes;
        for (const CharBox& cb : *instance.char_boxes) {
            const AxisRect s = shrink_char_box(cb.box);
            const auto pts =
                normalize_to_roi({{s.xmin, s.ymin}, {s.xmax, s.ymax}}, proposal);
            roi_boxes.push_back(
                {AxisRect{pts[0].x, pts[0].y, pts[1].x, pts[1].y}, cb.label});
        }
        CHECK(maps.char_labels == rasterize_char_target(roi_boxes, 32, 128));

        // Both letters must actually appear.
        bool has_h = false, has_i = false;
        for (int v : maps.char_labels.values) {
            if (v == *charset::index_of('h') + 1) has_h = true;
            if (v == *charset::index_of('i') + 1) has_i = true;
        }
        CHECK(has_h);
        CHECK(has_i);
    }
}

TEST_CASE("random instances: componentwise oracle over the full pipeline") {
    DetRng rng(13);
    for (int t = 0; t < 10; ++t) {
        const AxisRect proposal = testsupport::random_rect(rng, 400, 300, 40.0);
        GtInstance instance;

        // A quadrilateral nested inside the proposal.
        const double mx = proposal.width() * 0.1, my = proposal.height() * 0.1;
        instance.polygon = Polygon{{{proposal.xmin + mx, proposal.ymin + my},
                                    {proposal.xmax - mx, proposal.ymin + 2 * my},
                                    {proposal.xmax - 2 * mx, proposal.ymax - my},
                                    {proposal.xmin + 2 * mx, proposal.ymax - 2 * my}}};
        instance.char_boxes = std::vector<CharBox>{
            {{proposal.xmin + mx, proposal.ymin + my,
              proposal.xmin + 3 * mx, proposal.ymax - my},
             '7'}};

        const TargetMaps maps = build_mask_targets(instance, proposal);
        const ScoreMap expected_global = rasterize_global_target(
            Polygon{normalize_to_roi(instance.polygon.vertices, proposal)}, 32, 128);
        CHECK(maps.global == expected_global);
        for (int v : maps.char_labels.values) CHECK((v == 0 || v == 8));
    }
}

TEST_CASE("normalize/denormalize are mutual inverses") {
    DetRng rng(14);
    double max_rel = 0.0;
    for (int t = 0; t < 100; ++t) {
        const AxisRect proposal = testsupport::random_rect(rng, 500, 500, 1.0);
        std::vector<Point> pts;
        for (int i = 0; i < 10; ++i)
            pts.push_back({rng.uniform(-100, 600), rng.uniform(-100, 600)});
        const auto back =
            denormalize_from_roi(normalize_to_roi(pts, proposal), proposal);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double scale = std::max({1.0, std::abs(pts[i].x), std::abs(pts[i].y)});
            max_rel = std::max(max_rel, std::abs(back[i].x - pts[i].x) / scale);
            max_rel = std::max(max_rel, std::abs(back[i].y - pts[i].y) / scale);
        }
    }
    CHECK(max_rel <= 1e-6);
}
