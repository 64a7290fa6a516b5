#include "textspot/decode.hpp"
#include "textspot/geometry.hpp"
#include "textspot/lexicon.hpp"
#include "textspot/losses.hpp"
#include "textspot/rng.hpp"
#include "textspot/synth.hpp"
#include "textspot/targets.hpp"

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

namespace {

using namespace textspot;

std::vector<ScoredBox> random_boxes(std::size_t n, std::uint64_t seed) {
    DetRng rng(seed);
    std::vector<ScoredBox> boxes;
    boxes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = rng.uniform(8.0, 60.0), h = rng.uniform(8.0, 40.0);
        const double x = rng.uniform(0.0, 200.0), y = rng.uniform(0.0, 200.0);
        boxes.push_back({{x, y, x + w, y + h}, rng.next_double()});
    }
    return boxes;
}

void BM_RectIou(benchmark::State& state) {
    const AxisRect a{10, 10, 60, 40}, b{30, 20, 90, 55};
    for (auto _ : state) benchmark::DoNotOptimize(rect_iou(a, b));
}
BENCHMARK(BM_RectIou);

void BM_PolygonIou(benchmark::State& state) {
    const Polygon a{{{10, 5}, {100, 8}, {95, 28}, {12, 25}}};
    const Polygon b{{{20, 3}, {110, 10}, {100, 30}, {18, 22}}};
    for (auto _ : state) benchmark::DoNotOptimize(polygon_iou(a, b, 4.0));
}
BENCHMARK(BM_PolygonIou);

void BM_Nms(benchmark::State& state) {
    const auto boxes = random_boxes(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(nms_indices(boxes, 0.5));
}
BENCHMARK(BM_Nms)->Arg(20)->Arg(200);

void BM_RasterizeGlobal(benchmark::State& state) {
    const Polygon quad{{{6, 4}, {120, 6}, {118, 28}, {8, 27}}};
    for (auto _ : state)
        benchmark::DoNotOptimize(rasterize_global_target(quad, 32, 128));
}
BENCHMARK(BM_RasterizeGlobal);

void BM_ExtractTextPolygon(benchmark::State& state) {
    const Polygon quad{{{6, 4}, {120, 6}, {118, 28}, {8, 27}}};
    const ScoreMap map = rasterize_global_target(quad, 32, 128);
    for (auto _ : state) benchmark::DoNotOptimize(extract_text_polygon(map));
}
BENCHMARK(BM_ExtractTextPolygon);

void BM_RenderStack(benchmark::State& state) {
    const AxisRect placement = canonical_placement();
    const WordLayout layout = make_word_layout("spotting", placement);
    for (auto _ : state)
        benchmark::DoNotOptimize(render_stack(layout, placement));
}
BENCHMARK(BM_RenderStack);

void BM_PixelVoting(benchmark::State& state) {
    const AxisRect placement = canonical_placement();
    const MaskStack stack =
        render_stack(make_word_layout("spotting", placement), placement);
    for (auto _ : state) benchmark::DoNotOptimize(pixel_voting(stack));
}
BENCHMARK(BM_PixelVoting);

void BM_Corrupt(benchmark::State& state) {
    const AxisRect placement = canonical_placement();
    const MaskStack stack =
        render_stack(make_word_layout("spotting", placement), placement);
    const NoiseSpec noise{0.2, 0.15, 42};
    for (auto _ : state) benchmark::DoNotOptimize(corrupt(stack, noise));
}
BENCHMARK(BM_Corrupt);

void BM_WeightedEditDistance(benchmark::State& state) {
    const std::string pred = "spott1ng";
    const ProbTable probs = ProbTable::one_hot(pred);
    const CostModel costs = CostModel::probability_weighted();
    for (auto _ : state)
        benchmark::DoNotOptimize(
            weighted_edit_distance(pred, probs, "spotting", costs));
}
BENCHMARK(BM_WeightedEditDistance);

void BM_BestMatch(benchmark::State& state) {
    DetRng rng(7);
    std::vector<std::string> words;
    for (int i = 0; i < 500; ++i) {
        std::string w;
        const std::size_t len = 4 + rng.next_below(7);
        for (std::size_t k = 0; k < len; ++k)
            w.push_back(static_cast<char>('a' + rng.next_below(26)));
        words.push_back(w);
    }
    const Lexicon lex = make_lexicon(words);
    const std::string pred = "spott1ng";
    const ProbTable probs = ProbTable::one_hot(pred);
    const CostModel costs = CostModel::probability_weighted();
    for (auto _ : state)
        benchmark::DoNotOptimize(best_match(pred, probs, lex, costs));
}
BENCHMARK(BM_BestMatch);

void BM_GlobalLoss(benchmark::State& state) {
    DetRng rng(8);
    Grid<double> logits(32, 128);
    Grid<int> target(32, 128);
    for (double& v : logits.values) v = rng.uniform(-5.0, 5.0);
    for (int& y : target.values) y = static_cast<int>(rng.next_below(2));
    for (auto _ : state) benchmark::DoNotOptimize(global_loss(logits, target));
}
BENCHMARK(BM_GlobalLoss);

void BM_CharLoss(benchmark::State& state) {
    DetRng rng(9);
    Grid<double> logits(4096, 37);
    std::vector<int> labels(4096);
    for (double& v : logits.values) v = rng.uniform(-5.0, 5.0);
    for (int& l : labels) l = static_cast<int>(rng.next_below(38)) - 1;
    for (auto _ : state) benchmark::DoNotOptimize(char_loss(logits, labels));
}
BENCHMARK(BM_CharLoss);

} // namespace

BENCHMARK_MAIN();
