#pragma once

#include "textspot/decode.hpp"
#include "textspot/eval.hpp"
#include "textspot/geometry.hpp"
#include "textspot/lexicon.hpp"
#include "textspot/mask_stack.hpp"
#include "textspot/targets.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace textspot {

// Per-character geometry of a synthetic word in image coordinates. Characters
// are laid out left to right with equal widths and a 10% inter-character gap
// inside `region`; boxes here are unshrunk (rendering shrinks them the same
// way target generation does).
struct WordLayout {
    std::string word;
    AxisRect region;                  // the word's ground-truth extent
    std::vector<AxisRect> char_boxes; // one per character, in word order
};

// One placed word: its layout plus the proposal rectangle a detector would
// have produced for it.
struct SceneWord {
    WordLayout layout;
    AxisRect placement;
};

// Deterministic synthetic scene standing in for a trained network's output.
struct SynthScene {
    std::uint64_t seed = 0;
    int image_w = 0;
    int image_h = 0;
    std::vector<SceneWord> words;
    std::vector<GtLabel> gt;
    std::vector<ScoredBox> proposals;        // primaries plus duplicates
    std::vector<std::size_t> proposal_word;  // proposal index -> word index
};

// Corruption parameters for the synthetic ablation studies.
struct NoiseSpec {
    double sigma = 0.0;            // Gaussian noise on every map value
    double swap_probability = 0.0; // per character region, swap its channel
    std::uint64_t seed = 0;

    void validate() const;
};

struct SceneParams {
    int image_w = 640;
    int image_h = 640;
    int duplicate_proposals = 1; // total proposals per word (1 = no duplicates)
    int max_place_retries = 200;
    double min_word_height = 24.0;
    double max_word_height = 40.0;
    double border_margin = 8.0;
    std::size_t max_word_length = 16;
};

// Word layout within a placement rect: 5% horizontal and 15% vertical margins,
// then equal-width character cells with 10% gaps.
WordLayout make_word_layout(const std::string& word, const AxisRect& placement);

// Canonical placement for single-word tests: the map frame itself.
AxisRect canonical_placement(int map_h = kDefaultMapHeight,
                             int map_w = kDefaultMapWidth);

// Render the mask stack a perfect mask branch would emit for `layout` viewed
// through `proposal`: global channel 1 inside the word region, character
// channels 1 inside each shrunk character box, background = 1 - max over
// character channels.
MaskStack render_stack(const WordLayout& layout, const AxisRect& proposal,
                       int map_h = kDefaultMapHeight, int map_w = kDefaultMapWidth);
MaskStack render_stack(const SceneWord& entry, int map_h = kDefaultMapHeight,
                       int map_w = kDefaultMapWidth);

// Seeded corruption: optionally swaps each character region's dominant
// channel with a uniformly chosen other character channel (misrecognition),
// then adds Gaussian noise to every value and clamps to [0, 1]. Identical
// seeds produce bit-identical outputs; sigma 0 with swap 0 is the identity.
MaskStack corrupt(const MaskStack& stack, const NoiseSpec& noise);

// Sample words from the lexicon and place non-overlapping rectangles,
// emitting ground truth and scored proposals (with optional duplicate
// proposals to exercise NMS). Throws PlacementError when placement fails
// within the retry budget.
SynthScene build_scene(std::uint64_t seed, int n_words, const Lexicon& lexicon,
                       const SceneParams& params = {});

// Map provider backed by on-demand rendering of a scene's words, optionally
// corrupted per proposal with seeds derived from `noise.seed`.
MapProvider scene_map_provider(const SynthScene& scene,
                               const NoiseSpec& noise = {},
                               int map_h = kDefaultMapHeight,
                               int map_w = kDefaultMapWidth);

} // namespace textspot
