#pragma once

#include "textspot/geometry.hpp"
#include "textspot/grid.hpp"
#include "textspot/mask_stack.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace textspot {

inline constexpr double kDefaultBackgroundThreshold = 192.0 / 255.0;
inline constexpr double kDefaultGlobalThreshold = 0.5;
inline constexpr double kDefaultNmsThreshold = 0.5;

// 0.5 px keeps thin regions intact; a 1 px tolerance cuts corners hard
// enough to drop sliver-shaped words below the accuracy floor.
inline constexpr double kDefaultSimplifyTolerance = 0.5;

enum class Connectivity { kFour, kEight };

// A connected character region with its per-class mean probabilities.
struct CharRegion {
    std::vector<std::uint32_t> pixels; // linear indices row * W + col, ascending
    double centroid_x = 0.0;
    double centroid_y = 0.0;
    std::array<double, 36> probs{}; // mean of each character channel over pixels
};

struct ProbEntry {
    char symbol = '\0'; // argmax of probs, ties to the lower charset index
    std::array<double, 36> probs{};
};

// Per-position character probabilities of a decoded sequence.
struct ProbTable {
    std::vector<ProbEntry> entries;

    std::size_t size() const noexcept { return entries.size(); }
    bool empty() const noexcept { return entries.empty(); }

    // One-hot table for a charset word; handy for tests and unit-cost runs.
    static ProbTable one_hot(const std::string& word);
};

// A spotted text instance in image coordinates.
struct SpottedInstance {
    Polygon polygon;
    std::string text;
    ProbTable probs;
    double det_score = 0.0;
};

struct VoteResult {
    std::string text;
    ProbTable probs;
};

// Cell true iff value >= threshold.
BinaryMap binarize(const ScoreMap& map, double threshold);

// Maximal connected regions of true cells as sorted linear-index lists,
// ordered by (min row, then min col) of each region.
std::vector<std::vector<std::uint32_t>> connected_components(
    const BinaryMap& map, Connectivity connectivity = Connectivity::kFour);

// Character regions of a stack: cells whose background channel is below
// bg_threshold, grouped into connected regions, each with centroid and
// per-channel mean probabilities. Regions smaller than min_region_pixels
// are dropped.
std::vector<CharRegion> find_char_regions(
    const MaskStack& stack, double bg_threshold = kDefaultBackgroundThreshold,
    Connectivity connectivity = Connectivity::kFour, int min_region_pixels = 1);

// Pixel voting: each character region takes the symbol with the highest mean
// probability; regions are read left to right (ascending centroid x, ties by
// ascending centroid y).
VoteResult pixel_voting(const MaskStack& stack,
                        double bg_threshold = kDefaultBackgroundThreshold,
                        Connectivity connectivity = Connectivity::kFour,
                        int min_region_pixels = 1);

// Outer boundary of the foreground in `mask` as a closed lattice polygon
// along pixel edges, walked with the region on the right. The mask must hold
// exactly one connected component and at least one true cell.
Polygon trace_component_boundary(const BinaryMap& mask);

// Douglas-Peucker simplification of a closed ring; falls back to the input
// when simplification would degenerate it.
Polygon simplify_polygon(const Polygon& ring, double tolerance);

// Contour of the largest foreground component of a global map, binarized at
// `threshold` and simplified with `simplify_tolerance`. nullopt when the map
// has no foreground (the empty-detection signal).
std::optional<Polygon> extract_text_polygon(
    const ScoreMap& global, double threshold = kDefaultGlobalThreshold,
    double simplify_tolerance = kDefaultSimplifyTolerance);

// Tunables of the inference post-processing chain. Defaults follow the
// reference configuration.
struct DecodeParams {
    double global_threshold = kDefaultGlobalThreshold;
    double bg_threshold = kDefaultBackgroundThreshold;
    double simplify_tolerance = kDefaultSimplifyTolerance;
    Connectivity connectivity = Connectivity::kFour;
    int min_region_pixels = 1;
};

// Decode one proposal's mask stack into a spotted instance: text polygon from
// the global channel (denormalized into image coordinates through `proposal`)
// plus pixel voting for the character sequence. nullopt when the global map
// has no foreground.
std::optional<SpottedInstance> spot(const MaskStack& stack, const AxisRect& proposal,
                                    double det_score,
                                    const DecodeParams& params = {});

// Supplies the mask stack for a surviving candidate, identified by its index
// in the original candidate list.
using MapProvider = std::function<MaskStack(std::size_t index, const ScoredBox& box)>;

// Full inference chain: score filtering, NMS, per-survivor spotting, dropping
// empty detections. Output is sorted by descending det_score. A provider
// failure raises PipelineError naming the proposal.
std::vector<SpottedInstance> run_pipeline(
    const std::vector<ScoredBox>& candidates, const MapProvider& provider,
    double nms_threshold = kDefaultNmsThreshold, double score_threshold = 0.0,
    const DecodeParams& params = {});

} // namespace textspot
