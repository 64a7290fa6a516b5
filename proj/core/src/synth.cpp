#include "textspot/synth.hpp"

#include "textspot/charset.hpp"
#include "textspot/errors.hpp"
#include "textspot/rng.hpp"

#include <algorithm>
#include <cmath>

namespace textspot {

void NoiseSpec::validate() const {
    if (sigma < 0.0) throw ContractError("noise sigma must be >= 0");
    if (swap_probability < 0.0 || swap_probability > 1.0)
        throw ContractError("swap probability must be in [0, 1]");
}

namespace {

constexpr double kHorizontalMargin = 0.05; // of placement width, each side
constexpr double kVerticalMargin = 0.15;   // of placement height, each side
constexpr double kCharGapFraction = 0.1;   // of character width

Polygon rect_polygon(const AxisRect& r) {
    return Polygon{{{r.xmin, r.ymin}, {r.xmax, r.ymin}, {r.xmax, r.ymax},
                    {r.xmin, r.ymax}}};
}

} // namespace

WordLayout make_word_layout(const std::string& word, const AxisRect& placement) {
    if (word.empty()) throw ContractError("cannot lay out an empty word");
    if (!charset::is_charset_word(charset::fold_string(word)))
        throw ContractError("word contains symbols outside the charset: " + word);
    require_valid_rect(placement);

    WordLayout layout;
    layout.word = charset::fold_string(word);

    const double mx = placement.width() * kHorizontalMargin;
    const double my = placement.height() * kVerticalMargin;
    layout.region = {placement.xmin + mx, placement.ymin + my,
                     placement.xmax - mx, placement.ymax - my};

    const auto n = static_cast<double>(word.size());
    const double char_w =
        layout.region.width() / (n + kCharGapFraction * (n - 1.0));
    const double step = char_w * (1.0 + kCharGapFraction);
    layout.char_boxes.reserve(word.size());
    for (std::size_t i = 0; i < word.size(); ++i) {
        const double x0 = layout.region.xmin + step * static_cast<double>(i);
        layout.char_boxes.push_back(
            {x0, layout.region.ymin, x0 + char_w, layout.region.ymax});
    }
    return layout;
}

AxisRect canonical_placement(int map_h, int map_w) {
    return {0.0, 0.0, static_cast<double>(map_w), static_cast<double>(map_h)};
}

MaskStack render_stack(const WordLayout& layout, const AxisRect& proposal,
                       int map_h, int map_w) {
    if (layout.word.empty()) throw ContractError("cannot render an empty word");
    if (layout.char_boxes.size() != layout.word.size())
        throw ContractError("layout character boxes do not match word length");
    require_valid_rect(proposal);

    MaskStack stack = MaskStack::zeros(map_h, map_w);

    // Global channel: the word region polygon in map coordinates.
    Polygon roi_poly{normalize_to_roi(rect_polygon(layout.region).vertices,
                                      proposal, map_h, map_w)};
    const ScoreMap global = rasterize_global_target(roi_poly, map_h, map_w);
    std::copy(global.values.begin(), global.values.end(),
              stack.channel(charset::kGlobalChannel).begin());

    // Character channels: shrunk boxes, one per character.
    for (std::size_t i = 0; i < layout.word.size(); ++i) {
        const auto idx = charset::index_of(layout.word[i]);
        if (!idx)
            throw ContractError(std::string("symbol outside charset: '") +
                                layout.word[i] + "'");
        const AxisRect shrunk = shrink_char_box(layout.char_boxes[i]);
        const Point lo =
            normalize_point_to_roi({shrunk.xmin, shrunk.ymin}, proposal, map_h, map_w);
        const Point hi =
            normalize_point_to_roi({shrunk.xmax, shrunk.ymax}, proposal, map_h, map_w);
        auto ch = stack.channel(charset::channel_of_index(*idx));
        for (int r = 0; r < map_h; ++r) {
            const double y = r + 0.5;
            if (y < lo.y || y >= hi.y) continue;
            for (int c = 0; c < map_w; ++c) {
                const double x = c + 0.5;
                if (x >= lo.x && x < hi.x)
                    ch[static_cast<std::size_t>(r) * map_w + c] = 1.0f;
            }
        }
    }

    // Background = 1 - max over character channels.
    auto bg = stack.channel(charset::kBackgroundChannel);
    for (std::size_t p = 0; p < stack.plane(); ++p) {
        float max_char = 0.0f;
        for (int k = 0; k < charset::kSize; ++k)
            max_char = std::max(max_char,
                                stack.channel(charset::channel_of_index(k))[p]);
        bg[p] = 1.0f - max_char;
    }
    return stack;
}

MaskStack render_stack(const SceneWord& entry, int map_h, int map_w) {
    return render_stack(entry.layout, entry.placement, map_h, map_w);
}

MaskStack corrupt(const MaskStack& stack, const NoiseSpec& noise) {
    require_valid_stack(stack);
    noise.validate();

    MaskStack out = stack;
    DetRng rng(noise.seed);

    // Channel swaps are decided on the clean stack's region structure.
    if (noise.swap_probability > 0.0) {
        const auto regions = find_char_regions(stack);
        for (const CharRegion& region : regions) {
            const double u = rng.next_double();
            if (u >= noise.swap_probability) continue;

            int dominant = 0;
            for (int k = 1; k < charset::kSize; ++k)
                if (region.probs[static_cast<std::size_t>(k)] >
                    region.probs[static_cast<std::size_t>(dominant)])
                    dominant = k;
            const auto pick =
                static_cast<int>(rng.next_below(charset::kSize - 1));
            const int other = pick >= dominant ? pick + 1 : pick;

            auto a = out.channel(charset::channel_of_index(dominant));
            auto b = out.channel(charset::channel_of_index(other));
            for (std::uint32_t p : region.pixels) std::swap(a[p], b[p]);
        }
    }

    if (noise.sigma > 0.0) {
        for (float& v : out.values) {
            const double noisy = v + noise.sigma * rng.next_normal();
            v = static_cast<float>(std::clamp(noisy, 0.0, 1.0));
        }
    }
    return out;
}

SynthScene build_scene(std::uint64_t seed, int n_words, const Lexicon& lexicon,
                       const SceneParams& params) {
    if (n_words < 0) throw ContractError("n_words must be >= 0");
    if (n_words > 0 && lexicon.words.empty())
        throw ContractError("build_scene requires a nonempty lexicon");
    if (params.duplicate_proposals < 1)
        throw ContractError("duplicate_proposals must be >= 1");

    SynthScene scene;
    scene.seed = seed;
    scene.image_w = params.image_w;
    scene.image_h = params.image_h;

    DetRng rng(seed);
    const double margin = params.border_margin;

    for (int w = 0; w < n_words; ++w) {
        bool placed = false;
        for (int attempt = 0; attempt < params.max_place_retries && !placed;
             ++attempt) {
            const std::string& word =
                lexicon.words[rng.next_below(lexicon.words.size())];
            if (word.size() > params.max_word_length) continue;

            const double h =
                rng.uniform(params.min_word_height, params.max_word_height);
            const double width =
                h * std::max(1.8, 0.62 * static_cast<double>(word.size()));
            if (width > params.image_w - 2.0 * margin ||
                h > params.image_h - 2.0 * margin)
                continue;

            const double x0 = rng.uniform(margin, params.image_w - margin - width);
            const double y0 = rng.uniform(margin, params.image_h - margin - h);
            const AxisRect placement{x0, y0, x0 + width, y0 + h};

            bool overlaps = false;
            for (const SceneWord& existing : scene.words) {
                const AxisRect& o = existing.placement;
                if (placement.xmin < o.xmax + 4.0 && o.xmin < placement.xmax + 4.0 &&
                    placement.ymin < o.ymax + 4.0 && o.ymin < placement.ymax + 4.0) {
                    overlaps = true;
                    break;
                }
            }
            if (overlaps) continue;

            SceneWord entry{make_word_layout(word, placement), placement};
            scene.gt.push_back(
                {rect_polygon(entry.layout.region), entry.layout.word, true});

            const double score = rng.uniform(0.85, 0.99);
            scene.proposals.push_back({placement, score});
            scene.proposal_word.push_back(scene.words.size());
            for (int d = 1; d < params.duplicate_proposals; ++d) {
                AxisRect jittered = placement;
                jittered.xmin += rng.uniform(-2.0, 2.0);
                jittered.ymin += rng.uniform(-2.0, 2.0);
                jittered.xmax += rng.uniform(-2.0, 2.0);
                jittered.ymax += rng.uniform(-2.0, 2.0);
                const double dup_score =
                    std::max(0.3, score - 0.05 - 0.05 * static_cast<double>(d));
                scene.proposals.push_back({jittered, dup_score});
                scene.proposal_word.push_back(scene.words.size());
            }
            scene.words.push_back(std::move(entry));
            placed = true;
        }
        if (!placed)
            throw PlacementError("could not place word " + std::to_string(w) +
                                 " within the retry budget");
    }
    return scene;
}

MapProvider scene_map_provider(const SynthScene& scene, const NoiseSpec& noise,
                               int map_h, int map_w) {
    // Copy what the provider needs; the scene may go out of scope.
    std::vector<WordLayout> layouts;
    layouts.reserve(scene.words.size());
    for (const SceneWord& sw : scene.words) layouts.push_back(sw.layout);
    std::vector<std::size_t> proposal_word = scene.proposal_word;

    return [layouts = std::move(layouts), proposal_word = std::move(proposal_word),
            noise, map_h, map_w](std::size_t index, const ScoredBox& box) {
        if (index >= proposal_word.size())
            throw ContractError("proposal index out of range: " +
                                std::to_string(index));
        MaskStack stack =
            render_stack(layouts[proposal_word[index]], box.rect, map_h, map_w);
        if (noise.sigma > 0.0 || noise.swap_probability > 0.0) {
            NoiseSpec per_proposal = noise;
            per_proposal.seed = DetRng::derive(noise.seed, index);
            stack = corrupt(stack, per_proposal);
        }
        return stack;
    };
}

} // namespace textspot
