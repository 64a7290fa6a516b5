#pragma once

#include "textspot/decode.hpp"
#include "textspot/synth.hpp"
#include "textspot/targets.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace textspot {

// Exit codes shared by every command: 0 success, 1 validation/parse error,
// 2 pipeline/runtime error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

struct GenLabelsOptions {
    std::filesystem::path annotations_path;
    std::filesystem::path proposals_path;
    std::filesystem::path out_dir;
    int map_h = kDefaultMapHeight;
    int map_w = kDefaultMapWidth;
    double match_iou = 0.5; // proposal-to-instance assignment threshold
};

struct DecodeCmdOptions {
    std::filesystem::path stacks_dir;
    std::filesystem::path proposals_path;
    std::filesystem::path out_path;
    std::optional<std::filesystem::path> lexicon_path;
    double nms_threshold = kDefaultNmsThreshold;
    double score_threshold = 0.5;
    DecodeParams decode;
    std::optional<double> max_match_distance;
    int threads = 0; // 0 = TEXTSPOT_THREADS or 1
};

struct EvalCmdOptions {
    std::filesystem::path results_path;
    std::filesystem::path annotations_path;
    std::string mode = "end_to_end"; // detection | end_to_end | word_spotting
    std::optional<std::filesystem::path> lexicon_path;
    double iou_threshold = 0.5;
    bool json_output = false;
};

struct SynthCmdOptions {
    std::filesystem::path out_dir;
    std::uint64_t seed = 7;
    int n_scenes = 1;
    int n_words = 5;
    NoiseSpec noise;
    SceneParams scene;
    std::optional<std::filesystem::path> lexicon_path; // default: built-in list
    int map_h = kDefaultMapHeight;
    int map_w = kDefaultMapWidth;
    int threads = 0;
};

struct GradCheckOptions {
    int trials = 20;
    int global_h = 8;
    int global_w = 8;
    int char_cells = 64;
    std::uint64_t seed = 1;
    double step = 1e-3;
    double tolerance = 1e-4;
    double perturb = 0.0; // test hook: offset added to analytic gradients
};

// Generate per-instance mask-branch targets (global + character label maps)
// as MTSR files plus an index manifest.
int cmd_gen_labels(const GenLabelsOptions& options, std::ostream& out,
                   std::ostream& err);

// Run the inference post-processing chain over file-backed stacks and write
// a results document; applies lexicon matching when a lexicon is given.
int cmd_decode(const DecodeCmdOptions& options, std::ostream& out,
               std::ostream& err);

// Score a results document against annotations and print P/R/F.
int cmd_eval(const EvalCmdOptions& options, std::ostream& out, std::ostream& err);

// Emit synthetic scenes: annotations, proposals and MTSR stacks.
int cmd_synth(const SynthCmdOptions& options, std::ostream& out, std::ostream& err);

// Verify the analytic loss gradients against central differences.
int cmd_grad_check(const GradCheckOptions& options, std::ostream& out,
                   std::ostream& err);

} // namespace textspot
