#include "textspot/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

using textspot::Connectivity;

void add_connectivity_flag(CLI::App* cmd, int& connectivity) {
    cmd->add_option("--connectivity", connectivity,
                    "Character region connectivity (4 or 8)")
        ->check(CLI::IsMember({4, 8}))
        ->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "textspot: mask-based text spotting post-processing toolkit"};
    app.require_subcommand(1);

    // gen-labels
    textspot::GenLabelsOptions gen;
    auto* gen_cmd = app.add_subcommand(
        "gen-labels", "Generate mask-branch training targets from annotations");
    gen_cmd->add_option("--annotations", gen.annotations_path, "Annotations JSON")
        ->required();
    gen_cmd->add_option("--proposals", gen.proposals_path, "Proposals JSON")
        ->required();
    gen_cmd->add_option("--out", gen.out_dir, "Output directory")->required();
    gen_cmd->add_option("--map-height", gen.map_h, "Target map height")
        ->capture_default_str();
    gen_cmd->add_option("--map-width", gen.map_w, "Target map width")
        ->capture_default_str();
    gen_cmd->add_option("--match-iou", gen.match_iou,
                        "Proposal/instance assignment IoU threshold")
        ->capture_default_str();

    // decode
    textspot::DecodeCmdOptions dec;
    int dec_connectivity = 4;
    double dec_max_match = -1.0;
    auto* dec_cmd = app.add_subcommand(
        "decode", "Decode MTSR stacks into spotted text instances");
    dec_cmd->add_option("--stacks", dec.stacks_dir, "Directory of MTSR stacks")
        ->required();
    dec_cmd->add_option("--proposals", dec.proposals_path, "Proposals JSON")
        ->required();
    dec_cmd->add_option("--out", dec.out_path, "Results JSON output path")
        ->required();
    dec_cmd->add_option("--lexicon", dec.lexicon_path,
                        "Lexicon file (one word per line)");
    dec_cmd->add_option("--nms-threshold", dec.nms_threshold, "NMS IoU threshold")
        ->capture_default_str();
    dec_cmd->add_option("--score-threshold", dec.score_threshold,
                        "Proposal score cutoff")
        ->capture_default_str();
    dec_cmd->add_option("--global-threshold", dec.decode.global_threshold,
                        "Global map binarization threshold")
        ->capture_default_str();
    dec_cmd->add_option("--bg-threshold", dec.decode.bg_threshold,
                        "Background map binarization threshold")
        ->capture_default_str();
    dec_cmd->add_option("--simplify", dec.decode.simplify_tolerance,
                        "Polygon simplification tolerance (pixels)")
        ->capture_default_str();
    dec_cmd->add_option("--min-region-pixels", dec.decode.min_region_pixels,
                        "Minimum character region size in pixels")
        ->capture_default_str();
    add_connectivity_flag(dec_cmd, dec_connectivity);
    dec_cmd->add_option("--max-match-distance", dec_max_match,
                        "Reject lexicon matches above this distance (< 0: off)")
        ->capture_default_str();
    dec_cmd->add_option("--threads", dec.threads,
                        "Worker threads (0: TEXTSPOT_THREADS or 1)")
        ->capture_default_str();

    // eval
    textspot::EvalCmdOptions ev;
    auto* eval_cmd = app.add_subcommand("eval", "Score results against annotations");
    eval_cmd->add_option("--results", ev.results_path, "Results JSON")->required();
    eval_cmd->add_option("--annotations", ev.annotations_path, "Annotations JSON")
        ->required();
    eval_cmd->add_option("--mode", ev.mode,
                         "detection | end_to_end | word_spotting")
        ->capture_default_str();
    eval_cmd->add_option("--lexicon", ev.lexicon_path,
                         "Re-match decoded texts against this lexicon");
    eval_cmd->add_option("--iou-threshold", ev.iou_threshold, "Match IoU threshold")
        ->capture_default_str();
    eval_cmd->add_flag("--json", ev.json_output, "Machine-readable JSON output");

    // synth
    textspot::SynthCmdOptions syn;
    auto* synth_cmd = app.add_subcommand(
        "synth", "Generate synthetic scenes (annotations, proposals, stacks)");
    synth_cmd->add_option("--out", syn.out_dir, "Output directory")->required();
    synth_cmd->add_option("--seed", syn.seed, "Master seed")->capture_default_str();
    synth_cmd->add_option("--scenes", syn.n_scenes, "Number of scenes")
        ->capture_default_str();
    synth_cmd->add_option("--words", syn.n_words, "Words per scene")
        ->capture_default_str();
    synth_cmd->add_option("--sigma", syn.noise.sigma, "Gaussian noise sigma")
        ->capture_default_str();
    synth_cmd->add_option("--swap-probability", syn.noise.swap_probability,
                          "Per-region channel swap probability")
        ->capture_default_str();
    synth_cmd->add_option("--noise-seed", syn.noise.seed, "Noise stream seed")
        ->capture_default_str();
    synth_cmd->add_option("--lexicon", syn.lexicon_path,
                          "Word source (default: built-in list)");
    synth_cmd->add_option("--duplicates", syn.scene.duplicate_proposals,
                          "Proposals per word (exercises NMS)")
        ->capture_default_str();
    synth_cmd->add_option("--image-width", syn.scene.image_w, "Scene width")
        ->capture_default_str();
    synth_cmd->add_option("--image-height", syn.scene.image_h, "Scene height")
        ->capture_default_str();
    synth_cmd->add_option("--threads", syn.threads,
                          "Worker threads (0: TEXTSPOT_THREADS or 1)")
        ->capture_default_str();

    // grad-check
    textspot::GradCheckOptions grad;
    auto* grad_cmd = app.add_subcommand(
        "grad-check", "Verify analytic loss gradients with central differences");
    grad_cmd->add_option("--trials", grad.trials, "Random instances per loss")
        ->capture_default_str();
    grad_cmd->add_option("--global-height", grad.global_h, "Global logit rows")
        ->capture_default_str();
    grad_cmd->add_option("--global-width", grad.global_w, "Global logit cols")
        ->capture_default_str();
    grad_cmd->add_option("--char-cells", grad.char_cells, "Character logit rows")
        ->capture_default_str();
    grad_cmd->add_option("--seed", grad.seed, "Random seed")->capture_default_str();
    grad_cmd->add_option("--step", grad.step, "Central difference step")
        ->capture_default_str();
    grad_cmd->add_option("--tolerance", grad.tolerance,
                         "Maximum allowed relative error")
        ->capture_default_str();
    grad_cmd->add_option("--perturb-gradient", grad.perturb,
                         "Test hook: offset added to analytic gradients")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (gen_cmd->parsed())
        return textspot::cmd_gen_labels(gen, std::cout, std::cerr);
    if (dec_cmd->parsed()) {
        dec.decode.connectivity = dec_connectivity == 8 ? Connectivity::kEight
                                                        : Connectivity::kFour;
        if (dec_max_match >= 0.0) dec.max_match_distance = dec_max_match;
        return textspot::cmd_decode(dec, std::cout, std::cerr);
    }
    if (eval_cmd->parsed()) return textspot::cmd_eval(ev, std::cout, std::cerr);
    if (synth_cmd->parsed()) return textspot::cmd_synth(syn, std::cout, std::cerr);
    if (grad_cmd->parsed())
        return textspot::cmd_grad_check(grad, std::cout, std::cerr);
    return 1;
}
