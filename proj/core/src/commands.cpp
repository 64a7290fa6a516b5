#include "textspot/commands.hpp"

#include "textspot/documents.hpp"
#include "textspot/errors.hpp"
#include "textspot/eval.hpp"
#include "textspot/lexicon.hpp"
#include "textspot/losses.hpp"
#include "textspot/mtsr.hpp"
#include "textspot/parallel.hpp"
#include "textspot/rng.hpp"

#include <json.hpp>

#include <iomanip>
#include <ostream>
#include <sstream>

namespace textspot {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Word source for synthetic scenes when no lexicon file is given.
const std::vector<std::string> kBuiltinWords = {
    "the",     "quick",   "brown",   "fox",      "jumps",    "over",
    "lazy",    "dog",     "street",  "coffee",   "market",   "open",
    "closed",  "exit",    "parking", "hotel",    "museum",   "station",
    "north",   "south",   "east",    "west",     "airport",  "taxi",
    "library", "school",  "bakery",  "pharmacy", "garden",   "bridge",
    "river",   "mountain","valley",  "harbor",   "castle",   "tower",
    "plaza",   "avenue",  "road",    "lane",     "center",   "store",
    "sale",    "price",   "menu",    "pizza",    "burger",   "salad",
    "water",   "juice",   "ticket",  "train",    "metro",    "tram",
    "danger",  "caution", "welcome", "thanks",   "please",   "push",
    "pull",    "enter",   "lobby",   "floor",    "level",    "stairs",
    "phone",   "camera",  "cinema",  "theater",  "gallery",  "studio",
    "office",  "bank",    "post",    "mail",     "news",     "radio",
    "sports",  "tennis",  "soccer",  "cricket",  "running",  "cycling",
    "number7", "gate42",  "routE66", "zone9",    "dock3",    "pier39",
    "spotting","reading", "writing", "letters",  "symbols",  "words"};

int run_guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ContractError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const GeometryError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

std::string scene_id(int index) {
    std::ostringstream s;
    s << "scene" << std::setw(4) << std::setfill('0') << index;
    return s.str();
}

std::string stack_file_name(const std::string& image_id, std::size_t proposal) {
    return image_id + "_p" + std::to_string(proposal) + ".mtsr";
}

} // namespace

int cmd_gen_labels(const GenLabelsOptions& options, std::ostream& out,
                   std::ostream& err) {
    return run_guarded(err, [&]() -> int {
        const AnnotationDocument annotations =
            load_annotations(options.annotations_path);
        const ProposalsDocument proposals = load_proposals(options.proposals_path);
        fs::create_directories(options.out_dir);

        json manifest;
        manifest["format"] = "textspot/target-manifest";
        manifest["version"] = 1;
        manifest["map_height"] = options.map_h;
        manifest["map_width"] = options.map_w;
        json entries = json::array();

        std::size_t written = 0;
        for (const ProposalImage& pimg : proposals.images) {
            const AnnotatedImage* aimg = nullptr;
            for (const AnnotatedImage& img : annotations.images)
                if (img.id == pimg.id) {
                    aimg = &img;
                    break;
                }
            if (!aimg)
                throw ParseError("proposals reference unknown image '" + pimg.id + "'");

            for (std::size_t p = 0; p < pimg.proposals.size(); ++p) {
                const AxisRect& rect = pimg.proposals[p].rect;
                double best_iou = 0.0;
                std::size_t best_instance = aimg->instances.size();
                for (std::size_t i = 0; i < aimg->instances.size(); ++i) {
                    const double iou =
                        rect_iou(rect, bounding_rect(aimg->instances[i].polygon));
                    if (iou > best_iou) {
                        best_iou = iou;
                        best_instance = i;
                    }
                }
                if (best_instance == aimg->instances.size() ||
                    best_iou < options.match_iou)
                    continue;

                const TargetMaps maps =
                    build_mask_targets(to_gt_instance(aimg->instances[best_instance]),
                                       rect, options.map_h, options.map_w);
                const std::string global_name =
                    pimg.id + "_p" + std::to_string(p) + "_global.mtsr";
                const std::string chars_name =
                    pimg.id + "_p" + std::to_string(p) + "_chars.mtsr";
                mtsr::save_tensor_file(mtsr::from_score_map(maps.global),
                                       options.out_dir / global_name);
                mtsr::save_tensor_file(mtsr::from_label_grid(maps.char_labels),
                                       options.out_dir / chars_name);

                json entry;
                entry["image"] = pimg.id;
                entry["proposal"] = p;
                entry["instance"] = best_instance;
                entry["iou"] = best_iou;
                entry["global"] = global_name;
                entry["chars"] = chars_name;
                entries.push_back(std::move(entry));
                ++written;
            }
        }
        manifest["entries"] = std::move(entries);
        save_text_file(manifest.dump(2) + "\n", options.out_dir / "manifest.json");
        out << "wrote " << written << " target pairs to " << options.out_dir.string()
            << "\n";
        return kExitOk;
    });
}

int cmd_decode(const DecodeCmdOptions& options, std::ostream& out,
               std::ostream& err) {
    return run_guarded(err, [&]() -> int {
        const ProposalsDocument proposals = load_proposals(options.proposals_path);
        std::optional<Lexicon> lexicon;
        if (options.lexicon_path) lexicon = load_lexicon(*options.lexicon_path);
        const CostModel costs = CostModel::probability_weighted();

        const int threads =
            options.threads > 0 ? options.threads : default_thread_count();

        ResultsDocument results;
        results.images.resize(proposals.images.size());
        std::size_t total = 0;

        parallel_for(proposals.images.size(), threads, [&](std::size_t i) {
            const ProposalImage& pimg = proposals.images[i];
            const MapProvider provider = [&](std::size_t index, const ScoredBox&) {
                const fs::path path =
                    options.stacks_dir / stack_file_name(pimg.id, index);
                if (!fs::exists(path))
                    throw IoError("missing stack file " + path.string());
                return load_map_stack_file(path);
            };
            const std::vector<SpottedInstance> spots =
                run_pipeline(pimg.proposals, provider, options.nms_threshold,
                             options.score_threshold, options.decode);

            ResultImage rimg;
            rimg.id = pimg.id;
            for (const SpottedInstance& s : spots) {
                std::optional<std::string> matched;
                if (lexicon && !lexicon->words.empty()) {
                    const auto match = best_match(s.text, s.probs, *lexicon, costs,
                                                  options.max_match_distance);
                    if (match) matched = match->word;
                }
                rimg.instances.push_back(to_result_instance(s, std::move(matched)));
            }
            results.images[i] = std::move(rimg);
        });

        for (const ResultImage& img : results.images) total += img.instances.size();
        save_text_file(serialize_results(results), options.out_path);
        out << "decoded " << total << " instances across "
            << results.images.size() << " images -> " << options.out_path.string()
            << "\n";
        return kExitOk;
    });
}

int cmd_eval(const EvalCmdOptions& options, std::ostream& out, std::ostream& err) {
    return run_guarded(err, [&]() -> int {
        const ResultsDocument results = load_results(options.results_path);
        const AnnotationDocument annotations =
            load_annotations(options.annotations_path);

        enum class Mode { kDetection, kEndToEnd, kWordSpotting };
        Mode mode;
        if (options.mode == "detection")
            mode = Mode::kDetection;
        else if (options.mode == "end_to_end")
            mode = Mode::kEndToEnd;
        else if (options.mode == "word_spotting")
            mode = Mode::kWordSpotting;
        else
            throw ConfigError("unknown eval mode '" + options.mode +
                              "' (detection | end_to_end | word_spotting)");

        std::optional<Lexicon> lexicon;
        if (options.lexicon_path) lexicon = load_lexicon(*options.lexicon_path);
        const CostModel costs = CostModel::probability_weighted();

        std::size_t tp = 0, fp = 0, care = 0;
        json per_image = json::array();
        for (const AnnotatedImage& aimg : annotations.images) {
            std::vector<GtLabel> gts;
            gts.reserve(aimg.instances.size());
            for (const AnnotationInstance& inst : aimg.instances)
                gts.push_back(to_gt_label(inst));

            std::vector<SpottedInstance> spots;
            for (const ResultImage& rimg : results.images) {
                if (rimg.id != aimg.id) continue;
                for (const ResultInstance& record : rimg.instances) {
                    SpottedInstance s = to_spotted_instance(record, false);
                    if (lexicon && !lexicon->words.empty()) {
                        const auto match =
                            best_match(record.text, s.probs, *lexicon, costs,
                                       std::nullopt);
                        if (match) s.text = match->word;
                    }
                    spots.push_back(std::move(s));
                }
            }

            EvalReport report;
            switch (mode) {
                case Mode::kDetection:
                    report = eval_detection(spots, gts, options.iou_threshold);
                    break;
                case Mode::kEndToEnd:
                    report = eval_end_to_end(spots, gts, EvalMode::kEndToEnd,
                                             options.iou_threshold);
                    break;
                case Mode::kWordSpotting:
                    report = eval_end_to_end(spots, gts, EvalMode::kWordSpotting,
                                             options.iou_threshold);
                    break;
            }
            tp += report.true_positives;
            fp += report.false_positives;
            care += report.care_gt_count;

            json ji;
            ji["id"] = aimg.id;
            ji["true_positives"] = report.true_positives;
            ji["false_positives"] = report.false_positives;
            ji["care_gts"] = report.care_gt_count;
            per_image.push_back(std::move(ji));
        }

        const EvalReport total = make_report(tp, fp, care);
        if (options.json_output) {
            json root;
            root["mode"] = options.mode;
            root["precision"] = total.precision;
            root["recall"] = total.recall;
            root["fmeasure"] = total.fmeasure;
            root["true_positives"] = tp;
            root["false_positives"] = fp;
            root["care_gts"] = care;
            root["images"] = std::move(per_image);
            out << root.dump(2) << "\n";
        } else {
            out << std::fixed << std::setprecision(4);
            out << "precision: " << total.precision << "\n";
            out << "recall: " << total.recall << "\n";
            out << "fmeasure: " << total.fmeasure << "\n";
        }
        return kExitOk;
    });
}

int cmd_synth(const SynthCmdOptions& options, std::ostream& out,
              std::ostream& err) {
    return run_guarded(err, [&]() -> int {
        if (options.n_scenes < 0) throw ContractError("n_scenes must be >= 0");
        options.noise.validate();

        Lexicon lexicon = options.lexicon_path ? load_lexicon(*options.lexicon_path)
                                               : make_lexicon(kBuiltinWords);

        fs::create_directories(options.out_dir / "stacks");

        std::vector<SynthScene> scenes;
        scenes.reserve(static_cast<std::size_t>(options.n_scenes));
        for (int s = 0; s < options.n_scenes; ++s)
            scenes.push_back(build_scene(DetRng::derive(options.seed, s),
                                         options.n_words, lexicon, options.scene));

        const int threads =
            options.threads > 0 ? options.threads : default_thread_count();
        parallel_for(scenes.size(), threads, [&](std::size_t s) {
            NoiseSpec noise = options.noise;
            noise.seed = DetRng::derive(options.noise.seed, s);
            const MapProvider provider =
                scene_map_provider(scenes[s], noise, options.map_h, options.map_w);
            const std::string id = scene_id(static_cast<int>(s));
            for (std::size_t p = 0; p < scenes[s].proposals.size(); ++p) {
                const MaskStack stack = provider(p, scenes[s].proposals[p]);
                save_map_stack_file(stack, options.out_dir / "stacks" /
                                               stack_file_name(id, p));
            }
        });

        AnnotationDocument annotations;
        ProposalsDocument proposals;
        json scene_entries = json::array();
        for (std::size_t s = 0; s < scenes.size(); ++s) {
            const SynthScene& scene = scenes[s];
            const std::string id = scene_id(static_cast<int>(s));

            AnnotatedImage aimg;
            aimg.id = id;
            aimg.width = scene.image_w;
            aimg.height = scene.image_h;
            for (std::size_t w = 0; w < scene.words.size(); ++w) {
                const WordLayout& layout = scene.words[w].layout;
                AnnotationInstance inst;
                inst.polygon = scene.gt[w].polygon;
                inst.transcription = scene.gt[w].transcription;
                inst.care = scene.gt[w].care;
                std::vector<CharBox> boxes;
                boxes.reserve(layout.char_boxes.size());
                for (std::size_t c = 0; c < layout.char_boxes.size(); ++c)
                    boxes.push_back({layout.char_boxes[c], layout.word[c]});
                inst.char_boxes = std::move(boxes);
                aimg.instances.push_back(std::move(inst));
            }
            annotations.images.push_back(std::move(aimg));

            ProposalImage pimg;
            pimg.id = id;
            pimg.proposals = scene.proposals;
            proposals.images.push_back(std::move(pimg));

            json je;
            je["id"] = id;
            je["words"] = scene.words.size();
            je["proposals"] = scene.proposals.size();
            scene_entries.push_back(std::move(je));
        }

        save_text_file(serialize_annotations(annotations),
                       options.out_dir / "annotations.json");
        save_text_file(serialize_proposals(proposals),
                       options.out_dir / "proposals.json");

        json manifest;
        manifest["format"] = "textspot/synth-manifest";
        manifest["version"] = 1;
        manifest["seed"] = options.seed;
        manifest["noise_sigma"] = options.noise.sigma;
        manifest["noise_swap_probability"] = options.noise.swap_probability;
        manifest["map_height"] = options.map_h;
        manifest["map_width"] = options.map_w;
        manifest["annotations"] = "annotations.json";
        manifest["proposals"] = "proposals.json";
        manifest["scenes"] = std::move(scene_entries);
        save_text_file(manifest.dump(2) + "\n", options.out_dir / "manifest.json");

        out << "wrote " << scenes.size() << " scenes to "
            << options.out_dir.string() << "\n";
        return kExitOk;
    });
}

int cmd_grad_check(const GradCheckOptions& options, std::ostream& out,
                   std::ostream& err) {
    return run_guarded(err, [&]() -> int {
        if (options.trials < 0) throw ContractError("trials must be >= 0");
        if (options.trials == 0) {
            out << "warning: 0 trials requested, gradient check is vacuous\n";
            return kExitOk;
        }

        DetRng rng(options.seed);
        double max_global = 0.0, max_char = 0.0;
        for (int t = 0; t < options.trials; ++t) {
            Grid<double> logits(options.global_h, options.global_w);
            Grid<int> target(options.global_h, options.global_w);
            for (double& v : logits.values) v = rng.uniform(-5.0, 5.0);
            for (int& y : target.values) y = static_cast<int>(rng.next_below(2));
            max_global = std::max(
                max_global, finite_diff_check_global(logits, target, options.step,
                                                     options.perturb));

            Grid<double> char_logits(options.char_cells, 37);
            std::vector<int> labels(static_cast<std::size_t>(options.char_cells));
            for (double& v : char_logits.values) v = rng.uniform(-5.0, 5.0);
            for (int& l : labels) l = static_cast<int>(rng.next_below(38)) - 1;
            max_char = std::max(
                max_char, finite_diff_check_char(char_logits, labels, options.step,
                                                 options.perturb));
        }

        out << std::scientific << std::setprecision(3);
        out << "global_loss max relative gradient error: " << max_global << "\n";
        out << "char_loss max relative gradient error: " << max_char << "\n";
        if (max_global > options.tolerance || max_char > options.tolerance) {
            err << "gradient check failed: error exceeds "
                << options.tolerance << "\n";
            return kExitRuntime;
        }
        return kExitOk;
    });
}

} // namespace textspot
