#pragma once

#include "textspot/decode.hpp"
#include "textspot/eval.hpp"
#include "textspot/geometry.hpp"
#include "textspot/targets.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace textspot {

// Self-describing JSON documents, version 1. Polygons are stored as flat
// [x0, y0, x1, y1, ...] lists in image pixels.

struct AnnotationInstance {
    Polygon polygon;
    std::string transcription;
    bool care = true;
    std::optional<std::vector<CharBox>> char_boxes;

    friend bool operator==(const AnnotationInstance&,
                           const AnnotationInstance&) = default;
};

struct AnnotatedImage {
    std::string id;
    int width = 0;
    int height = 0;
    std::vector<AnnotationInstance> instances;

    friend bool operator==(const AnnotatedImage&, const AnnotatedImage&) = default;
};

struct AnnotationDocument {
    std::vector<AnnotatedImage> images;

    friend bool operator==(const AnnotationDocument&,
                           const AnnotationDocument&) = default;
};

struct ProposalImage {
    std::string id;
    std::vector<ScoredBox> proposals;

    friend bool operator==(const ProposalImage&, const ProposalImage&) = default;
};

struct ProposalsDocument {
    std::vector<ProposalImage> images;

    friend bool operator==(const ProposalsDocument&,
                           const ProposalsDocument&) = default;
};

struct ResultInstance {
    Polygon polygon;
    std::string text; // raw pixel-voting decode
    double score = 0.0;
    std::vector<std::array<double, 36>> probs; // one vector per character
    std::optional<std::string> matched_word;

    friend bool operator==(const ResultInstance&, const ResultInstance&) = default;
};

struct ResultImage {
    std::string id;
    std::vector<ResultInstance> instances;

    friend bool operator==(const ResultImage&, const ResultImage&) = default;
};

struct ResultsDocument {
    std::vector<ResultImage> images;

    friend bool operator==(const ResultsDocument&, const ResultsDocument&) = default;
};

// Serialization is deterministic; parse(serialize(doc)) == doc. Parsers
// throw ParseError with the offending image id / instance index in the
// message.
std::string serialize_annotations(const AnnotationDocument& doc);
AnnotationDocument parse_annotations(const std::string& text);
std::string serialize_proposals(const ProposalsDocument& doc);
ProposalsDocument parse_proposals(const std::string& text);
std::string serialize_results(const ResultsDocument& doc);
ResultsDocument parse_results(const std::string& text);

AnnotationDocument load_annotations(const std::filesystem::path& path);
ProposalsDocument load_proposals(const std::filesystem::path& path);
ResultsDocument load_results(const std::filesystem::path& path);
void save_text_file(const std::string& text, const std::filesystem::path& path);

// Evaluation/target-generation views of an annotated instance.
GtLabel to_gt_label(const AnnotationInstance& instance);
GtInstance to_gt_instance(const AnnotationInstance& instance);

// Result record from a spotted instance (raw decode plus optional lexicon
// match).
ResultInstance to_result_instance(const SpottedInstance& spotted,
                                  std::optional<std::string> matched_word);
// Spotted-instance view of a stored result, optionally substituting the
// matched word for the raw text.
SpottedInstance to_spotted_instance(const ResultInstance& record,
                                    bool prefer_matched_word);

} // namespace textspot
