#include "textspot/documents.hpp"

#include "textspot/charset.hpp"
#include "textspot/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace textspot {

namespace {

using nlohmann::json;

constexpr int kDocVersion = 1;

json polygon_to_json(const Polygon& p) {
    json flat = json::array();
    for (const Point& v : p.vertices) {
        flat.push_back(v.x);
        flat.push_back(v.y);
    }
    return flat;
}

Polygon polygon_from_json(const json& flat, const std::string& where) {
    if (!flat.is_array() || flat.size() % 2 != 0)
        throw ParseError(where + ": polygon must be a flat even-length number list");
    Polygon p;
    for (std::size_t i = 0; i < flat.size(); i += 2) {
        if (!flat[i].is_number() || !flat[i + 1].is_number())
            throw ParseError(where + ": polygon coordinates must be numbers");
        p.vertices.push_back({flat[i].get<double>(), flat[i + 1].get<double>()});
    }
    if (p.vertices.size() < 3)
        throw ParseError(where + ": polygon needs at least 3 vertices, got " +
                         std::to_string(p.vertices.size()));
    return p;
}

json rect_to_json(const AxisRect& r) {
    return json::array({r.xmin, r.ymin, r.xmax, r.ymax});
}

AxisRect rect_from_json(const json& arr, const std::string& where) {
    if (!arr.is_array() || arr.size() != 4)
        throw ParseError(where + ": box must be [xmin, ymin, xmax, ymax]");
    AxisRect r{arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>(),
               arr[3].get<double>()};
    if (!(r.xmin < r.xmax) || !(r.ymin < r.ymax))
        throw ParseError(where + ": box has non-positive extent");
    return r;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

void check_header(const json& doc, const std::string& format) {
    if (!doc.is_object()) throw ParseError("document root must be an object");
    if (!doc.contains("format") || doc["format"] != format)
        throw ParseError("document format must be \"" + format + "\"");
    if (!doc.contains("version") || !doc["version"].is_number_integer() ||
        doc["version"].get<int>() != kDocVersion)
        throw ParseError("unsupported document version");
}

} // namespace

std::string serialize_annotations(const AnnotationDocument& doc) {
    json root;
    root["format"] = "textspot/annotations";
    root["version"] = kDocVersion;
    json images = json::array();
    for (const AnnotatedImage& img : doc.images) {
        json jimg;
        jimg["id"] = img.id;
        jimg["width"] = img.width;
        jimg["height"] = img.height;
        json instances = json::array();
        for (const AnnotationInstance& inst : img.instances) {
            json ji;
            ji["polygon"] = polygon_to_json(inst.polygon);
            ji["transcription"] = inst.transcription;
            ji["care"] = inst.care;
            if (inst.char_boxes) {
                json boxes = json::array();
                for (const CharBox& cb : *inst.char_boxes) {
                    json jb;
                    jb["box"] = rect_to_json(cb.box);
                    jb["label"] = std::string(1, cb.label);
                    boxes.push_back(std::move(jb));
                }
                ji["char_boxes"] = std::move(boxes);
            }
            instances.push_back(std::move(ji));
        }
        jimg["instances"] = std::move(instances);
        images.push_back(std::move(jimg));
    }
    root["images"] = std::move(images);
    return root.dump(2) + "\n";
}

AnnotationDocument parse_annotations(const std::string& text) {
    const json root = parse_json(text);
    check_header(root, "textspot/annotations");
    if (!root.contains("images") || !root["images"].is_array())
        throw ParseError("annotations document needs an \"images\" array");

    AnnotationDocument doc;
    for (const json& jimg : root["images"]) {
        AnnotatedImage img;
        if (!jimg.contains("id") || !jimg["id"].is_string())
            throw ParseError("image entry missing string \"id\"");
        img.id = jimg["id"].get<std::string>();
        img.width = jimg.value("width", 0);
        img.height = jimg.value("height", 0);

        std::size_t index = 0;
        for (const json& ji : jimg.value("instances", json::array())) {
            const std::string where =
                "image '" + img.id + "' instance " + std::to_string(index);
            AnnotationInstance inst;
            if (!ji.contains("polygon"))
                throw ParseError(where + ": missing polygon");
            inst.polygon = polygon_from_json(ji["polygon"], where);
            inst.transcription = ji.value("transcription", std::string{});
            inst.care = ji.value("care", true);
            if (inst.care && inst.transcription.empty())
                throw ParseError(where + ": care instance needs a transcription");
            if (ji.contains("char_boxes")) {
                if (!ji["char_boxes"].is_array())
                    throw ParseError(where + ": char_boxes must be an array");
                std::vector<CharBox> boxes;
                for (const json& jb : ji["char_boxes"]) {
                    CharBox cb;
                    cb.box = rect_from_json(jb.at("box"), where);
                    const std::string label = jb.value("label", std::string{});
                    if (label.size() != 1 || !charset::contains(label[0]))
                        throw ParseError(where + ": char box label must be one charset symbol");
                    cb.label = charset::fold(label[0]);
                    boxes.push_back(cb);
                }
                inst.char_boxes = std::move(boxes);
            }
            img.instances.push_back(std::move(inst));
            ++index;
        }
        doc.images.push_back(std::move(img));
    }
    return doc;
}

std::string serialize_proposals(const ProposalsDocument& doc) {
    json root;
    root["format"] = "textspot/proposals";
    root["version"] = kDocVersion;
    json images = json::array();
    for (const ProposalImage& img : doc.images) {
        json jimg;
        jimg["id"] = img.id;
        json props = json::array();
        for (const ScoredBox& b : img.proposals) {
            json jb;
            jb["box"] = rect_to_json(b.rect);
            jb["score"] = b.score;
            props.push_back(std::move(jb));
        }
        jimg["proposals"] = std::move(props);
        images.push_back(std::move(jimg));
    }
    root["images"] = std::move(images);
    return root.dump(2) + "\n";
}

ProposalsDocument parse_proposals(const std::string& text) {
    const json root = parse_json(text);
    check_header(root, "textspot/proposals");
    if (!root.contains("images") || !root["images"].is_array())
        throw ParseError("proposals document needs an \"images\" array");

    ProposalsDocument doc;
    for (const json& jimg : root["images"]) {
        ProposalImage img;
        if (!jimg.contains("id") || !jimg["id"].is_string())
            throw ParseError("image entry missing string \"id\"");
        img.id = jimg["id"].get<std::string>();
        std::size_t index = 0;
        for (const json& jb : jimg.value("proposals", json::array())) {
            const std::string where =
                "image '" + img.id + "' proposal " + std::to_string(index);
            ScoredBox box;
            box.rect = rect_from_json(jb.at("box"), where);
            box.score = jb.value("score", 0.0);
            if (box.score < 0.0 || box.score > 1.0)
                throw ParseError(where + ": score must be in [0, 1]");
            img.proposals.push_back(box);
            ++index;
        }
        doc.images.push_back(std::move(img));
    }
    return doc;
}

std::string serialize_results(const ResultsDocument& doc) {
    json root;
    root["format"] = "textspot/results";
    root["version"] = kDocVersion;
    json images = json::array();
    for (const ResultImage& img : doc.images) {
        json jimg;
        jimg["id"] = img.id;
        json instances = json::array();
        for (const ResultInstance& inst : img.instances) {
            json ji;
            ji["polygon"] = polygon_to_json(inst.polygon);
            ji["text"] = inst.text;
            ji["score"] = inst.score;
            json probs = json::array();
            for (const auto& vec : inst.probs) {
                json row = json::array();
                for (double v : vec) row.push_back(v);
                probs.push_back(std::move(row));
            }
            ji["probs"] = std::move(probs);
            if (inst.matched_word) ji["matched_word"] = *inst.matched_word;
            instances.push_back(std::move(ji));
        }
        jimg["instances"] = std::move(instances);
        images.push_back(std::move(jimg));
    }
    root["images"] = std::move(images);
    return root.dump(2) + "\n";
}

ResultsDocument parse_results(const std::string& text) {
    const json root = parse_json(text);
    check_header(root, "textspot/results");
    if (!root.contains("images") || !root["images"].is_array())
        throw ParseError("results document needs an \"images\" array");

    ResultsDocument doc;
    for (const json& jimg : root["images"]) {
        ResultImage img;
        if (!jimg.contains("id") || !jimg["id"].is_string())
            throw ParseError("image entry missing string \"id\"");
        img.id = jimg["id"].get<std::string>();
        std::size_t index = 0;
        for (const json& ji : jimg.value("instances", json::array())) {
            const std::string where =
                "image '" + img.id + "' result " + std::to_string(index);
            ResultInstance inst;
            if (!ji.contains("polygon"))
                throw ParseError(where + ": missing polygon");
            inst.polygon = polygon_from_json(ji["polygon"], where);
            inst.text = ji.value("text", std::string{});
            inst.score = ji.value("score", 0.0);
            if (inst.score < 0.0 || inst.score > 1.0)
                throw ParseError(where + ": score must be in [0, 1]");
            for (const json& row : ji.value("probs", json::array())) {
                if (!row.is_array() || row.size() != 36)
                    throw ParseError(where + ": each probs row must hold 36 values");
                std::array<double, 36> vec{};
                for (std::size_t k = 0; k < 36; ++k) vec[k] = row[k].get<double>();
                inst.probs.push_back(vec);
            }
            if (inst.probs.size() != inst.text.size())
                throw ParseError(where + ": probs rows must match text length");
            if (ji.contains("matched_word"))
                inst.matched_word = ji["matched_word"].get<std::string>();
            img.instances.push_back(std::move(inst));
            ++index;
        }
        doc.images.push_back(std::move(img));
    }
    return doc;
}

namespace {

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

AnnotationDocument load_annotations(const std::filesystem::path& path) {
    try {
        return parse_annotations(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

ProposalsDocument load_proposals(const std::filesystem::path& path) {
    try {
        return parse_proposals(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

ResultsDocument load_results(const std::filesystem::path& path) {
    try {
        return parse_results(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void save_text_file(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << text;
    out.flush();
    if (!out) throw IoError("write failure: " + path.string());
}

GtLabel to_gt_label(const AnnotationInstance& instance) {
    return {instance.polygon, instance.transcription, instance.care};
}

GtInstance to_gt_instance(const AnnotationInstance& instance) {
    GtInstance gt;
    gt.polygon = instance.polygon;
    if (!instance.transcription.empty()) gt.transcription = instance.transcription;
    gt.char_boxes = instance.char_boxes;
    return gt;
}

ResultInstance to_result_instance(const SpottedInstance& spotted,
                                  std::optional<std::string> matched_word) {
    ResultInstance record;
    record.polygon = spotted.polygon;
    record.text = spotted.text;
    record.score = spotted.det_score;
    record.probs.reserve(spotted.probs.size());
    for (const ProbEntry& e : spotted.probs.entries) record.probs.push_back(e.probs);
    record.matched_word = std::move(matched_word);
    return record;
}

SpottedInstance to_spotted_instance(const ResultInstance& record,
                                    bool prefer_matched_word) {
    SpottedInstance s;
    s.polygon = record.polygon;
    s.text = (prefer_matched_word && record.matched_word) ? *record.matched_word
                                                          : record.text;
    s.det_score = record.score;
    s.probs.entries.reserve(record.probs.size());
    for (std::size_t i = 0; i < record.probs.size(); ++i) {
        ProbEntry e;
        e.symbol = i < record.text.size() ? record.text[i] : '\0';
        e.probs = record.probs[i];
        s.probs.entries.push_back(e);
    }
    return s;
}

} // namespace textspot
