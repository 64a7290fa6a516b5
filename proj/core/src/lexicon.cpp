#include "textspot/lexicon.hpp"

#include "textspot/charset.hpp"
#include "textspot/errors.hpp"

#include <algorithm>
#include <fstream>

namespace textspot {

Lexicon make_lexicon(const std::vector<std::string>& raw_words) {
    Lexicon lex;
    lex.words.reserve(raw_words.size());
    for (const std::string& raw : raw_words) {
        std::string word;
        for (char c : raw) {
            const char folded = charset::fold(c);
            if (charset::contains(folded)) word.push_back(folded);
        }
        if (!word.empty()) lex.words.push_back(std::move(word));
    }
    return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open lexicon: " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return make_lexicon(lines);
}

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double voted_probability(const ProbTable& probs, std::size_t pos, char symbol) {
    const auto idx = charset::index_of(symbol);
    if (!idx) return 0.0;
    return probs.entries[pos].probs[static_cast<std::size_t>(*idx)];
}

} // namespace

CostModel CostModel::unit() {
    CostModel m;
    m.delete_cost = [](std::size_t, const ProbTable&) { return 1.0; };
    m.insert_cost = [](char) { return 1.0; };
    m.replace_cost = [](std::size_t, char, const ProbTable&) { return 1.0; };
    return m;
}

CostModel CostModel::probability_weighted() {
    CostModel m;
    m.delete_cost = [](std::size_t pos, const ProbTable& probs) {
        return clamp01(voted_probability(probs, pos, probs.entries[pos].symbol));
    };
    m.insert_cost = [](char) { return 1.0; };
    m.replace_cost = [](std::size_t pos, char candidate, const ProbTable& probs) {
        return clamp01(1.0 - voted_probability(probs, pos, candidate));
    };
    return m;
}

int edit_distance(const std::string& a, const std::string& b) {
    const std::size_t la = a.size(), lb = b.size();
    std::vector<int> prev(lb + 1), cur(lb + 1);
    for (std::size_t j = 0; j <= lb; ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= la; ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= lb; ++j) {
            const int sub = prev[j - 1] + (a[i - 1] != b[j - 1] ? 1 : 0);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[lb];
}

double weighted_edit_distance(const std::string& pred, const ProbTable& probs,
                              const std::string& candidate,
                              const CostModel& costs) {
    if (probs.size() != pred.size())
        throw ContractError("probability table length must equal prediction length");

    const std::size_t la = pred.size(), lb = candidate.size();
    std::vector<double> prev(lb + 1), cur(lb + 1);
    for (std::size_t j = 0; j <= lb; ++j) prev[j] = static_cast<double>(j);
    for (std::size_t i = 1; i <= la; ++i) {
        cur[0] = static_cast<double>(i);
        const double del = costs.delete_cost(i - 1, probs);
        for (std::size_t j = 1; j <= lb; ++j) {
            const double ins = costs.insert_cost(candidate[j - 1]);
            double rep = prev[j - 1];
            if (pred[i - 1] != candidate[j - 1])
                rep += costs.replace_cost(i - 1, candidate[j - 1], probs);
            cur[j] = std::min({prev[j] + del, cur[j - 1] + ins, rep});
        }
        std::swap(prev, cur);
    }
    return prev[lb];
}

std::optional<LexiconMatch> best_match(const std::string& pred,
                                       const ProbTable& probs, const Lexicon& lex,
                                       const CostModel& costs,
                                       std::optional<double> max_distance) {
    if (lex.words.empty())
        throw ContractError("best_match requires a nonempty lexicon");

    std::optional<LexiconMatch> best;
    int best_plain = 0;
    for (std::size_t i = 0; i < lex.words.size(); ++i) {
        const double d = weighted_edit_distance(pred, probs, lex.words[i], costs);
        if (!best || d < best->distance) {
            best = LexiconMatch{lex.words[i], d, i};
            best_plain = edit_distance(pred, lex.words[i]);
        } else if (d == best->distance) {
            const int plain = edit_distance(pred, lex.words[i]);
            if (plain < best_plain) {
                best = LexiconMatch{lex.words[i], d, i};
                best_plain = plain;
            }
        }
    }
    if (max_distance && best->distance > *max_distance) return std::nullopt;
    return best;
}

} // namespace textspot
