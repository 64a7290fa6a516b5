#pragma once

#include "textspot/decode.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace textspot {

// Candidate word list for sequence correction. Words are case-folded and
// filtered to charset symbols on load; file order is preserved (it breaks
// ties in best_match).
struct Lexicon {
    std::vector<std::string> words;
};

// One word per line, UTF-8; non-charset symbols are dropped per word and
// words left empty are skipped.
Lexicon load_lexicon(const std::filesystem::path& path);
Lexicon make_lexicon(const std::vector<std::string>& raw_words);

// Pluggable edit-operation costs, each in [0, 1]. Positions index the
// predicted string; the ProbTable is the pixel-voting evidence for it.
struct CostModel {
    std::function<double(std::size_t pos, const ProbTable& probs)> delete_cost;
    std::function<double(char candidate_symbol)> insert_cost;
    std::function<double(std::size_t pos, char candidate_symbol,
                         const ProbTable& probs)> replace_cost;

    // All operations cost exactly 1 (the standard edit distance).
    static CostModel unit();

    // Probability-weighted costs from the voting evidence:
    //   delete  = voted probability of the predicted symbol (confident
    //             characters are expensive to drop),
    //   insert  = 1 (no evidence for unseen characters),
    //   replace = 1 - voted probability of the candidate symbol.
    // Symbols outside the charset take probability 0.
    static CostModel probability_weighted();
};

// Levenshtein distance (all operation costs 1).
int edit_distance(const std::string& a, const std::string& b);

// Weighted edit distance between the prediction and a candidate word:
// D(i,j) = max(i,j) when min(i,j) = 0, else
// min(D(i-1,j) + C_d, D(i,j-1) + C_i, D(i-1,j-1) + C_r * [a_i != b_j]).
// probs must have one entry per predicted character.
double weighted_edit_distance(const std::string& pred, const ProbTable& probs,
                              const std::string& candidate, const CostModel& costs);

struct LexiconMatch {
    std::string word;
    double distance = 0.0;
    std::size_t lexicon_index = 0;
};

// Word minimizing the weighted edit distance. Ties break by smaller standard
// edit distance to the prediction, then by lexicon order. Returns nullopt when
// the minimum exceeds max_distance (if set). Throws ContractError on an empty
// lexicon.
std::optional<LexiconMatch> best_match(
    const std::string& pred, const ProbTable& probs, const Lexicon& lex,
    const CostModel& costs, std::optional<double> max_distance = std::nullopt);

} // namespace textspot
