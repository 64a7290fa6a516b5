#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace textspot {

// The 36-symbol recognition alphabet: digits '0'-'9' at indices 0-9,
// lowercase letters 'a'-'z' at indices 10-35. Uppercase input folds to
// lowercase before lookup; the alphabet itself is caseless.
namespace charset {

inline constexpr int kSize = 36;

// Mask stack layout: channel 0 is the global text instance map, channels
// 1..36 are the character maps (charset index c lives on channel c + 1),
// channel 37 is the background map of characters.
inline constexpr int kMaskChannels = 38;
inline constexpr int kGlobalChannel = 0;
inline constexpr int kBackgroundChannel = 37;

// Lowercase fold for ASCII letters; other characters pass through.
char fold(char c);

// Charset index of a symbol (after case folding), or nullopt if the symbol
// is outside the alphabet.
std::optional<int> index_of(char symbol);

// Symbol at a charset index. Throws ContractError if index is out of range.
char symbol_at(int index);

bool contains(char symbol);

// True when every character of `word` (after folding) is in the charset.
bool is_charset_word(std::string_view word);

// Lowercase-folded copy of a string.
std::string fold_string(std::string_view s);

// Channel of the mask stack carrying charset index `index` (= index + 1).
int channel_of_index(int index);

} // namespace charset

} // namespace textspot
