#include "textspot/charset.hpp"

#include "textspot/errors.hpp"

namespace textspot::charset {

char fold(char c) {
    if (c >= 'A' && c <= 'Z') return static_cast<char>(c - 'A' + 'a');
    return c;
}

std::optional<int> index_of(char symbol) {
    const char c = fold(symbol);
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'z') return 10 + (c - 'a');
    return std::nullopt;
}

char symbol_at(int index) {
    if (index < 0 || index >= kSize)
        throw ContractError("charset index out of range: " + std::to_string(index));
    if (index < 10) return static_cast<char>('0' + index);
    return static_cast<char>('a' + (index - 10));
}

bool contains(char symbol) { return index_of(symbol).has_value(); }

bool is_charset_word(std::string_view word) {
    for (char c : word)
        if (!contains(c)) return false;
    return true;
}

std::string fold_string(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = fold(c);
    return out;
}

int channel_of_index(int index) {
    if (index < 0 || index >= kSize)
        throw ContractError("charset index out of range: " + std::to_string(index));
    return index + 1;
}

} // namespace textspot::charset
