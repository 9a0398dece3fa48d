#pragma once

#include <cctype>
#include <string>
#include <string_view>

namespace mpprl {

namespace detail {

// American Soundex digit table; 0 marks vowels (code separators) and
// -1 marks h/w (transparent between equal codes).
inline int soundex_code(char c) {
    switch (c) {
        case 'b': case 'f': case 'p': case 'v': return 1;
        case 'c': case 'g': case 'j': case 'k': case 'q':
        case 's': case 'x': case 'z': return 2;
        case 'd': case 't': return 3;
        case 'l': return 4;
        case 'm': case 'n': return 5;
        case 'r': return 6;
        case 'h': case 'w': return -1;
        default: return 0;  // a e i o u y
    }
}

}  // namespace detail

// Standard 4-character Soundex code (letter + 3 zero-padded digits).
// Non-alphabetic characters are ignored; empty or fully non-alphabetic
// input yields the sentinel "Z000".
inline std::string soundex(std::string_view name) {
    std::string letters;
    for (char raw : name) {
        const unsigned char u = static_cast<unsigned char>(raw);
        if (std::isalpha(u))
            letters.push_back(static_cast<char>(std::tolower(u)));
    }
    if (letters.empty()) return "Z000";

    std::string out;
    out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(letters[0]))));
    int prev = detail::soundex_code(letters[0]);
    for (std::size_t i = 1; i < letters.size() && out.size() < 4; ++i) {
        const int code = detail::soundex_code(letters[i]);
        if (code > 0 && code != prev)
            out.push_back(static_cast<char>('0' + code));
        if (code != -1) prev = code;  // h/w keep the previous code alive
    }
    out.resize(4, '0');
    return out;
}

}  // namespace mpprl
