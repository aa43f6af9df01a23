#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hopqpp {

/// A lowercased token together with its byte range [begin, end) in the source text.
struct Token {
    std::string text;
    std::size_t begin = 0;
    std::size_t end = 0;

    bool operator==(const Token&) const = default;
};

/// Lowercases ASCII letters and splits on every ASCII character that is not a
/// letter or digit. Bytes >= 0x80 are treated as word characters so UTF-8
/// sequences stay inside their token.
std::vector<std::string> tokenize(std::string_view text);

std::vector<Token> tokenize_with_offsets(std::string_view text);

/// Canonical n-gram key: tokens joined by a single space. Tokens never contain
/// spaces, so the key is unambiguous.
std::string ngram_key(std::span<const std::string> tokens);

/// All contiguous n-gram keys of length 1..max_n, in order of position then length.
/// Duplicates are kept.
std::vector<std::string> contiguous_ngrams(std::span<const std::string> tokens,
                                           std::size_t max_n);

}  // namespace hopqpp
