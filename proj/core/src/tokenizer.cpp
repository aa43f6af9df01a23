#include "hopqpp/tokenizer.hpp"

namespace hopqpp {

namespace {

bool is_word_byte(unsigned char c)
{
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

char lower(unsigned char c)
{
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

}  // namespace

std::vector<Token> tokenize_with_offsets(std::string_view text)
{
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && !is_word_byte(static_cast<unsigned char>(text[i]))) {
            ++i;
        }
        if (i == text.size()) {
            break;
        }
        Token tok;
        tok.begin = i;
        while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) {
            tok.text.push_back(lower(static_cast<unsigned char>(text[i])));
            ++i;
        }
        tok.end = i;
        tokens.push_back(std::move(tok));
    }
    return tokens;
}

std::vector<std::string> tokenize(std::string_view text)
{
    std::vector<std::string> out;
    for (auto& tok : tokenize_with_offsets(text)) {
        out.push_back(std::move(tok.text));
    }
    return out;
}

std::string ngram_key(std::span<const std::string> tokens)
{
    std::string key;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) {
            key.push_back(' ');
        }
        key += tokens[i];
    }
    return key;
}

std::vector<std::string> contiguous_ngrams(std::span<const std::string> tokens, std::size_t max_n)
{
    std::vector<std::string> keys;
    for (std::size_t start = 0; start < tokens.size(); ++start) {
        std::string key;
        for (std::size_t n = 1; n <= max_n && start + n <= tokens.size(); ++n) {
            if (n > 1) {
                key.push_back(' ');
            }
            key += tokens[start + n - 1];
            keys.push_back(key);
        }
    }
    return keys;
}

}  // namespace hopqpp
