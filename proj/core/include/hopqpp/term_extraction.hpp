#pragma once

#include "hopqpp/corpus_index.hpp"
#include "hopqpp/tokenizer.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hopqpp {

enum class SpanKind { Entity, FrozenPhrase };
enum class SpanSource { Heuristic, Annotation };

std::string_view to_string(SpanKind kind) noexcept;
/// Accepts "entity" and "frozen_phrase". Throws Validation otherwise.
SpanKind parse_span_kind(std::string_view text);

/// Byte range [begin, end) into the question text.
struct CharRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    bool operator==(const CharRange&) const = default;
};

struct TermSpan {
    std::vector<Token> tokens;
    CharRange range;
    SpanKind kind = SpanKind::Entity;
    SpanSource source = SpanSource::Heuristic;

    [[nodiscard]] std::vector<std::string> words() const;
};

/// Externally supplied spans for one question, split by kind. A question that
/// has an annotation record bypasses both heuristics, even for an empty list.
struct QuestionAnnotations {
    std::vector<CharRange> entities;
    std::vector<CharRange> frozen_phrases;
};

/// Capitalisation-run entity spans, or the validated annotations when supplied.
/// Throws Validation listing every out-of-bounds or overlapping annotation.
std::vector<TermSpan> extract_entities(std::string_view question,
                                       const std::optional<std::vector<CharRange>>& annotations = {});

/// Multi-token question phrases outside the entity spans that occur contiguously
/// in the corpus and are rarer than p_thr. Phrase length is bounded by the
/// index's max_n because longer windows cannot be checked against it.
std::vector<TermSpan> extract_frozen_phrases(std::string_view question, const DfIndex& index,
                                             std::span<const TermSpan> entities, double p_thr,
                                             const std::optional<std::vector<CharRange>>& annotations = {});

struct NGramEntry {
    std::vector<std::string> tokens;
    std::string key;
    std::size_t span_index = 0;   ///< index into NGramSet::spans
    std::size_t char_begin = 0;   ///< offset of the first token in the question
    SpanKind kind = SpanKind::Entity;

    [[nodiscard]] std::size_t length() const noexcept { return tokens.size(); }
};

struct NGramSet {
    std::string question_id;
    std::vector<TermSpan> spans;     ///< entity spans first, then frozen phrases
    std::vector<NGramEntry> entries; ///< one per distinct (n-gram, span) pair

    /// Distinct keys in first-appearance order.
    [[nodiscard]] std::vector<std::string> unique_keys() const;
};

/// Every contiguous 1..max_n-gram of each entity span plus every unigram of each
/// frozen phrase.
NGramSet build_ngram_set(std::string question_id, std::span<const TermSpan> entities,
                         std::span<const TermSpan> frozen, std::size_t max_n = 3);

/// Full extraction pipeline for one question.
NGramSet extract_ngram_set(std::string question_id, std::string_view question, const DfIndex& index,
                           double p_thr, const std::optional<QuestionAnnotations>& annotations = {});

}  // namespace hopqpp
