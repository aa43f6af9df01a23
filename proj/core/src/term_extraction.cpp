#include "hopqpp/term_extraction.hpp"

#include "hopqpp/error.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <unordered_set>

namespace hopqpp {

namespace {

// Question-opening words that are capitalised only because they start the sentence.
constexpr std::array<std::string_view, 48> kSentenceOpeners = {
    "a",      "according", "after",  "an",    "and",   "are",   "at",    "before",
    "between", "both",     "can",    "could", "did",   "do",    "does",  "during",
    "for",    "from",      "had",    "has",   "have",  "how",   "if",    "in",
    "is",     "name",      "of",     "on",    "or",    "should", "that", "the",
    "these",  "this",      "those",  "was",   "were",  "what",  "when",  "where",
    "which",  "who",       "whom",   "whose", "why",   "will",  "with",  "would",
};

bool is_opener(std::string_view word)
{
    return std::find(kSentenceOpeners.begin(), kSentenceOpeners.end(), word) !=
           kSentenceOpeners.end();
}

bool is_blank(std::string_view gap)
{
    return !gap.empty() && std::all_of(gap.begin(), gap.end(), [](char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r';
    });
}

bool is_tight_joiner(std::string_view gap) { return gap == "-" || gap == "'"; }

std::string_view gap_between(std::string_view text, const Token& a, const Token& b)
{
    return text.substr(a.end, b.begin - a.end);
}

bool capitalised(std::string_view text, const Token& tok)
{
    char c = text[tok.begin];
    return c >= 'A' && c <= 'Z';
}

/// Same phrase continues across whitespace or an intra-word joiner.
bool same_phrase(std::string_view text, const Token& a, const Token& b)
{
    auto gap = gap_between(text, a, b);
    if (is_blank(gap) || is_tight_joiner(gap)) {
        return true;
    }
    // Initials such as "J. R. Tolkien".
    return a.end - a.begin == 1 && capitalised(text, a) && !gap.empty() && gap[0] == '.' &&
           is_blank(gap.substr(1));
}

TermSpan make_span(std::span<const Token> toks, SpanKind kind, SpanSource source)
{
    TermSpan span;
    span.tokens.assign(toks.begin(), toks.end());
    span.range = {toks.front().begin, toks.back().end};
    span.kind = kind;
    span.source = source;
    return span;
}

bool overlaps(const CharRange& a, const CharRange& b)
{
    return a.begin < b.end && b.begin < a.end;
}

std::string describe(const CharRange& r)
{
    return "[" + std::to_string(r.begin) + "," + std::to_string(r.end) + ")";
}

/// Validates annotations of one kind and turns them into spans. `blocked` holds
/// spans of another kind that the annotations must not overlap.
std::vector<TermSpan> spans_from_annotations(std::string_view question,
                                             const std::vector<CharRange>& ranges, SpanKind kind,
                                             std::span<const TermSpan> blocked)
{
    std::vector<std::string> problems;
    std::vector<TermSpan> spans;
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        const auto& r = ranges[i];
        if (r.begin >= r.end || r.end > question.size()) {
            problems.push_back(describe(r) + " out of bounds for question of length " +
                               std::to_string(question.size()));
            continue;
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (overlaps(r, ranges[j])) {
                problems.push_back(describe(r) + " overlaps " + describe(ranges[j]));
            }
        }
        for (const auto& other : blocked) {
            if (overlaps(r, other.range)) {
                problems.push_back(describe(r) + " overlaps " + std::string(to_string(other.kind)) +
                                   " span " + describe(other.range));
            }
        }
        auto toks = tokenize_with_offsets(question.substr(r.begin, r.end - r.begin));
        if (toks.empty()) {
            problems.push_back(describe(r) + " contains no tokens");
            continue;
        }
        for (auto& t : toks) {
            t.begin += r.begin;
            t.end += r.begin;
        }
        TermSpan span;
        span.tokens = std::move(toks);
        span.range = r;
        span.kind = kind;
        span.source = SpanSource::Annotation;
        spans.push_back(std::move(span));
    }
    if (!problems.empty()) {
        std::string msg = "invalid " + std::string(to_string(kind)) + " annotations:";
        for (const auto& p : problems) {
            msg += " " + p + ";";
        }
        throw Error(ErrorKind::Validation, msg);
    }
    std::sort(spans.begin(), spans.end(),
              [](const TermSpan& a, const TermSpan& b) { return a.range.begin < b.range.begin; });
    return spans;
}

}  // namespace

std::string_view to_string(SpanKind kind) noexcept
{
    return kind == SpanKind::Entity ? "entity" : "frozen_phrase";
}

SpanKind parse_span_kind(std::string_view text)
{
    if (text == "entity") {
        return SpanKind::Entity;
    }
    if (text == "frozen_phrase") {
        return SpanKind::FrozenPhrase;
    }
    throw Error(ErrorKind::Validation, "unknown span kind: " + std::string(text));
}

std::vector<std::string> TermSpan::words() const
{
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        out.push_back(t.text);
    }
    return out;
}

std::vector<std::string> NGramSet::unique_keys() const
{
    std::vector<std::string> keys;
    std::unordered_set<std::string> seen;
    for (const auto& e : entries) {
        if (seen.insert(e.key).second) {
            keys.push_back(e.key);
        }
    }
    return keys;
}

std::vector<TermSpan> extract_entities(std::string_view question,
                                       const std::optional<std::vector<CharRange>>& annotations)
{
    if (annotations) {
        return spans_from_annotations(question, *annotations, SpanKind::Entity, {});
    }

    auto toks = tokenize_with_offsets(question);
    std::vector<TermSpan> spans;
    std::size_t i = 0;
    while (i < toks.size()) {
        if (!capitalised(question, toks[i])) {
            ++i;
            continue;
        }
        auto start = i;
        auto end = i + 1;
        while (end < toks.size() && same_phrase(question, toks[end - 1], toks[end]) &&
               (capitalised(question, toks[end]) ||
                is_tight_joiner(gap_between(question, toks[end - 1], toks[end])))) {
            ++end;
        }
        i = end;
        if (start == 0) {
            if (end - start == 1) {
                continue;
            }
            if (is_opener(toks[0].text)) {
                ++start;
                while (start < end && !capitalised(question, toks[start])) {
                    ++start;
                }
                if (start == end) {
                    continue;
                }
            }
        }
        spans.push_back(make_span(std::span(toks).subspan(start, end - start),
                                  SpanKind::Entity, SpanSource::Heuristic));
    }
    return spans;
}

std::vector<TermSpan> extract_frozen_phrases(std::string_view question, const DfIndex& index,
                                             std::span<const TermSpan> entities, double p_thr,
                                             const std::optional<std::vector<CharRange>>& annotations)
{
    if (annotations) {
        return spans_from_annotations(question, *annotations, SpanKind::FrozenPhrase, entities);
    }
    if (index.num_docs() == 0) {
        throw Error(ErrorKind::EmptyIndex, "frozen-phrase detection needs a non-empty index");
    }

    auto toks = tokenize_with_offsets(question);
    std::vector<bool> blocked(toks.size(), false);
    for (std::size_t t = 0; t < toks.size(); ++t) {
        for (const auto& e : entities) {
            if (overlaps({toks[t].begin, toks[t].end}, e.range)) {
                blocked[t] = true;
            }
        }
    }

    std::vector<TermSpan> spans;
    const auto max_len = index.max_n();
    std::size_t i = 0;
    while (i < toks.size()) {
        if (blocked[i]) {
            ++i;
            continue;
        }
        // Longest contiguous unblocked window that stays inside one phrase.
        std::size_t limit = i + 1;
        while (limit < toks.size() && limit - i < max_len && !blocked[limit] &&
               same_phrase(question, toks[limit - 1], toks[limit])) {
            ++limit;
        }
        bool found = false;
        for (auto len = limit - i; len >= 2; --len) {
            std::vector<std::string> words;
            for (auto k = i; k < i + len; ++k) {
                words.push_back(toks[k].text);
            }
            auto df = index.doc_count(words);
            if (df > 0 && index.term_probability(words) < p_thr) {
                spans.push_back(make_span(std::span(toks).subspan(i, len),
                                          SpanKind::FrozenPhrase, SpanSource::Heuristic));
                i += len;
                found = true;
                break;
            }
        }
        if (!found) {
            ++i;
        }
    }
    return spans;
}

NGramSet build_ngram_set(std::string question_id, std::span<const TermSpan> entities,
                         std::span<const TermSpan> frozen, std::size_t max_n)
{
    NGramSet set;
    set.question_id = std::move(question_id);
    set.spans.assign(entities.begin(), entities.end());
    set.spans.insert(set.spans.end(), frozen.begin(), frozen.end());

    for (std::size_t s = 0; s < set.spans.size(); ++s) {
        const auto& span = set.spans[s];
        const auto longest = span.kind == SpanKind::Entity ? max_n : std::size_t{1};
        std::set<std::string> seen;
        for (std::size_t n = 1; n <= longest && n <= span.tokens.size(); ++n) {
            for (std::size_t start = 0; start + n <= span.tokens.size(); ++start) {
                NGramEntry entry;
                for (auto k = start; k < start + n; ++k) {
                    entry.tokens.push_back(span.tokens[k].text);
                }
                entry.key = ngram_key(entry.tokens);
                if (!seen.insert(entry.key).second) {
                    continue;
                }
                entry.span_index = s;
                entry.char_begin = span.tokens[start].begin;
                entry.kind = span.kind;
                set.entries.push_back(std::move(entry));
            }
        }
    }
    return set;
}

NGramSet extract_ngram_set(std::string question_id, std::string_view question, const DfIndex& index,
                           double p_thr, const std::optional<QuestionAnnotations>& annotations)
{
    std::optional<std::vector<CharRange>> entity_ann;
    std::optional<std::vector<CharRange>> frozen_ann;
    if (annotations) {
        entity_ann = annotations->entities;
        frozen_ann = annotations->frozen_phrases;
    }
    auto entities = extract_entities(question, entity_ann);
    auto frozen = extract_frozen_phrases(question, index, entities, p_thr, frozen_ann);
    return build_ngram_set(std::move(question_id), entities, frozen,
                           std::min<std::size_t>(3, index.max_n()));
}

}  // namespace hopqpp
