#include "hopqpp/retrieval_path.hpp"

#include "hopqpp/error.hpp"
#include "hopqpp/tokenizer.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace hopqpp {

namespace {

constexpr std::array<std::string_view, 11> kCues = {
    "both", "same", "different", "or", "more", "first", "older", "younger", "longer", "earlier", "later",
};

std::size_t key_length(std::string_view key)
{
    return static_cast<std::size_t>(std::count(key.begin(), key.end(), ' ')) + 1;
}

/// True when candidate beats the current best under (probability asc, length desc, key asc).
bool better(const Witness& candidate, std::size_t cand_len, const Witness& best, std::size_t best_len)
{
    if (candidate.probability != best.probability) {
        return candidate.probability < best.probability;
    }
    if (cand_len != best_len) {
        return cand_len > best_len;
    }
    return candidate.key < best.key;
}

bool contains_sequence(std::span<const std::string> haystack, std::span<const std::string> needle)
{
    if (needle.empty() || needle.size() > haystack.size()) {
        return false;
    }
    return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
           haystack.end();
}

}  // namespace

std::string_view to_string(PathType type) noexcept
{
    switch (type) {
    case PathType::Bridge: return "bridge";
    case PathType::Comparison: return "comparison";
    case PathType::Mixed: return "mixed";
    case PathType::NoPath: return "none";
    }
    return "none";
}

PathType parse_path_type(std::string_view text)
{
    if (text == "bridge") return PathType::Bridge;
    if (text == "comparison") return PathType::Comparison;
    if (text == "mixed") return PathType::Mixed;
    if (text == "none") return PathType::NoPath;
    throw Error(ErrorKind::Validation, "unknown path type: " + std::string(text));
}

std::string_view to_string(Edge edge) noexcept
{
    switch (edge) {
    case Edge::QuestionDoc1: return "q-d1";
    case Edge::QuestionDoc2: return "q-d2";
    case Edge::Doc1Doc2: return "d1-d2";
    }
    return "?";
}

PathGraph PathGraph::from_edges(bool q_d1, bool q_d2, bool d1_d2)
{
    PathGraph g;
    const std::array<bool, 3> present = {q_d1, q_d2, d1_d2};
    for (std::size_t i = 0; i < 3; ++i) {
        if (present[i]) {
            g.witnesses[i] = Witness{};
        }
    }
    return g;
}

std::optional<Witness> related(const KeySet& a, const KeySet& b, const DfIndex& index, double p_thr)
{
    if (!(p_thr > 0.0 && p_thr <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "p_thr must lie in (0, 1]");
    }
    if (index.num_docs() == 0) {
        throw Error(ErrorKind::EmptyIndex, "relatedness needs a non-empty index");
    }
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;

    std::optional<Witness> best;
    std::size_t best_len = 0;
    for (const auto& key : small) {
        auto len = key_length(key);
        if (len > index.max_n() || !large.contains(key)) {
            continue;
        }
        Witness w{key, index.doc_count(key), 0.0};
        w.probability = static_cast<double>(w.df) / static_cast<double>(index.num_docs());
        if (!(w.probability < p_thr)) {
            continue;
        }
        if (!best || better(w, len, *best, best_len)) {
            best = std::move(w);
            best_len = len;
        }
    }
    return best;
}

std::optional<Witness> related(std::span<const std::string> a, std::span<const std::string> b,
                               const DfIndex& index, double p_thr)
{
    const auto n = std::min<std::size_t>(3, index.max_n());
    return related(ngram_set(a, n), ngram_set(b, n), index, p_thr);
}

PathGraph build_path_graph(const NGramSet& ngrams, std::span<const std::string> question_tokens,
                           const Document& d1, const Document& d2, const DfIndex& index,
                           double p_thr)
{
    const auto n = std::min<std::size_t>(3, index.max_n());
    auto doc1 = ngram_set(document_tokens(d1), n);
    auto doc2 = ngram_set(document_tokens(d2), n);

    KeySet salient;
    for (auto& key : ngrams.unique_keys()) {
        salient.insert(std::move(key));
    }
    KeySet unigrams(question_tokens.begin(), question_tokens.end());

    auto question_edge = [&](const KeySet& doc) {
        auto w = related(salient, doc, index, p_thr);
        if (!w) {
            w = related(unigrams, doc, index, p_thr);
        }
        return w;
    };

    PathGraph g;
    g.witnesses[static_cast<std::size_t>(Edge::QuestionDoc1)] = question_edge(doc1);
    g.witnesses[static_cast<std::size_t>(Edge::QuestionDoc2)] = question_edge(doc2);
    g.witnesses[static_cast<std::size_t>(Edge::Doc1Doc2)] = related(doc1, doc2, index, p_thr);
    return g;
}

PathType classify_path(const PathGraph& graph) noexcept
{
    const bool q1 = graph.has(Edge::QuestionDoc1);
    const bool q2 = graph.has(Edge::QuestionDoc2);
    const bool dd = graph.has(Edge::Doc1Doc2);
    if (q1 && q2 && dd) {
        return PathType::Mixed;
    }
    if (q1 && q2) {
        return PathType::Comparison;
    }
    if ((q1 != q2) && dd) {
        return PathType::Bridge;
    }
    return PathType::NoPath;
}

std::span<const std::string_view> comparison_cues() noexcept
{
    return kCues;
}

PathType predict_path_type(std::string_view question, std::span<const TermSpan> entities,
                           std::optional<std::string_view> external_label)
{
    if (external_label) {
        auto type = parse_path_type(*external_label);
        if (type != PathType::Bridge && type != PathType::Comparison) {
            throw Error(ErrorKind::Validation,
                        "external path label must be bridge or comparison, got " +
                            std::string(*external_label));
        }
        return type;
    }
    std::set<std::string> distinct;
    for (const auto& e : entities) {
        distinct.insert(ngram_key(e.words()));
    }
    if (distinct.size() < 2) {
        return PathType::Bridge;
    }
    for (const auto& tok : tokenize(question)) {
        if (std::find(kCues.begin(), kCues.end(), tok) != kCues.end()) {
            return PathType::Comparison;
        }
    }
    return PathType::Bridge;
}

bool answer_in_single_document(std::string_view answer, const Document& d1, const Document& d2,
                               const PathGraph& graph)
{
    auto needle = tokenize(answer);
    if (needle.empty()) {
        return false;
    }
    const bool in1 = contains_sequence(document_tokens(d1), needle);
    const bool in2 = contains_sequence(document_tokens(d2), needle);
    if (in1 == in2) {
        return false;
    }
    return in1 ? graph.has(Edge::QuestionDoc1) : graph.has(Edge::QuestionDoc2);
}

}  // namespace hopqpp
