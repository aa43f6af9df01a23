#pragma once

#include "hopqpp/corpus_index.hpp"
#include "hopqpp/term_extraction.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hopqpp {

enum class PathType { Bridge, Comparison, Mixed, NoPath };

std::string_view to_string(PathType type) noexcept;
/// Accepts "bridge", "comparison", "mixed" and "none". Throws Validation otherwise.
PathType parse_path_type(std::string_view text);

inline constexpr double kDefaultPThr = 0.001;

/// The common n-gram that established relatedness between two texts.
struct Witness {
    std::string key;
    std::uint64_t df = 0;
    double probability = 0.0;

    bool operator==(const Witness&) const = default;
};

enum class Edge : std::size_t { QuestionDoc1 = 0, QuestionDoc2 = 1, Doc1Doc2 = 2 };

std::string_view to_string(Edge edge) noexcept;

/// Relatedness graph over {q, d1, d2}. An edge is present exactly when it has a witness.
struct PathGraph {
    std::array<std::optional<Witness>, 3> witnesses;

    [[nodiscard]] bool has(Edge e) const noexcept
    {
        return witnesses[static_cast<std::size_t>(e)].has_value();
    }
    [[nodiscard]] const std::optional<Witness>& witness(Edge e) const noexcept
    {
        return witnesses[static_cast<std::size_t>(e)];
    }

    /// Builds a graph with placeholder witnesses; used to enumerate edge subsets.
    static PathGraph from_edges(bool q_d1, bool q_d2, bool d1_d2);
};

/// Lowest-probability n-gram (n <= 3, contiguous in both) shared by a and b whose
/// probability is strictly below p_thr. Ties prefer the longer n-gram, then the
/// lexicographically smaller key.
std::optional<Witness> related(std::span<const std::string> a, std::span<const std::string> b,
                               const DfIndex& index, double p_thr);

/// Same selection over precomputed n-gram key sets.
std::optional<Witness> related(const KeySet& a, const KeySet& b, const DfIndex& index, double p_thr);

/// q-d edges look for NG_q members first and fall back to question unigrams;
/// the d1-d2 edge considers every shared n-gram.
PathGraph build_path_graph(const NGramSet& ngrams, std::span<const std::string> question_tokens,
                           const Document& d1, const Document& d2, const DfIndex& index,
                           double p_thr);

PathType classify_path(const PathGraph& graph) noexcept;

/// Cue words that make the heuristic predictor answer Comparison when the
/// question also names two or more distinct entities. Versioned; changing the
/// list changes results.
inline constexpr std::string_view kComparisonCueLexiconVersion = "cues-v1";
std::span<const std::string_view> comparison_cues() noexcept;

/// Pre-retrieval path type: the external label when given, otherwise the cue
/// heuristic. Only ever returns Bridge or Comparison.
PathType predict_path_type(std::string_view question, std::span<const TermSpan> entities,
                           std::optional<std::string_view> external_label = {});

/// True when the answer occurs in exactly one supporting document and that
/// document has a question edge: the question likely needs only one hop.
bool answer_in_single_document(std::string_view answer, const Document& d1, const Document& d2,
                               const PathGraph& graph);

}  // namespace hopqpp
