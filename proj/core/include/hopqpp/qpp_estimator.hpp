#pragma once

#include "hopqpp/corpus_index.hpp"
#include "hopqpp/retrieval_path.hpp"
#include "hopqpp/term_extraction.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hopqpp {

struct EstimatorConfig {
    /// Stand-in for the unobservable second-hop probability.
    double p_hop2 = 0.125;
    /// Score given to questions with no usable evidence.
    double epsilon = 1e-12;
    double p_thr = kDefaultPThr;

    /// Throws InvalidArgument unless every field lies in (0, 1] and epsilon < p_hop2.
    void validate() const;
};

/// 1 / df, or nothing when df is 0.
std::optional<double> specificity(std::uint64_t df) noexcept;
std::optional<double> specificity(const DfIndex& index, std::span<const std::string> ngram);

/// An NG_q member with its corpus document count.
struct ScoredNgram {
    std::string key;
    std::uint64_t df = 0;
    std::size_t span_index = 0;
    std::size_t length = 1;
    std::size_t char_begin = 0;
    SpanKind kind = SpanKind::Entity;
};

/// Looks up every NG_q entry that the index can answer, dropping df = 0 ones.
/// The result is ordered most specific first; ties go to the longer n-gram,
/// then the earlier position in the question.
std::vector<ScoredNgram> score_ngrams(const NGramSet& ngrams, const DfIndex& index);

struct ChosenNgram {
    std::string key;
    std::uint64_t df = 0;

    bool operator==(const ChosenNgram&) const = default;
};

struct DifficultyEstimate {
    std::string question_id;
    /// Type the question was scored as.
    PathType requested_type = PathType::NoPath;
    /// Type whose formula produced p_ret; NoPath when no n-gram had evidence.
    PathType path_type = PathType::NoPath;
    double p_ret = 0.0;
    std::vector<ChosenNgram> chosen;
    bool p_hop2_used = false;
    /// Comparison scoring fell back to the bridge formula (fewer than two spans).
    bool comparison_fallback = false;
    /// The n-gram pair would differ if frozen-phrase unigrams were excluded.
    bool frozen_choice_changed = false;
};

// Candidate-level estimators. `candidates` must be ordered as score_ngrams returns them.
DifficultyEstimate estimate_bridge(std::string question_id, std::span<const ScoredNgram> candidates,
                                   const EstimatorConfig& cfg);
DifficultyEstimate estimate_comparison(std::string question_id,
                                       std::span<const ScoredNgram> candidates,
                                       const EstimatorConfig& cfg);
DifficultyEstimate estimate_mixed(std::string question_id, std::span<const ScoredNgram> candidates,
                                  const EstimatorConfig& cfg);

DifficultyEstimate estimate_bridge(const NGramSet& ngrams, const DfIndex& index,
                                   const EstimatorConfig& cfg);
DifficultyEstimate estimate_comparison(const NGramSet& ngrams, const DfIndex& index,
                                       const EstimatorConfig& cfg);
DifficultyEstimate estimate_mixed(const NGramSet& ngrams, const DfIndex& index,
                                  const EstimatorConfig& cfg);

/// Dispatches on the path type; NoPath scores epsilon.
DifficultyEstimate estimate(const NGramSet& ngrams, PathType type, const DfIndex& index,
                            const EstimatorConfig& cfg);

enum class Aggregation { Max, Avg };

/// ln(num_docs / df) per distinct question token; tokens with df = 0 score 0
/// but still count toward the average.
double baseline_idf(std::span<const std::string> tokens, const DfIndex& index, Aggregation agg);

/// Simplified clarity score: KL divergence (base 2) of the maximum-likelihood
/// query model from the collection model, over terms seen in the collection.
double baseline_scs(std::span<const std::string> tokens, const DfIndex& index);

/// (1 + ln cf) * ln(1 + num_docs / df) per distinct question token.
double baseline_scq(std::span<const std::string> tokens, const DfIndex& index, Aggregation agg);

enum class Method { MultHP, MaxIdf, AvgIdf, Scs, MaxScq, AvgScq };

std::string_view to_string(Method method) noexcept;
/// Accepts multhp, max_idf, avg_idf, scs, max_scq, avg_scq.
Method parse_method(std::string_view text);

}  // namespace hopqpp
