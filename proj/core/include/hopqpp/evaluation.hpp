#pragma once

#include "hopqpp/qpp_estimator.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace hopqpp {

/// Per-hop ranked document lists for one question plus its supporting documents.
struct RetrievalRun {
    std::string question_id;
    std::vector<std::vector<std::string>> hops;
    std::vector<std::string> gold_support;

    /// Throws Validation on an empty gold set or a duplicate within one hop.
    void validate() const;
};

/// Round-robin merge across hops; later duplicates are dropped.
std::vector<std::string> interleave(const RetrievalRun& run);
/// Same, after truncating every hop to its top k documents.
std::vector<std::string> interleave(const RetrievalRun& run, std::size_t k);

double average_precision(std::span<const std::string> ranked, std::span<const std::string> gold);

struct Coefficient {
    double value = 0.0;
    double p_value = 1.0;
};

struct Correlations {
    Coefficient pearson;
    Coefficient spearman;
    Coefficient kendall;
};

/// Pearson, Spearman (Pearson on mid-ranks) and Kendall tau-b. p-values are
/// two-sided: a t approximation for Pearson and Spearman, a tie-corrected normal
/// approximation for Kendall. Throws InvalidArgument when the sizes differ or
/// n < 3 and UndefinedCoefficient when either input is constant.
Correlations correlations(std::span<const double> x, std::span<const double> y);

Coefficient pearson(std::span<const double> x, std::span<const double> y);
Coefficient spearman(std::span<const double> x, std::span<const double> y);
/// O(n log n) tau-b (Knight's algorithm).
Coefficient kendall_tau_b(std::span<const double> x, std::span<const double> y);

/// 1-based mid-ranks (ties share their average rank).
std::vector<double> average_ranks(std::span<const double> values);

/// Documents a retriever must hand over before every gold document is covered,
/// counting positions in the top-k interleaving; (hops * k) + 1 when some gold
/// document never appears.
std::size_t retrieval_cost(const RetrievalRun& run, std::size_t k);

struct PairwiseResult {
    double accuracy = 0.0;
    std::size_t pairs = 0;
};

/// Fraction of question pairs with different actual cost whose predicted scores
/// order them correctly (a lower score predicts a costlier question). Predicted
/// ties earn half credit. Throws Alignment when the id sets differ.
PairwiseResult pairwise_accuracy(const std::map<std::string, double>& predicted,
                                 std::span<const RetrievalRun> runs, std::size_t k);

struct PemPr {
    double pem = 0.0;
    double pr = 0.0;
};

/// Paragraph exact match and paragraph recall over the union of each hop's top k.
PemPr pem_pr(std::span<const RetrievalRun> runs, std::size_t k);

struct AnswerScore {
    int em = 0;
    double f1 = 0.0;
};

/// Lowercase, drop punctuation and the articles a/an/the, collapse whitespace.
std::string normalize_answer(std::string_view text);
AnswerScore answer_em_f1(std::string_view predicted, std::string_view gold);

enum class DifficultyClass { Easy, Hard, ExtraHard };

std::string_view to_string(DifficultyClass c) noexcept;
/// Accepts easy, hard and extra_hard.
DifficultyClass parse_difficulty_class(std::string_view text);

struct ScoredQuestion {
    std::string question_id;
    double score = 0.0;
};

struct ClassAssignment {
    std::string question_id;
    DifficultyClass difficulty = DifficultyClass::Easy;
};

/// Lowest scores are hardest: positions [0, ceil(n/4)) are ExtraHard,
/// [ceil(n/4), ceil(n/2)) Hard, the rest Easy. Ties are ordered by question id.
/// The result is in that sorted order. Throws InvalidArgument for n < 4.
std::vector<ClassAssignment> bucket_by_quartile(std::span<const ScoredQuestion> scores);
std::vector<ClassAssignment> bucket_by_quartile(std::span<const DifficultyEstimate> estimates);

}  // namespace hopqpp
