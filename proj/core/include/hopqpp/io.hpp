#pragma once

#include "hopqpp/adaptive_budget.hpp"
#include "hopqpp/corpus_index.hpp"
#include "hopqpp/dataset.hpp"
#include "hopqpp/evaluation.hpp"
#include "hopqpp/qpp_estimator.hpp"
#include "hopqpp/retrieval_path.hpp"
#include "hopqpp/term_extraction.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hopqpp {

// JSON-lines readers throw Schema errors of the form "<file>:<line>: <reason>"
// and Io errors when a file cannot be opened.

/// {"id", "title", "text"} per line.
void for_each_document(const std::filesystem::path& path,
                       const std::function<void(Document&&)>& visit);
std::vector<Document> read_corpus(const std::filesystem::path& path);
void write_corpus(std::ostream& out, const std::vector<Document>& docs);

/// {"question_id", "question", "answer"?, "gold_support"?, "type"?, "level"?} per line.
std::vector<QuestionRecord> read_questions(const std::filesystem::path& path);
void write_questions(std::ostream& out, const std::vector<QuestionRecord>& questions);

/// {"question_id", "spans": [{"start", "end", "kind"}]} per line.
std::map<std::string, QuestionAnnotations> read_annotations(const std::filesystem::path& path);

/// {"question_id", "type": "bridge" | "comparison"} per line.
std::map<std::string, PathType> read_path_labels(const std::filesystem::path& path);

/// {"question_id", "hops": [[doc_id, ...], ...], "gold": [doc_id, ...]} per line.
std::vector<RetrievalRun> read_runs(const std::filesystem::path& path);
void write_runs(std::ostream& out, const std::vector<RetrievalRun>& runs);

struct ScoreRow {
    std::string question_id;
    Method method = Method::MultHP;
    std::optional<PathType> path_type;
    double score = 0.0;
    std::vector<ChosenNgram> chosen;
};

std::vector<ScoreRow> read_scores(const std::filesystem::path& path);
void write_score(std::ostream& out, const ScoreRow& row);

std::vector<ClassAssignment> read_classes(const std::filesystem::path& path);
void write_class(std::ostream& out, const ClassAssignment& row);

void write_plan_row(std::ostream& out, const PlannedQuestion& row);

/// {"easy", "hard", "extra_hard", "base_k"}; missing keys keep their defaults.
BudgetPolicy read_policy(const std::filesystem::path& path);

struct OraclePathRow {
    std::string question_id;
    PathType path_type = PathType::NoPath;
    PathGraph graph;
    std::optional<bool> answer_in_single_doc;
};

void write_oracle_path(std::ostream& out, const OraclePathRow& row);
/// Reads the path_type column of oracle output (or of external predictions).
std::map<std::string, PathType> read_oracle_path_types(const std::filesystem::path& path);

void write_ngram_set(std::ostream& out, const NGramSet& set);

/// Writes a double so that reading it back yields the same value and the text
/// is identical across runs.
std::string format_double(double value);

}  // namespace hopqpp
