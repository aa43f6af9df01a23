#pragma once

#include "hopqpp/corpus_index.hpp"
#include "hopqpp/retrieval_path.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hopqpp {

struct QuestionRecord {
    std::string question_id;
    std::string question;
    std::optional<std::string> answer;
    std::optional<std::vector<std::string>> gold_support;
    /// Dataset tag; only Bridge or Comparison.
    std::optional<PathType> dataset_type;
    /// easy, medium or hard.
    std::optional<std::string> dataset_level;
};

/// How much article text becomes a corpus document.
enum class ImportMode { FirstParagraph, FullText };

std::string_view to_string(ImportMode mode) noexcept;
ImportMode parse_import_mode(std::string_view text);

struct ImportStats {
    std::size_t records = 0;
    std::size_t skipped_records = 0;
    std::size_t documents = 0;
    std::size_t title_collisions = 0;
    std::size_t empty_documents = 0;
};

struct HotpotImport {
    std::vector<Document> corpus;
    std::vector<QuestionRecord> questions;
    ImportStats stats;
};

/// Reads a HotpotQA-schema JSON array. Every context paragraph becomes a
/// document keyed by its title (first occurrence wins); supporting-fact titles
/// become the gold set. Records missing required fields are skipped and counted.
/// Throws Schema with the line and column when the file is not valid JSON.
HotpotImport import_hotpotqa(const std::filesystem::path& path, ImportMode mode);
HotpotImport import_hotpotqa_text(const std::string& json_text, ImportMode mode);

/// Reads a processed Wikipedia dump (JSON lines with "title" and "text", where
/// text is a string, a list of sentences, or a list of paragraphs of sentences).
std::vector<Document> import_wikipedia(const std::filesystem::path& path, ImportMode mode,
                                       ImportStats* stats = nullptr);

}  // namespace hopqpp
