#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace hopqpp {

struct Document {
    std::string doc_id;
    std::string title;
    std::string text;
};

/// Title tokens followed by text tokens; this is the stream that gets indexed.
std::vector<std::string> document_tokens(const Document& doc);

struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept
    {
        return std::hash<std::string_view>{}(s);
    }
};

using CountTable = std::unordered_map<std::string, std::uint64_t, StringHash, std::equal_to<>>;
using KeySet = std::unordered_set<std::string, StringHash, std::equal_to<>>;

/// Corpus-wide n-gram statistics: document frequency for every contiguous n-gram
/// up to max_n and collection frequency for every unigram. Immutable once built,
/// so a single instance can be shared by concurrent readers.
class DfIndex {
  public:
    DfIndex() = default;

    [[nodiscard]] std::uint64_t num_docs() const noexcept { return m_num_docs; }
    [[nodiscard]] std::size_t max_n() const noexcept { return m_max_n; }
    [[nodiscard]] std::uint64_t total_tokens() const noexcept { return m_total_tokens; }

    /// Number of documents containing the n-gram; 0 when absent.
    /// Throws InvalidArgument when the n-gram is empty or longer than max_n.
    [[nodiscard]] std::uint64_t doc_count(std::span<const std::string> ngram) const;
    /// Same as doc_count, keyed by the canonical space-joined form.
    [[nodiscard]] std::uint64_t doc_count(std::string_view key) const;

    /// Total occurrences of a unigram across the collection; 0 when absent.
    [[nodiscard]] std::uint64_t collection_count(std::string_view unigram) const;

    /// df / num_docs. Throws EmptyIndex when the index holds no documents.
    [[nodiscard]] double term_probability(std::span<const std::string> ngram) const;
    [[nodiscard]] double term_probability(std::string_view key) const;

    [[nodiscard]] const CountTable& df_table() const noexcept { return m_df; }
    [[nodiscard]] const CountTable& cf_table() const noexcept { return m_cf; }

    bool operator==(const DfIndex& other) const = default;

  private:
    friend class IndexBuilder;
    friend DfIndex load_index(const std::filesystem::path& path);

    void check_length(std::size_t n) const;

    std::uint64_t m_num_docs = 0;
    std::size_t m_max_n = 3;
    std::uint64_t m_total_tokens = 0;
    CountTable m_df;
    CountTable m_cf;
};

/// Accumulates counts document by document. Partial builders over disjoint
/// partitions of a corpus can be merged; the result does not depend on the
/// order in which documents or partitions arrive.
class IndexBuilder {
  public:
    explicit IndexBuilder(std::size_t max_n = 3);

    /// Throws Ingest on a duplicate doc_id or a document with no tokens.
    void add(const Document& doc);
    void merge(IndexBuilder&& other);

    [[nodiscard]] std::size_t size() const noexcept { return m_ids.size(); }
    [[nodiscard]] DfIndex finish() &&;

  private:
    std::size_t m_max_n;
    KeySet m_ids;
    DfIndex m_index;
};

/// Builds an index over docs, splitting the work across `threads` partitions.
DfIndex build_index(std::span<const Document> docs, std::size_t max_n = 3, unsigned threads = 1);

/// Set of every contiguous n-gram key (n <= max_n) of a token sequence.
KeySet ngram_set(std::span<const std::string> tokens, std::size_t max_n);

inline constexpr std::uint32_t kIndexFormatVersion = 1;

void save_index(const DfIndex& index, const std::filesystem::path& path);
/// Throws Load on I/O failure, bad magic, version mismatch, truncation or checksum mismatch.
DfIndex load_index(const std::filesystem::path& path);

}  // namespace hopqpp
