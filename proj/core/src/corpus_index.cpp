#include "hopqpp/corpus_index.hpp"

#include "hopqpp/digest.hpp"
#include "hopqpp/error.hpp"
#include "hopqpp/tokenizer.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <thread>

namespace hopqpp {

namespace {

std::size_t key_length(std::string_view key)
{
    if (key.empty()) {
        return 0;
    }
    return static_cast<std::size_t>(std::count(key.begin(), key.end(), ' ')) + 1;
}

std::uint64_t lookup(const CountTable& table, std::string_view key)
{
    auto it = table.find(key);
    return it == table.end() ? 0 : it->second;
}

constexpr std::array<char, 8> kMagic = {'H', 'Q', 'P', 'P', 'D', 'F', 'I', 'X'};

class Writer {
  public:
    void u32(std::uint32_t v) { put(v, 4); }
    void u64(std::uint64_t v) { put(v, 8); }
    void bytes(std::string_view s) { m_buf.append(s); }
    [[nodiscard]] const std::string& buffer() const noexcept { return m_buf; }

  private:
    void put(std::uint64_t v, int width)
    {
        for (int i = 0; i < width; ++i) {
            m_buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFFU));
        }
    }
    std::string m_buf;
};

class Reader {
  public:
    explicit Reader(std::string_view buf) : m_buf(buf) {}

    std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
    std::uint64_t u64() { return get(8); }
    std::string_view bytes(std::size_t n)
    {
        need(n);
        auto out = m_buf.substr(m_pos, n);
        m_pos += n;
        return out;
    }
    [[nodiscard]] std::size_t position() const noexcept { return m_pos; }
    [[nodiscard]] std::size_t remaining() const noexcept { return m_buf.size() - m_pos; }

  private:
    void need(std::size_t n) const
    {
        if (remaining() < n) {
            throw Error(ErrorKind::Load, "index file truncated at byte " + std::to_string(m_pos));
        }
    }
    std::uint64_t get(int width)
    {
        need(static_cast<std::size_t>(width));
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(m_buf[m_pos + i])) << (8 * i);
        }
        m_pos += static_cast<std::size_t>(width);
        return v;
    }
    std::string_view m_buf;
    std::size_t m_pos = 0;
};

void write_table(Writer& w, const CountTable& table)
{
    std::vector<const CountTable::value_type*> entries;
    entries.reserve(table.size());
    for (const auto& kv : table) {
        entries.push_back(&kv);
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto* a, const auto* b) { return a->first < b->first; });
    w.u64(entries.size());
    for (const auto* kv : entries) {
        w.u32(static_cast<std::uint32_t>(kv->first.size()));
        w.bytes(kv->first);
        w.u64(kv->second);
    }
}

CountTable read_table(Reader& r)
{
    auto count = r.u64();
    // Each entry takes at least 12 bytes; reject counts the file cannot hold.
    if (count > r.remaining() / 12) {
        throw Error(ErrorKind::Load, "index file truncated: table claims " + std::to_string(count) +
                                         " entries");
    }
    CountTable table;
    table.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        auto len = r.u32();
        std::string key(r.bytes(len));
        auto value = r.u64();
        if (!table.emplace(std::move(key), value).second) {
            throw Error(ErrorKind::Load, "index file corrupt: duplicate key");
        }
    }
    return table;
}

}  // namespace

std::vector<std::string> document_tokens(const Document& doc)
{
    auto tokens = tokenize(doc.title);
    auto body = tokenize(doc.text);
    tokens.insert(tokens.end(), std::make_move_iterator(body.begin()),
                  std::make_move_iterator(body.end()));
    return tokens;
}

KeySet ngram_set(std::span<const std::string> tokens, std::size_t max_n)
{
    KeySet keys;
    for (auto& key : contiguous_ngrams(tokens, max_n)) {
        keys.insert(std::move(key));
    }
    return keys;
}

void DfIndex::check_length(std::size_t n) const
{
    if (n == 0 || n > m_max_n) {
        throw Error(ErrorKind::InvalidArgument, "n-gram length " + std::to_string(n) +
                                                    " outside [1, " + std::to_string(m_max_n) + "]");
    }
}

std::uint64_t DfIndex::doc_count(std::span<const std::string> ngram) const
{
    check_length(ngram.size());
    return lookup(m_df, ngram_key(ngram));
}

std::uint64_t DfIndex::doc_count(std::string_view key) const
{
    check_length(key_length(key));
    return lookup(m_df, key);
}

std::uint64_t DfIndex::collection_count(std::string_view unigram) const
{
    return lookup(m_cf, unigram);
}

double DfIndex::term_probability(std::span<const std::string> ngram) const
{
    return term_probability(ngram_key(ngram));
}

double DfIndex::term_probability(std::string_view key) const
{
    if (m_num_docs == 0) {
        throw Error(ErrorKind::EmptyIndex, "term probability requested from an empty index");
    }
    return static_cast<double>(doc_count(key)) / static_cast<double>(m_num_docs);
}

IndexBuilder::IndexBuilder(std::size_t max_n) : m_max_n(max_n)
{
    if (max_n == 0) {
        throw Error(ErrorKind::InvalidArgument, "max_n must be at least 1");
    }
    m_index.m_max_n = max_n;
}

void IndexBuilder::add(const Document& doc)
{
    if (m_ids.contains(doc.doc_id)) {
        throw Error(ErrorKind::Ingest, "duplicate doc_id: " + doc.doc_id);
    }
    auto tokens = document_tokens(doc);
    if (tokens.empty()) {
        throw Error(ErrorKind::Ingest, "document has no tokens: " + doc.doc_id);
    }
    m_ids.insert(doc.doc_id);
    for (const auto& key : ngram_set(tokens, m_max_n)) {
        ++m_index.m_df[key];
    }
    for (const auto& tok : tokens) {
        ++m_index.m_cf[tok];
    }
    m_index.m_total_tokens += tokens.size();
    ++m_index.m_num_docs;
}

void IndexBuilder::merge(IndexBuilder&& other)
{
    if (other.m_max_n != m_max_n) {
        throw Error(ErrorKind::InvalidArgument, "cannot merge builders with different max_n");
    }
    for (const auto& id : other.m_ids) {
        if (m_ids.contains(id)) {
            throw Error(ErrorKind::Ingest, "duplicate doc_id: " + id);
        }
    }
    m_ids.merge(other.m_ids);
    for (const auto& [key, count] : other.m_index.m_df) {
        m_index.m_df[key] += count;
    }
    for (const auto& [key, count] : other.m_index.m_cf) {
        m_index.m_cf[key] += count;
    }
    m_index.m_total_tokens += other.m_index.m_total_tokens;
    m_index.m_num_docs += other.m_index.m_num_docs;
    other = IndexBuilder(m_max_n);
}

DfIndex IndexBuilder::finish() &&
{
    return std::move(m_index);
}

DfIndex build_index(std::span<const Document> docs, std::size_t max_n, unsigned threads)
{
    threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(docs.size() / 1024 + 1)));
    if (threads == 1) {
        IndexBuilder builder(max_n);
        for (const auto& doc : docs) {
            builder.add(doc);
        }
        return std::move(builder).finish();
    }

    std::vector<IndexBuilder> parts(threads, IndexBuilder(max_n));
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> workers;
    auto chunk = (docs.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        workers.emplace_back([&, t] {
            try {
                auto begin = std::min(docs.size(), t * chunk);
                auto end = std::min(docs.size(), begin + chunk);
                for (auto i = begin; i < end; ++i) {
                    parts[t].add(docs[i]);
                }
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& w : workers) {
        w.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    for (unsigned t = 1; t < threads; ++t) {
        parts[0].merge(std::move(parts[t]));
    }
    return std::move(parts[0]).finish();
}

void save_index(const DfIndex& index, const std::filesystem::path& path)
{
    Writer w;
    w.bytes(std::string_view(kMagic.data(), kMagic.size()));
    w.u32(kIndexFormatVersion);
    w.u32(static_cast<std::uint32_t>(index.max_n()));
    w.u64(index.num_docs());
    w.u64(index.total_tokens());
    write_table(w, index.df_table());
    write_table(w, index.cf_table());
    Fnv1a64 digest;
    digest.update(w.buffer());
    w.u64(digest.value());

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot open index file for writing: " + path.string());
    }
    out.write(w.buffer().data(), static_cast<std::streamsize>(w.buffer().size()));
    if (!out) {
        throw Error(ErrorKind::Io, "failed writing index file: " + path.string());
    }
}

DfIndex load_index(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Load, "cannot open index file: " + path.string());
    }
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    Reader r(buf);
    auto magic = r.bytes(kMagic.size());
    if (std::memcmp(magic.data(), kMagic.data(), kMagic.size()) != 0) {
        throw Error(ErrorKind::Load, "not an index file (bad magic): " + path.string());
    }
    auto version = r.u32();
    if (version != kIndexFormatVersion) {
        throw Error(ErrorKind::Load, "unsupported index format version " + std::to_string(version) +
                                         " (expected " + std::to_string(kIndexFormatVersion) + ")");
    }
    DfIndex index;
    index.m_max_n = r.u32();
    index.m_num_docs = r.u64();
    index.m_total_tokens = r.u64();
    index.m_df = read_table(r);
    index.m_cf = read_table(r);
    auto payload_end = r.position();
    auto stored = r.u64();
    if (r.remaining() != 0) {
        throw Error(ErrorKind::Load, "index file has trailing bytes");
    }
    Fnv1a64 digest;
    digest.update(std::string_view(buf).substr(0, payload_end));
    if (digest.value() != stored) {
        throw Error(ErrorKind::Load, "index file checksum mismatch");
    }
    if (index.m_max_n == 0) {
        throw Error(ErrorKind::Load, "index file corrupt: max_n is 0");
    }
    return index;
}

}  // namespace hopqpp
