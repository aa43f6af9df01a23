#include "../support/stub_index.hpp"
#include "../support/temp_dir.hpp"

#include "hopqpp/corpus_index.hpp"
#include "hopqpp/error.hpp"
#include "hopqpp/tokenizer.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>

using namespace hopqpp;
using V = std::vector<std::string>;

namespace {

DfIndex index_of(std::vector<Document> docs, std::size_t max_n = 3)
{
    return build_index(docs, max_n);
}

ErrorKind kind_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no hopqpp::Error thrown";
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(CorpusIndex, PresenceCounting)
{
    auto idx = index_of({{"1", "", "River Phoenix"}, {"2", "", "phoenix arizona phoenix"}});
    EXPECT_EQ(idx.doc_count("phoenix"), 2u);
    EXPECT_EQ(idx.collection_count("phoenix"), 3u);
}

TEST(CorpusIndex, CfDfAndTotalTokens)
{
    auto idx = index_of({{"1", "", "a b a"}});
    EXPECT_EQ(idx.collection_count("a"), 2u);
    EXPECT_EQ(idx.doc_count("a"), 1u);
    EXPECT_EQ(idx.total_tokens(), 3u);
}

TEST(CorpusIndex, ContiguousBigrams)
{
    auto idx = index_of({{"1", "", "x y z"}, {"2", "", "x q"}});
    EXPECT_EQ(idx.doc_count("x y"), 1u);
    EXPECT_EQ(idx.doc_count("x"), 2u);
    EXPECT_EQ(idx.doc_count("x z"), 0u);
    EXPECT_EQ(idx.doc_count("x y z"), 1u);
}

TEST(CorpusIndex, TitleTokensArePrepended)
{
    auto idx = index_of({{"1", "Little Nikita", "is a 1988 film"}});
    EXPECT_EQ(idx.doc_count("little nikita"), 1u);
    EXPECT_EQ(idx.doc_count("nikita is"), 1u);
    EXPECT_EQ(idx.total_tokens(), 6u);
}

TEST(CorpusIndex, AbsentNgramIsZero)
{
    auto idx = index_of({{"1", "", "a b"}});
    EXPECT_EQ(idx.doc_count("zzz"), 0u);
    V g{"b", "a"};
    EXPECT_EQ(idx.doc_count(g), 0u);
}

TEST(CorpusIndex, PresentEverywhere)
{
    std::vector<Document> docs;
    for (int i = 0; i < 7; ++i) docs.push_back({std::to_string(i), "", "common w" + std::to_string(i)});
    auto idx = index_of(docs);
    EXPECT_EQ(idx.doc_count("common"), 7u);
    EXPECT_DOUBLE_EQ(idx.term_probability("common"), 1.0);
}

TEST(CorpusIndex, StubWith61Documents)
{
    auto idx = testing_support::stub_index({{"buck tick", 61}}, 100);
    EXPECT_EQ(idx.doc_count("buck tick"), 61u);
    EXPECT_EQ(idx.num_docs(), 100u);
}

TEST(CorpusIndex, NgramLongerThanMaxNIsRejected)
{
    auto idx = index_of({{"1", "", "a b c d"}});
    V four{"a", "b", "c", "d"};
    EXPECT_EQ(kind_of([&] { (void)idx.doc_count(four); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([&] { (void)idx.doc_count(V{}); }), ErrorKind::InvalidArgument);
    auto small = index_of({{"1", "", "a b"}}, 1);
    EXPECT_EQ(kind_of([&] { (void)small.doc_count("a b"); }), ErrorKind::InvalidArgument);
}

TEST(CorpusIndex, TermProbability)
{
    auto idx = testing_support::stub_index({{"rare", 2}}, 2000);
    EXPECT_DOUBLE_EQ(idx.term_probability("rare"), 0.001);
    EXPECT_DOUBLE_EQ(idx.term_probability("absent"), 0.0);
    DfIndex empty;
    EXPECT_EQ(kind_of([&] { (void)empty.term_probability("x"); }), ErrorKind::EmptyIndex);
}

TEST(CorpusIndex, DuplicateIdNamesTheId)
{
    std::vector<Document> docs{{"dup-7", "", "a"}, {"dup-7", "", "b"}};
    try {
        (void)build_index(docs);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Ingest);
        EXPECT_NE(std::string(e.what()).find("dup-7"), std::string::npos);
    }
}

TEST(CorpusIndex, EmptyTokenDocumentRejected)
{
    std::vector<Document> docs{{"x", "", " ,;- "}};
    EXPECT_EQ(kind_of([&] { (void)build_index(docs); }), ErrorKind::Ingest);
}

TEST(CorpusIndex, ZeroMaxNRejected)
{
    EXPECT_EQ(kind_of([] { IndexBuilder b(0); }), ErrorKind::InvalidArgument);
}

namespace {

std::vector<Document> random_corpus(std::mt19937_64& rng, std::size_t n)
{
    std::vector<Document> docs;
    std::uniform_int_distribution<int> len(1, 12), word(0, 15);
    for (std::size_t i = 0; i < n; ++i) {
        std::string text;
        for (int t = len(rng); t > 0; --t) text += "w" + std::to_string(word(rng)) + " ";
        docs.push_back({"d" + std::to_string(i), "", text});
    }
    return docs;
}

}  // namespace

TEST(CorpusIndexProperties, InvariantsHold)
{
    std::mt19937_64 rng(11);
    auto idx = index_of(random_corpus(rng, 300));
    std::uint64_t cf_sum = 0;
    for (const auto& [key, cf] : idx.cf_table()) {
        cf_sum += cf;
        EXPECT_GE(cf, idx.doc_count(key));
    }
    EXPECT_EQ(cf_sum, idx.total_tokens());
    for (const auto& [key, df] : idx.df_table()) {
        EXPECT_GE(df, 1u);
        EXPECT_LE(df, idx.num_docs());
        auto toks = tokenize(key);
        if (toks.size() > 1) {
            V left(toks.begin(), toks.end() - 1), right(toks.begin() + 1, toks.end());
            EXPECT_LE(df, idx.doc_count(left));
            EXPECT_LE(df, idx.doc_count(right));
        }
    }
}

TEST(CorpusIndexProperties, OrderIndependent)
{
    std::mt19937_64 rng(12);
    auto docs = random_corpus(rng, 200);
    auto a = index_of(docs);
    std::shuffle(docs.begin(), docs.end(), rng);
    auto b = index_of(docs);
    EXPECT_TRUE(a == b);
    auto c = build_index(docs, 3, 4);
    EXPECT_TRUE(a == c);
}

TEST(CorpusIndexProperties, AddingDocumentNeverDecreasesCounts)
{
    std::mt19937_64 rng(13);
    auto docs = random_corpus(rng, 100);
    auto before = index_of(docs);
    docs.push_back({"extra", "", "w1 w2 w3 w99"});
    auto after = index_of(docs);
    EXPECT_EQ(after.num_docs(), before.num_docs() + 1);
    for (const auto& [key, df] : before.df_table()) EXPECT_GE(after.doc_count(key), df);
    for (const auto& [key, cf] : before.cf_table()) EXPECT_GE(after.collection_count(key), cf);
}

TEST(CorpusIndexProperties, ProbabilityMonotoneInDf)
{
    auto idx = testing_support::stub_index({{"a", 1}, {"b", 5}, {"c", 50}}, 50);
    EXPECT_LT(idx.term_probability("a"), idx.term_probability("b"));
    EXPECT_LT(idx.term_probability("b"), idx.term_probability("c"));
    EXPECT_LE(idx.term_probability("c"), 1.0);
}

TEST(CorpusIndexPersistence, RoundTrip)
{
    testing_support::TempDir dir;
    std::mt19937_64 rng(14);
    auto idx = index_of(random_corpus(rng, 150));
    save_index(idx, dir.path() / "i.bin");
    auto loaded = load_index(dir.path() / "i.bin");
    EXPECT_TRUE(idx == loaded);
    EXPECT_EQ(loaded.max_n(), 3u);
}

TEST(CorpusIndexPersistence, TruncatedFileFails)
{
    testing_support::TempDir dir;
    auto idx = index_of({{"1", "", "a b c"}, {"2", "", "c d"}});
    auto path = dir.path() / "i.bin";
    save_index(idx, path);
    auto size = std::filesystem::file_size(path);
    for (auto cut : {std::uintmax_t{0}, std::uintmax_t{5}, size / 2, size - 1}) {
        std::filesystem::resize_file(path, cut);
        EXPECT_EQ(kind_of([&] { (void)load_index(path); }), ErrorKind::Load) << cut;
        save_index(idx, path);
    }
}

TEST(CorpusIndexPersistence, WrongVersionIsExplicit)
{
    testing_support::TempDir dir;
    auto idx = index_of({{"1", "", "a b"}});
    auto path = dir.path() / "i.bin";
    save_index(idx, path);
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(8);
        char v[4] = {9, 0, 0, 0};
        f.write(v, 4);
    }
    try {
        (void)load_index(path);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Load);
        EXPECT_NE(std::string(e.what()).find("version"), std::string::npos);
    }
}

TEST(CorpusIndexPersistence, CorruptionDetected)
{
    testing_support::TempDir dir;
    auto idx = index_of({{"1", "", "alpha beta gamma"}});
    auto path = dir.path() / "i.bin";
    save_index(idx, path);
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(40);
        f.put('#');
    }
    EXPECT_EQ(kind_of([&] { (void)load_index(path); }), ErrorKind::Load);
    std::ofstream(dir.path() / "junk.bin") << "not an index at all";
    EXPECT_EQ(kind_of([&] { (void)load_index(dir.path() / "junk.bin"); }), ErrorKind::Load);
    EXPECT_EQ(kind_of([&] { (void)load_index(dir.path() / "missing.bin"); }), ErrorKind::Load);
}
