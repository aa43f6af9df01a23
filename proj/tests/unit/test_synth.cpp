#include "hopqpp/error.hpp"
#include "hopqpp/io.hpp"
#include "hopqpp/synth.hpp"
#include "hopqpp/term_extraction.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace hopqpp;

namespace {

SynthConfig small(std::uint64_t seed)
{
    SynthConfig cfg;
    cfg.seed = seed;
    cfg.questions = 100;
    cfg.filler_docs = 200;
    cfg.k = 50;
    return cfg;
}

std::string dump(const SynthData& d)
{
    std::ostringstream out;
    write_corpus(out, d.corpus);
    write_questions(out, d.questions);
    write_runs(out, d.runs);
    write_truth(out, d.truth);
    return out.str();
}

}  // namespace

TEST(PortableRng, FixedSequence)
{
    PortableRng a(7), b(7);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
    PortableRng c(1);
    for (int i = 0; i < 1000; ++i) {
        double u = c.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
        auto k = c.uniform_int(3, 5);
        EXPECT_GE(k, 3u);
        EXPECT_LE(k, 5u);
    }
}

TEST(Synth, SeededDeterminism)
{
    auto a = generate_synthetic(small(7));
    auto b = generate_synthetic(small(7));
    EXPECT_EQ(dump(a), dump(b));
    EXPECT_NE(dump(a), dump(generate_synthetic(small(8))));
    EXPECT_EQ(a.questions.size(), 100u);
    EXPECT_EQ(a.runs.size(), 100u);
}

TEST(Synth, PlantedCountsMatchIndex)
{
    auto d = generate_synthetic(small(3));
    auto idx = build_index(d.corpus);
    bool saw_df1 = false;
    for (const auto& t : d.truth) {
        for (std::size_t i = 0; i < t.entities.size(); ++i) {
            EXPECT_EQ(idx.doc_count(ngram_key(tokenize(t.entities[i]))), t.entity_df[i]) << t.entities[i];
        }
        if (t.type == PathType::Bridge && t.entity_df[0] == 1) {
            saw_df1 = true;
            EXPECT_EQ(t.p_true, 1.0 * 0.125);
        }
    }
    EXPECT_TRUE(saw_df1);
}

TEST(Synth, ComparisonQuestionsNameTwoEntities)
{
    auto d = generate_synthetic(small(4));
    for (std::size_t i = 0; i < d.questions.size(); ++i) {
        auto spans = extract_entities(d.questions[i].question);
        if (d.truth[i].type == PathType::Comparison) {
            ASSERT_EQ(spans.size(), 2u) << d.questions[i].question;
        } else {
            ASSERT_EQ(spans.size(), 1u) << d.questions[i].question;
        }
        for (std::size_t s = 0; s < spans.size(); ++s)
            EXPECT_EQ(ngram_key(spans[s].words()), ngram_key(tokenize(d.truth[i].entities[s])));
    }
}

TEST(Synth, ZeroNoiseCostIsInverseProbability)
{
    auto cfg = small(5);
    cfg.noise = 0.0;
    auto d = generate_synthetic(cfg);
    for (std::size_t i = 0; i < d.runs.size(); ++i) {
        auto expected = std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::llround(1.0 / d.truth[i].p_true)));
        EXPECT_EQ(d.truth[i].cost, expected);
        auto cost = retrieval_cost(d.runs[i], cfg.k);
        if (expected <= 2 * cfg.k) {
            EXPECT_EQ(cost, expected);
        } else {
            EXPECT_EQ(cost, 2 * cfg.k + 1);
        }
        EXPECT_NO_THROW(d.runs[i].validate());
    }
}

TEST(Synth, RejectsBadConfig)
{
    SynthConfig cfg;
    cfg.questions = 0;
    EXPECT_THROW(generate_synthetic(cfg), Error);
}
