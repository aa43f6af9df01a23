#include "../support/stub_index.hpp"

#include "hopqpp/error.hpp"
#include "hopqpp/retrieval_path.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hopqpp;
using V = std::vector<std::string>;

namespace {

const Document kNikita{"Little Nikita", "Little Nikita",
                       "Little Nikita is a 1988 American spy film starring Sidney Poitier and River Phoenix."};
const Document kPhoenix{"River Phoenix", "",
                        "River Jude Phoenix (born August 23, 1970) was an American actor, musician and activist."};
const Document kPetri{"Elio Petri", "", "Elio Petri was an Italian political filmmaker."};
const Document kKubrick{"Stanley Kubrick", "", "Stanley Kubrick was an American film director."};

// Rare entities, common function words, and the four documents themselves.
DfIndex table1_index()
{
    auto docs = testing_support::stub_corpus({{"little nikita", 3},
                                              {"sidney poitier", 40},
                                              {"phoenix", 4},
                                              {"river", 60},
                                              {"elio petri", 2},
                                              {"stanley kubrick", 5},
                                              {"was an", 9000},
                                              {"and", 9000},
                                              {"a", 9000},
                                              {"american", 5000},
                                              {"actor", 2000},
                                              {"born", 3000},
                                              {"from", 5000},
                                              {"different", 5000},
                                              {"countries", 5000},
                                              {"is", 9000}},
                                             10000);
    for (const auto& d : {kNikita, kPhoenix, kPetri, kKubrick}) docs.push_back(d);
    return build_index(docs);
}

const DfIndex& shared_index()
{
    static const DfIndex idx = table1_index();
    return idx;
}

PathGraph graph_for(const std::string& question, const Document& d1, const Document& d2)
{
    const auto& idx = shared_index();
    auto ng = extract_ngram_set("q", question, idx, kDefaultPThr);
    auto toks = tokenize(question);
    return build_path_graph(ng, toks, d1, d2, idx, kDefaultPThr);
}

}  // namespace

TEST(Related, RareCommonTermIsWitness)
{
    auto idx = testing_support::stub_index({{"zyx", 1}}, 10000);
    V a{"the", "zyx", "cat"}, b{"zyx", "dog"};
    auto w = related(a, b, idx, 0.001);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->key, "zyx");
    EXPECT_DOUBLE_EQ(w->probability, 0.0001);
}

TEST(Related, FrequentTermIsNot)
{
    std::map<std::string, std::size_t> counts{{"the", 9}};
    auto idx = testing_support::stub_index(counts, 10);
    V a{"the", "cat"}, b{"the", "dog"};
    EXPECT_FALSE(related(a, b, idx, 0.001));
}

TEST(Related, BoundaryIsStrict)
{
    auto idx = testing_support::stub_index({{"term", 2}}, 2000);
    V a{"term"}, b{"term"};
    EXPECT_FALSE(related(a, b, idx, 0.001));
    EXPECT_TRUE(related(a, b, idx, 0.0011));
}

TEST(Related, PrefersLowestProbabilityThenLongest)
{
    auto idx = testing_support::stub_index({{"river phoenix", 2}, {"arizona", 1}}, 10000);
    V a{"river", "phoenix", "arizona"}, b{"arizona", "river", "phoenix"};
    EXPECT_EQ(related(a, b, idx, 0.001)->key, "arizona");
    V c{"river", "phoenix"}, d{"river", "phoenix", "x"};
    EXPECT_EQ(related(c, d, idx, 0.001)->key, "river phoenix");
}

TEST(Related, Errors)
{
    DfIndex empty;
    V a{"x"};
    try {
        (void)related(a, a, empty, 0.001);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::EmptyIndex);
    }
    auto idx = testing_support::stub_index({{"x", 1}}, 2);
    EXPECT_THROW((void)related(a, a, idx, 0.0), Error);
    EXPECT_THROW((void)related(a, a, idx, 1.5), Error);
    EXPECT_NO_THROW((void)related(a, a, idx, 1.0));
}

TEST(PathGraph, LittleNikitaIsBridge)
{
    std::string q = "What year was the actor that co-starred with Sidney Poitier in Little Nikita born?";
    auto g = graph_for(q, kNikita, kPhoenix);
    ASSERT_TRUE(g.has(Edge::QuestionDoc1));
    EXPECT_EQ(g.witness(Edge::QuestionDoc1)->key, "little nikita");
    EXPECT_FALSE(g.has(Edge::QuestionDoc2));
    ASSERT_TRUE(g.has(Edge::Doc1Doc2));
    EXPECT_EQ(g.witness(Edge::Doc1Doc2)->key, "phoenix");
    EXPECT_EQ(classify_path(g), PathType::Bridge);
}

TEST(PathGraph, KubrickPetriIsComparison)
{
    std::string q = "Were Stanley Kubrick and Elio Petri from different countries?";
    auto g = graph_for(q, kPetri, kKubrick);
    EXPECT_EQ(g.witness(Edge::QuestionDoc1)->key, "elio petri");
    EXPECT_EQ(g.witness(Edge::QuestionDoc2)->key, "stanley kubrick");
    EXPECT_FALSE(g.has(Edge::Doc1Doc2));
    EXPECT_EQ(classify_path(g), PathType::Comparison);
}

TEST(PathGraph, NoSharedRareTerm)
{
    std::string q = "Was an actor born?";
    Document d1{"a", "", "was an actor and river phoenix"};
    Document d2{"b", "", "born american phoenix"};
    auto g = graph_for(q, d1, d2);
    EXPECT_FALSE(g.has(Edge::QuestionDoc1));
    EXPECT_FALSE(g.has(Edge::QuestionDoc2));
    EXPECT_EQ(classify_path(g), PathType::NoPath);
}

TEST(PathGraph, FallsBackToQuestionUnigrams)
{
    std::string q = "what did the phoenix do?";
    Document d1{"a", "", "a phoenix rises"};
    Document d2{"b", "", "was"};
    auto g = graph_for(q, d1, d2);
    ASSERT_TRUE(g.has(Edge::QuestionDoc1));
    EXPECT_EQ(g.witness(Edge::QuestionDoc1)->key, "phoenix");
}

TEST(ClassifyPath, TruthTable)
{
    struct Row {
        bool q1, q2, dd;
        PathType expected;
    };
    const Row rows[] = {
        {false, false, false, PathType::NoPath},  {true, false, false, PathType::NoPath},
        {false, true, false, PathType::NoPath},   {false, false, true, PathType::NoPath},
        {true, true, false, PathType::Comparison}, {true, false, true, PathType::Bridge},
        {false, true, true, PathType::Bridge},    {true, true, true, PathType::Mixed},
    };
    for (const auto& r : rows) {
        EXPECT_EQ(classify_path(PathGraph::from_edges(r.q1, r.q2, r.dd)), r.expected)
            << r.q1 << r.q2 << r.dd;
    }
}

TEST(PredictPathType, Examples)
{
    std::string cmp = "Were Stanley Kubrick and Elio Petri from different countries?";
    EXPECT_EQ(predict_path_type(cmp, extract_entities(cmp)), PathType::Comparison);
    std::string br = "What year was the actor that co-starred with Sidney Poitier in Little Nikita born?";
    EXPECT_EQ(predict_path_type(br, extract_entities(br)), PathType::Bridge);
    EXPECT_EQ(predict_path_type(br, extract_entities(br), "comparison"), PathType::Comparison);
    EXPECT_EQ(predict_path_type(cmp, extract_entities(cmp), "bridge"), PathType::Bridge);
}

TEST(PredictPathType, NeedsTwoDistinctEntities)
{
    std::string q = "Is Sugarland older than Sugarland?";
    EXPECT_EQ(predict_path_type(q, extract_entities(q)), PathType::Bridge);
}

TEST(PredictPathType, BadExternalLabel)
{
    for (auto label : {"mixed", "none", "Bridge", ""}) {
        try {
            (void)predict_path_type("x", {}, std::string_view(label));
            FAIL() << label;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::Validation);
        }
    }
}

TEST(PredictPathType, CueLexiconIsFixed)
{
    auto cues = comparison_cues();
    EXPECT_EQ(cues.size(), 11u);
    EXPECT_EQ(kComparisonCueLexiconVersion, "cues-v1");
}

TEST(SingleDocument, AnswerPresence)
{
    Document d1{"a", "", "born in 1970"};
    Document d2{"b", "", "no year here"};
    auto g = PathGraph::from_edges(true, false, true);
    EXPECT_TRUE(answer_in_single_document("1970", d1, d2, g));
    EXPECT_FALSE(answer_in_single_document("1970", d2, d1, g));
    EXPECT_FALSE(answer_in_single_document("here 1970", d1, d2, g));
}

TEST(PathGraphProperties, WitnessesAndThresholdMonotonicity)
{
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> word(0, 40), len(3, 15);
    std::vector<Document> docs;
    auto text = [&] {
        std::string t;
        for (int i = len(rng); i > 0; --i) t += "t" + std::to_string(word(rng)) + " ";
        return t;
    };
    for (int i = 0; i < 400; ++i) docs.push_back({std::to_string(i), "", text()});
    auto idx = build_index(docs);
    const double thresholds[] = {0.003, 0.01, 0.03, 0.1, 0.3, 1.0};
    for (int trial = 0; trial < 200; ++trial) {
        std::string q = text();
        Document d1{"x", "", text()}, d2{"y", "", text()};
        auto ng = extract_ngram_set("q", q, idx, 0.01);
        auto qt = tokenize(q);
        std::array<bool, 3> prev{};
        for (double thr : thresholds) {
            auto g = build_path_graph(ng, qt, d1, d2, idx, thr);
            for (std::size_t e = 0; e < 3; ++e) {
                bool has = g.witnesses[e].has_value();
                EXPECT_TRUE(has || !prev[e]);
                prev[e] = has;
                if (has) {
                    EXPECT_LT(g.witnesses[e]->probability, thr);
                }
            }
            if (const auto& w = g.witness(Edge::Doc1Doc2)) {
                auto s1 = ngram_set(document_tokens(d1), 3);
                auto s2 = ngram_set(document_tokens(d2), 3);
                EXPECT_TRUE(s1.contains(w->key) && s2.contains(w->key));
            }
        }
    }
}
