#include "hopqpp/tokenizer.hpp"

#include <gtest/gtest.h>

using hopqpp::tokenize;
using V = std::vector<std::string>;

TEST(Tokenizer, LowercasesAndSplits)
{
    EXPECT_EQ(tokenize("Little Nikita"), (V{"little", "nikita"}));
}

TEST(Tokenizer, EmptyInput) { EXPECT_TRUE(tokenize("").empty()); }

TEST(Tokenizer, DropsPunctuationKeepsDigits)
{
    EXPECT_EQ(tokenize("River Jude Phoenix (born 1970)"), (V{"river", "jude", "phoenix", "born", "1970"}));
}

TEST(Tokenizer, PunctuationOnly) { EXPECT_TRUE(tokenize(" ,.;-- ()").empty()); }

TEST(Tokenizer, SplitsInsideWords)
{
    EXPECT_EQ(tokenize("America's co-star"), (V{"america", "s", "co", "star"}));
}

TEST(Tokenizer, KeepsUtf8BytesInsideTokens)
{
    EXPECT_EQ(tokenize("Zoë Saldaña"), (V{"zoë", "saldaña"}));
}

TEST(Tokenizer, OffsetsPointIntoSource)
{
    std::string text = "Hi, Bob-42!";
    auto toks = hopqpp::tokenize_with_offsets(text);
    ASSERT_EQ(toks.size(), 3u);
    EXPECT_EQ(text.substr(toks[1].begin, toks[1].end - toks[1].begin), "Bob");
    EXPECT_EQ(toks[2].text, "42");
    EXPECT_EQ(toks[2].begin, 8u);
}

TEST(Tokenizer, NgramKeyJoinsWithSpace)
{
    V t{"a", "b", "c"};
    EXPECT_EQ(hopqpp::ngram_key(t), "a b c");
}

TEST(Tokenizer, ContiguousNgramsKeepsDuplicates)
{
    V t{"a", "b", "a"};
    auto g = hopqpp::contiguous_ngrams(t, 2);
    EXPECT_EQ(g, (V{"a", "a b", "b", "b a", "a"}));
}

TEST(Tokenizer, Deterministic)
{
    EXPECT_EQ(tokenize("The Same input, twice."), tokenize("The Same input, twice."));
}
