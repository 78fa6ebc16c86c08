#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "sharedword/errors.h"
#include "sharedword/linguistics.h"

namespace sharedword {
namespace {

TEST(Tokenize, SplitsPunctuation) {
  EXPECT_EQ(tokenize("What is ultimate purpose of life?"),
            (std::vector<std::string>{"What", "is", "ultimate", "purpose", "of",
                                      "life", "?"}));
  EXPECT_EQ(tokenize("purpose of life, if not money?"),
            (std::vector<std::string>{"purpose", "of", "life", ",", "if", "not",
                                      "money", "?"}));
}

TEST(Tokenize, KeepsInnerApostropheHyphenAndPad) {
  EXPECT_EQ(tokenize("don't e-mail [PAD] 'x'"),
            (std::vector<std::string>{"don't", "e-mail", "[PAD]", "'", "x", "'"}));
}

TEST(Annotate, PurposeOfLife) {
  const auto s = annotate("What is the purpose of life ?");
  ASSERT_EQ(s.size(), 7u);
  EXPECT_EQ(s[3].surface, "purpose");
  EXPECT_EQ(s[3].pos, Pos::kNoun);
  EXPECT_FALSE(s[3].is_stopword);
  EXPECT_EQ(s[5].pos, Pos::kNoun);
  EXPECT_FALSE(s[5].is_stopword);
  for (std::size_t k : {0u, 1u, 2u, 4u}) EXPECT_TRUE(s[k].is_stopword) << s[k].surface;
  EXPECT_EQ(s[0].folded, "what");
}

TEST(Annotate, SinglePunctuationToken) {
  const auto s = annotate("?");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].pos, Pos::kOther);
  EXPECT_FALSE(s[0].is_content());
}

TEST(Annotate, GmailAccount) {
  const auto s = annotate("Gmail account");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].pos, Pos::kNoun);
  EXPECT_EQ(s[1].pos, Pos::kNoun);
  EXPECT_FALSE(s[0].is_stopword);
  EXPECT_FALSE(s[1].is_stopword);
}

TEST(Annotate, RejectsEmptyText) {
  EXPECT_THROW(annotate(""), InvalidInputError);
  EXPECT_THROW(annotate("   \t"), InvalidInputError);
}

TEST(Annotate, FoldedIsLowercase) {
  const auto s = annotate("HeLLo World");
  EXPECT_EQ(s[0].folded, "hello");
  EXPECT_EQ(s[1].folded, "world");
}

TEST(Tagger, SuffixRules) {
  const Tagger& t = Tagger::builtin();
  EXPECT_EQ(t.fine_tag("running", 1), "VBG");
  EXPECT_EQ(t.fine_tag("jumped", 1), "VBD");
  EXPECT_EQ(t.fine_tag("slowly", 1), "RB");
  EXPECT_EQ(t.fine_tag("dangerous", 1), "JJ");
  EXPECT_EQ(t.fine_tag("Paris", 2), "NNP");
  EXPECT_EQ(t.fine_tag("tables", 1), "NNS");
  EXPECT_EQ(t.fine_tag("table", 1), "NN");
  EXPECT_EQ(t.coarse("NNP"), Pos::kNoun);
  EXPECT_EQ(t.coarse("VBG"), Pos::kVerb);
  EXPECT_EQ(t.coarse("JJS"), Pos::kAdj);
  EXPECT_EQ(t.coarse("RB"), Pos::kOther);
  EXPECT_EQ(t.coarse("XYZ"), Pos::kOther);
}

TEST(Tagger, PadTokenIsNotContent) {
  const auto s = annotate("the [PAD] car");
  EXPECT_TRUE(s[1].is_pad());
  EXPECT_FALSE(s[1].is_content());
  EXPECT_TRUE(s.contains_pad());
}

TEST(Parsers, StopwordsAndCollapseTable) {
  const auto stop = parse_stopword_list("the\n# comment\n\nA\n");
  EXPECT_TRUE(stop.contains("the"));
  EXPECT_TRUE(stop.contains("a"));
  EXPECT_EQ(stop.size(), 2u);
  const auto table = parse_pos_collapse_table("NN\tNOUN\nVB\tVERB\n");
  EXPECT_EQ(table.at("NN"), Pos::kNoun);
  EXPECT_EQ(table.at("VB"), Pos::kVerb);
  EXPECT_THROW(parse_pos_collapse_table("NN\tTHING\n"), DataError);
}

TEST(Parsers, BuiltinStopwordsContainCommonWords) {
  const Tagger& t = Tagger::builtin();
  for (const char* w : {"the", "is", "what", "of", "if", "not", "how", "can", "i"}) {
    EXPECT_TRUE(t.is_stopword(w)) << w;
  }
  EXPECT_FALSE(t.is_stopword("purpose"));
}

const AnnotatedSentence kFig2P = annotate("What is ultimate purpose of life ?");
const AnnotatedSentence kFig2Q = annotate("What is the purpose of life , if not money ?");

TEST(ReplaceablePairs, PositiveSharesPurposeAndLife) {
  const auto pairs = replaceable_pairs(kFig2P, kFig2Q, Label::kPositive, {});
  EXPECT_EQ(pairs, (std::vector<PositionPair>{{3, 3}, {5, 5}}));
}

TEST(ReplaceablePairs, NegativeNounCrossProduct) {
  const auto p = annotate("How can I get my Gmail account back ?");
  const auto q = annotate("What is the best school management software ?");
  const auto pairs = replaceable_pairs(p, q, Label::kNegative, {});
  // Gmail(5), account(6) x school(4), management(5), software(6)
  EXPECT_EQ(pairs, (std::vector<PositionPair>{
                       {5, 4}, {5, 5}, {5, 6}, {6, 4}, {6, 5}, {6, 6}}));
}

TEST(ReplaceablePairs, StopwordsOnly) {
  const auto p = annotate("what is the");
  const auto q = annotate("what is it");
  EXPECT_TRUE(replaceable_pairs(p, q, Label::kPositive, {}).empty());
  EXPECT_TRUE(replaceable_pairs(p, q, Label::kNegative, {}).empty());
}

TEST(ReplaceablePairs, RepeatedSharedWordGivesAllIndexPairs) {
  const auto p = annotate("car or car");
  const auto q = annotate("a car");
  EXPECT_EQ(replaceable_pairs(p, q, Label::kPositive, {}),
            (std::vector<PositionPair>{{0, 1}, {2, 1}}));
}

TEST(ReplaceablePairs, CaseFoldedSharing) {
  const auto p = annotate("Paris trip");
  const auto q = annotate("visit paris");
  EXPECT_EQ(replaceable_pairs(p, q, Label::kPositive, {}),
            (std::vector<PositionPair>{{0, 1}}));
}

TEST(ReplaceablePairs, FrozenPositionsShrinkOutput) {
  const auto p = annotate("How can I get my Gmail account back ?");
  const auto q = annotate("What is the best school management software ?");
  const auto all = replaceable_pairs(p, q, Label::kNegative, {});
  FrozenPositions frozen;
  frozen.p.insert(5);
  const auto fewer = replaceable_pairs(p, q, Label::kNegative, frozen);
  EXPECT_EQ(fewer.size(), 3u);
  for (const auto& pair : fewer) {
    EXPECT_NE(pair.i, 5u);
    EXPECT_NE(std::find(all.begin(), all.end(), pair), all.end());
  }
  frozen.q.insert(4);
  EXPECT_EQ(replaceable_pairs(p, q, Label::kNegative, frozen).size(), 2u);
}

TEST(ReplaceablePairs, NegativeRequiresContentPos) {
  // Adverbs collapse to OTHER and never pair.
  const auto p = annotate("today soon");
  const auto q = annotate("tomorrow later");
  EXPECT_TRUE(replaceable_pairs(p, q, Label::kNegative, {}).empty());
}

TEST(ReplaceablePairs, MonotoneUnderRandomFreezing) {
  const auto p = annotate("buy a cheap red car and fix the old house today");
  const auto q = annotate("sell my new blue phone or paint a big river soon");
  const auto base = replaceable_pairs(p, q, Label::kNegative, {});
  FrozenPositions frozen;
  std::size_t previous = base.size();
  for (std::size_t k = 0; k < p.size(); ++k) {
    frozen.p.insert(k);
    if (k < q.size()) frozen.q.insert(q.size() - 1 - k);
    const auto now = replaceable_pairs(p, q, Label::kNegative, frozen);
    EXPECT_LE(now.size(), previous);
    previous = now.size();
  }
  EXPECT_EQ(previous, 0u);
}

TEST(Sentence, WithTokenAndText) {
  const auto s = annotate("buy a car");
  const auto t = s.with_token(2, pad_token());
  EXPECT_EQ(t.text(), "buy a [PAD]");
  EXPECT_EQ(s.text(), "buy a car");
  EXPECT_THROW(AnnotatedSentence(std::vector<Token>{}), InvalidInputError);
}

TEST(Label, ParseAndFlip) {
  EXPECT_EQ(parse_label("positive"), Label::kPositive);
  EXPECT_EQ(parse_label("0"), Label::kNegative);
  EXPECT_EQ(flip(Label::kPositive), Label::kNegative);
  EXPECT_THROW(parse_label("maybe"), InvalidInputError);
}

}  // namespace
}  // namespace sharedword
