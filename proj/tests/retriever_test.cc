#include "archeval/retriever.h"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

#include <gtest/gtest.h>

#include "oracles.h"

namespace archeval {
namespace {

std::vector<ParagraphCandidate> as_candidates(const std::vector<std::string>& texts) {
  std::vector<ParagraphCandidate> out;
  for (std::size_t i = 0; i < texts.size(); ++i) out.push_back({i, texts[i], 0.0});
  return out;
}

std::string random_paragraph(std::mt19937& rng) {
  static const std::vector<std::string> words{
      "encoder", "decoder", "attention", "gate",  "conv", "relu", "skip",
      "feature", "map",     "upsample",  "layer", "the",  "of",   "input"};
  std::string out;
  for (std::size_t n = 1 + rng() % 12; n > 0; --n) {
    if (!out.empty()) out += ' ';
    out += words[rng() % words.size()];
  }
  return out;
}

TEST(SplitParagraphs, BlankLines) {
  auto p = split_paragraphs("one\nline two\n\n\nthree\n  \nfour");
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[0], "one\nline two");
  EXPECT_EQ(p[2], "four");
  EXPECT_TRUE(split_paragraphs("\n\n").empty());
}

TEST(ReferencesFigure, Forms) {
  EXPECT_TRUE(references_figure("As Fig. 5 shows, the gate", 5));
  EXPECT_FALSE(references_figure("configuration of the system", 5));
  EXPECT_FALSE(references_figure("see Figure 15", 5));
  EXPECT_FALSE(references_figure("see Figure 5.", 3));
  EXPECT_TRUE(references_figure("(Figure 5)", 5));
  EXPECT_TRUE(references_figure("see figure\n5 below", 5));
  EXPECT_TRUE(references_figure("fig.5", 5));
  EXPECT_TRUE(references_figure("Fig5", 5));
  EXPECT_FALSE(references_figure("prefig 5", 5));
  EXPECT_FALSE(references_figure("Fig. 50", 5));
}

TEST(FindFigureParagraphs, KeepsDocumentIndex) {
  auto c = find_figure_paragraphs("intro\n\nIn Figure 2 we\n\nnothing\n\nfig 2 again", 2);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].index, 1u);
  EXPECT_EQ(c[1].index, 3u);
}

TEST(TfidfTokens, LowercaseAlnumRuns) {
  EXPECT_EQ(tfidf_tokens("Wg:1x1 Conv-Layer"),
            (std::vector<std::string>{"wg", "1x1", "conv", "layer"}));
}

TEST(TfidfRank, Basics) {
  EXPECT_TRUE(tfidf_rank({}, "query").empty());
  EXPECT_THROW(tfidf_rank(as_candidates({"a"}), "a", 0), std::invalid_argument);
  auto one = tfidf_rank(as_candidates({"unrelated words"}), "attention gate");
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].index, 0u);
}

TEST(TfidfRank, SelfMatchRanksFirst) {
  std::string q = "attention gate resampler sigmoid";
  auto ranked = tfidf_rank(
      as_candidates({"encoder layers", q, "decoder upsampling", "the gate"}), q, 4);
  ASSERT_EQ(ranked.size(), 4u);
  EXPECT_EQ(ranked[0].index, 1u);
  for (const auto& c : ranked) EXPECT_LE(c.score, ranked[0].score);
}

TEST(TfidfRank, FiveCandidatesAgainstOracle) {
  std::vector<std::string> texts{"gate gate conv", "conv relu", "skip map",
                                 "gate map map", "relu"};
  std::string q = "gate map relu";
  std::vector<std::vector<std::string>> toks;
  for (const auto& t : texts) toks.push_back(tfidf_tokens(t));
  std::vector<double> scores;
  auto order = oracle::tfidf_order(toks, tfidf_tokens(q), &scores);
  auto ranked = tfidf_rank(as_candidates(texts), q, 5);
  ASSERT_EQ(ranked.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(ranked[i].index, order[i]);
    EXPECT_NEAR(ranked[i].score, scores[order[i]], 1e-12);
  }
}

// Fuzzed properties.

TEST(RetrieverProperties, MatchesOracleAndBounds) {
  std::mt19937 rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> texts(1 + rng() % 8);
    for (auto& t : texts) t = random_paragraph(rng);
    std::string q = random_paragraph(rng);
    std::size_t k = 1 + rng() % 5;
    std::vector<std::vector<std::string>> toks;
    for (const auto& t : texts) toks.push_back(tfidf_tokens(t));
    std::vector<double> scores;
    auto order = oracle::tfidf_order(toks, tfidf_tokens(q), &scores);
    auto ranked = tfidf_rank(as_candidates(texts), q, k);
    ASSERT_EQ(ranked.size(), std::min(k, texts.size()));
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      EXPECT_NEAR(ranked[i].score, scores[ranked[i].index], 1e-12);
      EXPECT_GE(ranked[i].score, 0.0);
      EXPECT_LE(ranked[i].score, 1.0 + 1e-12);
      // Equal to the oracle's order unless scores tie within rounding.
      if (std::abs(scores[order[i]] - scores[ranked[i].index]) > 1e-12) {
        EXPECT_EQ(ranked[i].index, order[i]);
      }
    }
  }
}

TEST(RetrieverProperties, PermutationInvariantUpToTies) {
  std::mt19937 rng(72);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> texts(1 + rng() % 8);
    for (auto& t : texts) t = random_paragraph(rng);
    std::string q = random_paragraph(rng);
    auto base = tfidf_rank(as_candidates(texts), q, texts.size());
    auto shuffled = as_candidates(texts);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto again = tfidf_rank(shuffled, q, texts.size());
    ASSERT_EQ(base.size(), again.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      EXPECT_NEAR(base[i].score, again[i].score, 1e-12);
    }
  }
}

// A candidate that shares no term with the query leaves the relative order
// of the existing candidates alone. Its tokens can still shift document
// frequencies, so only the order is compared, not the scores.
TEST(RetrieverProperties, UnrelatedCandidateKeepsRelativeOrder) {
  std::mt19937 rng(73);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> texts(1 + rng() % 6);
    for (auto& t : texts) t = random_paragraph(rng);
    std::string q = random_paragraph(rng);
    auto before = tfidf_rank(as_candidates(texts), q, texts.size());
    auto extended = texts;
    extended.push_back("zebra quasar " + std::to_string(trial));
    auto after = tfidf_rank(as_candidates(extended), q, extended.size());
    std::vector<std::size_t> a, b;
    for (const auto& c : before) a.push_back(c.index);
    for (const auto& c : after) {
      if (c.index < texts.size()) b.push_back(c.index);
    }
    EXPECT_EQ(a, b) << "trial " << trial;
  }
}

}  // namespace
}  // namespace archeval
