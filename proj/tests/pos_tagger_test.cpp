#include <gtest/gtest.h>

#include "mderank/candidates.hpp"
#include "mderank/pos_tagger.hpp"

using namespace mderank;

TEST(PosTaggerTest, SuffixRules) {
  EXPECT_EQ(tag_pos_heuristic({"quickly"}), std::vector<std::string>{"RB"});
  EXPECT_EQ(tag_word_heuristic("zorbification"), "NN");
  EXPECT_EQ(tag_word_heuristic("flimment"), "NN");
  EXPECT_EQ(tag_word_heuristic("blorpiness"), "NN");
  EXPECT_EQ(tag_word_heuristic("zorbical"), "JJ");
  EXPECT_EQ(tag_word_heuristic("florptive"), "JJ");
  EXPECT_EQ(tag_word_heuristic("glorpous"), "JJ");
  EXPECT_EQ(tag_word_heuristic("zzyzx"), "NN");
}

TEST(PosTaggerTest, PluralOfANounIsNns) {
  EXPECT_EQ(tag_word_heuristic("itemsets"), "NNS");
  EXPECT_EQ(tag_word_heuristic("zorbifications"), "NNS");
  EXPECT_EQ(tag_word_heuristic("networks"), "NNS");
}

TEST(PosTaggerTest, LexiconEntries) {
  EXPECT_EQ(lexicon_size(), 5000u);
  EXPECT_EQ(tag_word_heuristic("are"), "VBP");
  EXPECT_EQ(tag_word_heuristic("the"), "DT");
  EXPECT_EQ(tag_word_heuristic("The"), "DT");
  EXPECT_EQ(tag_word_heuristic("frequent"), "JJ");
}

TEST(PosTaggerTest, NumbersAndPunctuation) {
  EXPECT_EQ(tag_word_heuristic("3.5"), "CD");
  EXPECT_EQ(tag_word_heuristic(","), "SYM");
}

TEST(PosTaggerTest, FrequentItemsetsIsACandidateSpan) {
  const auto tags = tag_pos_heuristic({"pruning", "frequent", "itemsets"});
  ASSERT_EQ(tags.size(), 3u);
  // "frequent itemsets" must satisfy the candidate pattern on its own.
  const auto matches = match_candidate_pattern({tags[1], tags[2]});
  ASSERT_EQ(matches.size(), 1u);
  EXPECT_EQ(matches[0].start_word, 0u);
  EXPECT_EQ(matches[0].end_word, 2u);
}

TEST(PosTaggerTest, Deterministic) {
  const std::vector<std::string> words = {"Deep", "learning", "models", "are", "trained", "efficiently"};
  EXPECT_EQ(tag_pos_heuristic(words), tag_pos_heuristic(words));
}
