#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mderank/corpus.hpp"
#include "mderank/error.hpp"
#include "test_support.hpp"

using namespace mderank;

namespace {

DatasetSplit parse(const std::string& text) {
  std::istringstream in(text);
  return parse_jsonl(in);
}

}  // namespace

TEST(CorpusTest, TaggedTokensMapDirectly) {
  const auto split = parse(
      R"({"id":"d1","tokens":[{"w":"efficient","pos":"JJ"},{"w":"algorithms","pos":"NNS"}],"keyphrases":["efficient algorithms"]})");
  ASSERT_EQ(split.documents.size(), 1u);
  const Document& d = split.documents[0];
  EXPECT_EQ(d.id, "d1");
  ASSERT_EQ(d.words.size(), 2u);
  EXPECT_EQ(d.words[0].surface, "efficient");
  EXPECT_EQ(d.words[1].pos_tag, "NNS");
  EXPECT_EQ(d.raw_text, "efficient algorithms");
  ASSERT_TRUE(d.gold_keyphrases);
  EXPECT_EQ(*d.gold_keyphrases, std::vector<std::string>{"efficient algorithms"});
}

TEST(CorpusTest, MissingIdNamesTheLine) {
  try {
    parse(R"({"tokens":[{"w":"x","pos":"NN"}]})");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_STREQ(e.what(), "missing field id at line 1");
  }
}

TEST(CorpusTest, MalformedLaterLineNamesItsNumber) {
  try {
    parse("{\"id\":\"a\",\"text\":\"graph\"}\n{not json\n");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("at line 2"), std::string::npos) << e.what();
  }
}

TEST(CorpusTest, EmptyFileIsAnError) {
  EXPECT_THROW(parse(""), FormatError);
  EXPECT_THROW(parse("\n  \n"), FormatError);
}

TEST(CorpusTest, TextOnlyLinesAreTokenizedAndTagged) {
  const auto split = parse(R"({"id":"t","text":"Graph mining quickly finds frequent itemsets."})");
  const Document& d = split.documents[0];
  ASSERT_EQ(d.words.size(), 7u);
  EXPECT_EQ(d.words[2].surface, "quickly");
  EXPECT_EQ(d.words[2].pos_tag, "RB");
  EXPECT_EQ(d.words.back().surface, ".");
  EXPECT_FALSE(d.gold_keyphrases);
}

TEST(CorpusTest, TokenizerKeepsInnerHyphensApostrophesAndDecimals) {
  std::vector<std::string> got;
  for (const auto& t : tokenize_text("real-time (don't) 3.5 GHz, end-")) got.push_back(t.text);
  const std::vector<std::string> want = {"real-time", "(", "don't", ")", "3.5", "GHz", ",", "end", "-"};
  EXPECT_EQ(got, want);
}

TEST(CorpusTest, MakeWordRejectsEmptyParts) {
  EXPECT_THROW(make_word("", "NN", 0, 1), PreconditionError);
  EXPECT_THROW(make_word("x", "", 0, 1), PreconditionError);
  EXPECT_THROW(make_word("x", "NN", 1, 1), PreconditionError);
}

TEST(CorpusTest, TagsAreNormalized) {
  EXPECT_EQ(normalize_pos_tag("nn"), "NN");
  EXPECT_EQ(normalize_pos_tag("PRP$"), "PRPS");
  EXPECT_EQ(normalize_pos_tag(","), "SYM");
  EXPECT_EQ(normalize_pos_tag("-LRB-"), "SYM");
}

TEST(CorpusTest, TruncatedKeepsLeadingWords) {
  const Document d = document_from_text("x", "alpha beta gamma delta");
  const Document t = d.truncated(2);
  ASSERT_EQ(t.words.size(), 2u);
  EXPECT_EQ(t.raw_text, "alpha beta");
  EXPECT_EQ(d.truncated(10), d);
}

TEST(CorpusTest, SplitNamesFromPaths) {
  EXPECT_EQ(split_name_from_path("data/Inspec.jsonl"), "inspec");
  EXPECT_EQ(split_name_from_path("/x/nus.jsonl"), "nus");
  EXPECT_EQ(split_name_from_path("mine.jsonl"), "custom");
}

TEST(CorpusTest, AverageWordsAndLabelling) {
  DatasetSplit s;
  s.documents.push_back(document_from_text("a", "one two", std::vector<std::string>{"one"}));
  s.documents.push_back(document_from_text("b", "one two three four"));
  EXPECT_DOUBLE_EQ(s.average_words_per_document(), 3.0);
  EXPECT_FALSE(s.fully_labelled());
  s.documents[1].gold_keyphrases = std::vector<std::string>{"four"};
  EXPECT_TRUE(s.fully_labelled());
}

TEST(CorpusTest, JsonlRoundTripIsIdentity) {
  SplitMix64 rng(11);
  DatasetSplit split;
  for (int i = 0; i < 50; ++i) {
    Document d = fixtures::random_doc(rng, "doc" + std::to_string(i), 1, 30);
    if (i % 3 == 0) d.gold_keyphrases = std::vector<std::string>{"graph", "neural network"};
    split.documents.push_back(d);
  }
  split.documents.push_back(document_from_text("txt", "  Odd   spacing,\there; and \"quotes\" \xc3\xa9t\xc3\xa9."));
  std::ostringstream out;
  write_jsonl(split, out);
  std::istringstream in(out.str());
  const auto back = parse_jsonl(in);
  ASSERT_EQ(back.documents.size(), split.documents.size());
  for (std::size_t i = 0; i < back.documents.size(); ++i) EXPECT_EQ(back.documents[i], split.documents[i]) << i;
}

TEST(CorpusTest, SpansReconstructSurfaces) {
  SplitMix64 rng(5);
  const std::string alphabet = "ab -,.'x\t1\xc3\xa9";
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    const std::size_t len = 1 + rng.below(40);
    for (std::size_t i = 0; i < len; ++i) text += alphabet[rng.below(alphabet.size())];
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    const Document d = document_from_text("p", text);
    std::string from_spans, from_surfaces, stripped;
    for (const auto& w : d.words) {
      from_spans += d.raw_text.substr(w.char_start, w.char_end - w.char_start);
      from_surfaces += w.surface;
    }
    EXPECT_EQ(from_spans, from_surfaces) << text;
    for (char c : text)
      if (c != ' ' && c != '\t') stripped += c;
    EXPECT_EQ(from_surfaces, stripped) << text;
    EXPECT_NO_THROW(validate_document(d));
  }
}

TEST(CorpusTest, ConvertsRawBenchmarkLayout) {
  const auto dir = std::filesystem::temp_directory_path() / "mderank_convert_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir / "docs");
  std::filesystem::create_directories(dir / "keys");
  std::ofstream(dir / "docs" / "b.txt") << "Bayesian networks\nfor inference.";
  std::ofstream(dir / "keys" / "b.key") << "bayesian networks\ninference\n";
  std::ofstream(dir / "docs" / "a.abstr") << "Graph mining.";
  std::ofstream(dir / "keys" / "a.key") << "graph mining\n";
  const auto split = convert_raw_benchmark(dir / "docs", dir / "keys", "inspec");
  ASSERT_EQ(split.documents.size(), 2u);
  EXPECT_EQ(split.name, "inspec");
  EXPECT_EQ(split.documents[0].id, "a");
  EXPECT_EQ(split.documents[1].raw_text, "Bayesian networks for inference.");
  EXPECT_EQ(*split.documents[1].gold_keyphrases, (std::vector<std::string>{"bayesian networks", "inference"}));
  std::filesystem::remove_all(dir);
}
