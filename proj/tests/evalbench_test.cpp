#include <gtest/gtest.h>

#include <sstream>

#include "json.hpp"
#include "mderank/error.hpp"
#include "mderank/evalbench.hpp"
#include "properties.hpp"
#include "test_support.hpp"

using namespace mderank;
using namespace mderank::fixtures;

namespace {

DatasetSplit synthetic_split(std::size_t n_docs, std::uint64_t seed, std::size_t max_words = 60) {
  SplitMix64 rng(seed);
  DatasetSplit split;
  split.name = "synthetic";
  for (std::size_t i = 0; i < n_docs; ++i) {
    Document d = random_doc(rng, "s" + std::to_string(i), 10, max_words);
    const auto cands = extract_candidates(d);
    std::vector<std::string> gold;
    for (std::size_t c = 0; c < cands.size() && gold.size() < 4; c += 2) gold.push_back(cands[c].phrase());
    if (gold.empty()) gold.push_back("unmatched gold phrase");
    d.gold_keyphrases = gold;
    split.documents.push_back(std::move(d));
  }
  return split;
}

MethodSpec method(RankMethod m) {
  MethodSpec s;
  s.method = m;
  return s;
}

}  // namespace

TEST(F1Test, WorkedExampleAndRandomCasesMatchOracle) {
  const auto r = check_f1_oracle(200, 41);
  EXPECT_TRUE(r.ok()) << r.summary();
}

TEST(F1Test, PerfectAndStemmedMatches) {
  const auto perfect = f1_at_k({"graph", "data mining"}, {"data mining", "graph"}, 5);
  EXPECT_DOUBLE_EQ(perfect.f1, 1.0);
  const auto stemmed = f1_at_k({"Neural Networks"}, {"neural network"}, 5);
  EXPECT_DOUBLE_EQ(stemmed.precision, 1.0);
  EXPECT_DOUBLE_EQ(stemmed.recall, 1.0);
  const auto none = f1_at_k({}, {"graph"}, 5);
  EXPECT_EQ(none.f1, 0.0);
  EXPECT_THROW(f1_at_k({"graph"}, {}, 5), PreconditionError);
  EXPECT_THROW(f1_at_k({"graph"}, {"graph"}, 0), PreconditionError);
}

TEST(F1Test, DuplicatePredictionsDoNotFillTheCut) {
  // "networks" collapses onto "network", so "graph" still makes the top 2.
  const auto r = f1_at_k({"network", "networks", "graph"}, {"graph"}, 2);
  EXPECT_DOUBLE_EQ(r.recall, 1.0);
  EXPECT_DOUBLE_EQ(r.precision, 0.5);
}

TEST(F1PropertyTest, OrderBelowKIsIrrelevantAndRecallGrowsWithK) {
  SplitMix64 rng(43);
  const std::vector<std::string> pool = {"graph", "graphs", "data mining", "deep model", "svm", "kernel", "trees"};
  for (int c = 0; c < 300; ++c) {
    std::vector<std::string> pred, gold;
    for (std::size_t i = 0, n = rng.below(8); i < n; ++i) pred.push_back(pool[rng.below(pool.size())]);
    for (std::size_t i = 0, n = 1 + rng.below(4); i < n; ++i) gold.push_back(pool[rng.below(pool.size())]);
    auto reversed = pred;
    std::reverse(reversed.begin(), reversed.end());
    const std::size_t big = pred.size() + 1;
    EXPECT_DOUBLE_EQ(f1_at_k(pred, gold, big).f1, f1_at_k(reversed, gold, big).f1);
    double last = 0;
    for (std::size_t k = 1; k <= 8; ++k) {
      const double rec = f1_at_k(pred, gold, k).recall;
      EXPECT_GE(rec, last);
      last = rec;
    }
    const auto norm = normalize_phrases(pred);
    EXPECT_EQ(normalize_phrases(norm), norm);
  }
}

TEST(DiversityTest, CountsDistinctStemmedWords) {
  EXPECT_DOUBLE_EQ(*diversity({"neural network", "graph mining"}), 100.0);
  EXPECT_DOUBLE_EQ(*diversity({"neural network", "networks graph"}), 75.0);
  EXPECT_FALSE(diversity({}).has_value());
}

TEST(RecallByLengthTest, BucketsGoldByWordCount) {
  const auto r = recall_by_phrase_length({"graph", "support vector machine"},
                                         {"graph", "kernel", "support vector machine", "deep model"}, 15);
  EXPECT_EQ(r, (std::map<std::string, double>{{"1", 0.5}, {"2", 0.0}, {"3", 1.0}}));
  const auto long_gold = recall_by_phrase_length({}, {"large scale frequent itemset mining"}, 15);
  EXPECT_EQ(long_gold, (std::map<std::string, double>{{">3", 0.0}}));
  EXPECT_EQ(phrase_length_bucket(4), ">3");
}

TEST(EvalPropertyTest, DiversityAndRecallMatchDirectCounts) {
  const auto r = check_diversity_recall_oracles(500, 47);
  EXPECT_TRUE(r.ok()) << r.summary();
}

TEST(EvalPropertyTest, SubsetMaskingIsAtLeastAsDiverseOnNestedPhrases) {
  EXPECT_GE(nesting_diversity(MaskStrategy::kMaskSubset), nesting_diversity(MaskStrategy::kMaskAll));
}

TEST(BenchmarkTest, ScoresEveryMethodAndRecordsCounts) {
  const auto split = synthetic_split(40, 53);
  const Embedder e = bow_embedder(Pooling::kAvg);
  for (RankMethod m : {RankMethod::kMdeRank, RankMethod::kEmbedRank, RankMethod::kTextRank, RankMethod::kYakeLite}) {
    const auto metrics = run_benchmark(split, method(m), &e, BenchmarkConfig{});
    EXPECT_EQ(metrics.documents, 40u);
    EXPECT_EQ(metrics.evaluated, 40u);
    EXPECT_TRUE(metrics.errors.empty());
    ASSERT_EQ(metrics.f1_at.size(), 3u);
    for (const auto& [k, f] : metrics.f1_at) {
      EXPECT_GE(f, 0.0);
      EXPECT_LE(f, 100.0);
    }
    EXPECT_TRUE(metrics.diversity.has_value());
  }
}

TEST(BenchmarkTest, ResultsDoNotDependOnJobs) {
  const auto split = synthetic_split(30, 59);
  const Embedder e = bow_embedder(Pooling::kAvg);
  BenchmarkConfig one, many;
  many.jobs = 8;
  EvalReport a, b;
  a.per_dataset["s"] = run_benchmark(split, method(RankMethod::kMdeRank), &e, one);
  b.per_dataset["s"] = run_benchmark(split, method(RankMethod::kMdeRank), &e, many);
  finalize_report(a);
  finalize_report(b);
  EXPECT_EQ(report_to_json(a), report_to_json(b));
}

TEST(BenchmarkTest, TruncationLimitsWhatIsRanked) {
  auto split = synthetic_split(10, 61, 200);
  const Embedder e = bow_embedder(Pooling::kAvg);
  BenchmarkConfig cfg;
  cfg.max_words = 5;
  for (const auto& p : predict_split(split, method(RankMethod::kYakeLite), &e, cfg)) {
    const Document* doc = nullptr;
    for (const auto& d : split.documents)
      if (d.id == p.doc_id) doc = &d;
    ASSERT_NE(doc, nullptr);
    for (const auto& phrase : p.phrases) {
      bool inside = false;
      for (const auto& c : extract_candidates(doc->truncated(5)))
        if (c.phrase() == phrase) inside = true;
      EXPECT_TRUE(inside) << phrase;
    }
  }
}

TEST(BenchmarkTest, UnlabelledSplitIsRejected) {
  auto split = synthetic_split(3, 67);
  split.documents[1].gold_keyphrases.reset();
  EXPECT_THROW(run_benchmark(split, method(RankMethod::kYakeLite), nullptr, BenchmarkConfig{}), PreconditionError);
}

TEST(BenchmarkTest, EmbeddingMethodWithoutEmbedderIsAnError) {
  const auto split = synthetic_split(2, 71);
  std::vector<DocumentError> errors;
  const auto preds = predict_split(split, method(RankMethod::kMdeRank), nullptr, BenchmarkConfig{}, &errors);
  EXPECT_EQ(errors.size(), 2u);
  for (const auto& p : preds) EXPECT_TRUE(p.phrases.empty());
}

TEST(ScorePredictionsTest, MissingPredictionCountsAsEmptyAndEmptyGoldIsRecorded) {
  DatasetSplit split;
  split.documents.push_back(tagged_doc("a", {{"graph", "NN"}}, std::vector<std::string>{"graph"}));
  split.documents.push_back(tagged_doc("b", {{"graph", "NN"}}, std::vector<std::string>{"graph"}));
  split.documents.push_back(tagged_doc("c", {{"graph", "NN"}}, std::vector<std::string>{}));
  const auto m = score_predictions(split, {{"a", {"graph"}}}, BenchmarkConfig{});
  EXPECT_EQ(m.evaluated, 2u);
  ASSERT_EQ(m.errors.size(), 1u);
  EXPECT_EQ(m.errors[0].doc_id, "c");
  EXPECT_DOUBLE_EQ(m.f1_at.at(5), 50.0);
  EXPECT_DOUBLE_EQ(m.recall_at.at(5), 50.0);
}

TEST(ReportTest, FormatsCarryTheSameNumbers) {
  DatasetSplit split;
  split.name = "toy";
  split.documents.push_back(tagged_doc("a", {{"graph", "NN"}}, std::vector<std::string>{"graph", "kernel"}));
  EvalReport report;
  report.per_dataset["toy"] = score_predictions(split, {{"a", {"graph", "tree"}}}, BenchmarkConfig{});
  report.config["method"] = "mderank";
  finalize_report(report);
  EXPECT_DOUBLE_EQ(report.averages.at(5), 50.0);

  const auto j = nlohmann::json::parse(report_to_json(report));
  EXPECT_DOUBLE_EQ(j["per_dataset"]["toy"]["f1_at"]["5"].get<double>(), 50.0);
  EXPECT_EQ(j["config"]["method"], "mderank");
  EXPECT_EQ(j["per_dataset"]["toy"]["documents"], 1);

  const std::string table = report_to_table(report);
  EXPECT_NE(table.find("F1@5"), std::string::npos);
  EXPECT_NE(table.find("50.00"), std::string::npos);
  EXPECT_NE(table.find("AVG"), std::string::npos);
  EXPECT_NE(table.find("1/1"), std::string::npos);

  const std::string csv = report_to_csv(report);
  EXPECT_EQ(csv.rfind("dataset,metric,key,value\n", 0), 0u);
  EXPECT_NE(csv.find("toy,f1,5,50.000000"), std::string::npos) << csv;
}

TEST(ReadPredictionsTest, AcceptsStringsAndScoredObjects) {
  std::istringstream in(
      "{\"id\":\"a\",\"keyphrases\":[\"graph\",\"tree\"]}\n"
      "\n"
      "{\"id\":\"b\",\"method\":\"mderank\",\"keyphrases\":[{\"phrase\":\"kernel\",\"score\":0.5}]}\n");
  const auto preds = read_predictions(in);
  ASSERT_EQ(preds.size(), 2u);
  EXPECT_EQ(preds[0].phrases, (std::vector<std::string>{"graph", "tree"}));
  EXPECT_EQ(preds[1].phrases, (std::vector<std::string>{"kernel"}));
  std::istringstream bad("{\"keyphrases\":[]}\n");
  EXPECT_THROW(read_predictions(bad), FormatError);
}

TEST(RankMethodTest, NamesAndEmbedderNeeds) {
  EXPECT_EQ(parse_rank_method("embedrank"), RankMethod::kEmbedRank);
  EXPECT_TRUE(needs_embedder(RankMethod::kMdeRank));
  EXPECT_FALSE(needs_embedder(RankMethod::kTextRank));
  EXPECT_THROW(parse_rank_method("rake"), PreconditionError);
}
