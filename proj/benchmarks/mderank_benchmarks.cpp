#include <benchmark/benchmark.h>

#include <string>
#include <utility>
#include <vector>

#include "mderank/candidates.hpp"
#include "mderank/corpus.hpp"
#include "mderank/embedder.hpp"
#include "mderank/mderank.hpp"
#include "mderank/pseudo_labelers.hpp"
#include "mderank/rng.hpp"
#include "mderank/text.hpp"

using namespace mderank;

namespace {

Document synthetic_doc(std::size_t n_words, std::uint64_t seed) {
  static const std::vector<std::pair<std::string, std::string>> kPool = {
      {"network", "NN"}, {"networks", "NNS"}, {"graph", "NN"},   {"model", "NN"},     {"data", "NNS"},
      {"mining", "NN"},  {"neural", "JJ"},    {"deep", "JJ"},    {"efficient", "JJ"}, {"the", "DT"},
      {"of", "IN"},      {"for", "IN"},       {"is", "VBZ"},     {"uses", "VBZ"},     {"and", "CC"},
      {"itemsets", "NNS"}, {"frequent", "JJ"}, {"vector", "NN"}, {"machine", "NN"},   {"kernel", "NN"}};
  SplitMix64 rng(seed);
  Document d;
  d.id = "bench";
  for (std::size_t i = 0; i < n_words; ++i) {
    const auto& [w, t] = kPool[rng.below(kPool.size())];
    if (!d.raw_text.empty()) d.raw_text += ' ';
    const std::size_t start = d.raw_text.size();
    d.raw_text += w;
    d.words.push_back(make_word(w, t, start, d.raw_text.size()));
  }
  return d;
}

Embedder bow_embedder() {
  EmbedderConfig cfg;
  cfg.backend = BackendKind::kTestBow;
  cfg.pooling = Pooling::kAvg;
  return Embedder::from_config(cfg);
}

void BM_PorterStem(benchmark::State& state) {
  const std::vector<std::string> words = {"relational", "conditional", "generalizations", "hopefulness",
                                          "networks",   "mining",      "electrical",      "adjustable"};
  for (auto _ : state)
    for (const auto& w : words) benchmark::DoNotOptimize(porter_stem(w));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(words.size()));
}
BENCHMARK(BM_PorterStem);

void BM_ExtractCandidates(benchmark::State& state) {
  const Document doc = synthetic_doc(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(extract_candidates(doc));
}
BENCHMARK(BM_ExtractCandidates)->Arg(128)->Arg(512);

void BM_MdeRankBow(benchmark::State& state) {
  const Document doc = synthetic_doc(static_cast<std::size_t>(state.range(0)), 2);
  const auto cands = extract_candidates(doc);
  const Embedder e = bow_embedder();
  for (auto _ : state)
    benchmark::DoNotOptimize(mde_rank(doc, cands, e, MaskStrategy::kMaskAll, SimilarityMeasure::kCosine));
  state.counters["candidates"] = static_cast<double>(cands.size());
}
BENCHMARK(BM_MdeRankBow)->Arg(128)->Arg(512);

void BM_MdeRankTinyBert(benchmark::State& state) {
  EmbedderConfig cfg;
  cfg.backend = BackendKind::kTransformer;
  cfg.model_path = MDERANK_TINY_MODEL_DIR;
  cfg.layer = 3;
  cfg.max_pieces = 32;
  const Embedder e = Embedder::from_config(cfg);
  const Document doc = embedder_view(synthetic_doc(30, 3), e);
  const auto cands = extract_candidates(doc);
  for (auto _ : state)
    benchmark::DoNotOptimize(mde_rank(doc, cands, e, MaskStrategy::kMaskAll, SimilarityMeasure::kCosine));
}
BENCHMARK(BM_MdeRankTinyBert);

void BM_TextRank(benchmark::State& state) {
  const Document doc = synthetic_doc(static_cast<std::size_t>(state.range(0)), 4);
  const auto cands = extract_candidates(doc);
  PseudoLabelConfig cfg;
  cfg.method = PseudoLabelMethod::kTextRank;
  for (auto _ : state) benchmark::DoNotOptimize(textrank_score(doc, cands, cfg));
}
BENCHMARK(BM_TextRank)->Arg(128)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
