#include "mderank/mderank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "mderank/error.hpp"
#include "mderank/text.hpp"

namespace mderank {

std::string_view to_string(MaskStrategy s) {
  switch (s) {
    case MaskStrategy::kMaskAll:
      return "mask_all";
    case MaskStrategy::kMaskOnce:
      return "mask_once";
    case MaskStrategy::kMaskHighest:
      return "mask_highest";
    case MaskStrategy::kMaskSubset:
      return "mask_subset";
  }
  return "mask_all";
}

std::string_view to_string(SimilarityMeasure m) { return m == SimilarityMeasure::kCosine ? "cosine" : "euclidean"; }

MaskStrategy parse_mask_strategy(std::string_view s) {
  if (s == "mask_all") return MaskStrategy::kMaskAll;
  if (s == "mask_once") return MaskStrategy::kMaskOnce;
  if (s == "mask_highest") return MaskStrategy::kMaskHighest;
  if (s == "mask_subset") return MaskStrategy::kMaskSubset;
  throw PreconditionError("unknown mask strategy '" + std::string(s) + "'");
}

SimilarityMeasure parse_similarity(std::string_view s) {
  if (s == "cosine") return SimilarityMeasure::kCosine;
  if (s == "euclidean") return SimilarityMeasure::kEuclidean;
  throw PreconditionError("unknown similarity measure '" + std::string(s) + "'");
}

void sort_ranked(std::vector<RankedEntry>& entries, ScoreOrder order) {
  std::sort(entries.begin(), entries.end(), [order](const RankedEntry& a, const RankedEntry& b) {
    if (a.score != b.score) return order == ScoreOrder::kAscending ? a.score < b.score : a.score > b.score;
    const auto fa = a.candidate.first_occurrence_index();
    const auto fb = b.candidate.first_occurrence_index();
    if (fa != fb) return fa < fb;
    const auto la = a.candidate.phrase_words.size();
    const auto lb = b.candidate.phrase_words.size();
    if (la != lb) return la < lb;
    return a.candidate.phrase_words < b.candidate.phrase_words;
  });
}

MaskPlan build_masked(std::size_t doc_length, const Candidate& c, MaskStrategy strategy, MaskFlags& prior_masked) {
  MaskPlan plan;
  auto mark = [&](MaskFlags& flags, const Occurrence& occ) {
    if (occ.end_word > doc_length || occ.start_word >= occ.end_word)
      throw PreconditionError("occurrence of '" + c.phrase() + "' lies outside the document window");
    for (std::size_t w = occ.start_word; w < occ.end_word; ++w) flags[w] = true;
  };
  switch (strategy) {
    case MaskStrategy::kMaskAll: {
      MaskFlags flags(doc_length, false);
      for (const auto& occ : c.occurrences) mark(flags, occ);
      plan.variants.push_back(std::move(flags));
      break;
    }
    case MaskStrategy::kMaskOnce: {
      MaskFlags flags(doc_length, false);
      mark(flags, c.occurrences.front());
      plan.variants.push_back(std::move(flags));
      break;
    }
    case MaskStrategy::kMaskHighest:
      for (const auto& occ : c.occurrences) {
        MaskFlags flags(doc_length, false);
        mark(flags, occ);
        plan.variants.push_back(std::move(flags));
      }
      break;
    case MaskStrategy::kMaskSubset: {
      if (prior_masked.size() != doc_length) throw PreconditionError("prior_masked must cover the document");
      MaskFlags all(doc_length, false);
      for (const auto& occ : c.occurrences) mark(all, occ);
      MaskFlags flags(doc_length, false);
      bool any = false;
      for (std::size_t w = 0; w < doc_length; ++w) {
        if (all[w] && !prior_masked[w]) {
          flags[w] = true;
          prior_masked[w] = true;
          any = true;
        }
      }
      if (any) {
        plan.variants.push_back(std::move(flags));
      } else {
        plan.skip_reason = "every word of '" + c.phrase() + "' is already masked by a longer candidate";
      }
      break;
    }
  }
  return plan;
}

std::vector<MaskPlan> plan_masks(std::size_t doc_length, const std::vector<Candidate>& cands, MaskStrategy strategy) {
  std::vector<MaskPlan> plans(cands.size());
  std::vector<std::size_t> order(cands.size());
  std::iota(order.begin(), order.end(), 0);
  if (strategy == MaskStrategy::kMaskSubset) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (cands[a].phrase_words.size() != cands[b].phrase_words.size())
        return cands[a].phrase_words.size() > cands[b].phrase_words.size();
      return cands[a].first_occurrence_index() < cands[b].first_occurrence_index();
    });
  }
  MaskFlags prior(doc_length, false);
  for (std::size_t i : order) plans[i] = build_masked(doc_length, cands[i], strategy, prior);
  return plans;
}

double similarity(const std::vector<double>& a, const std::vector<double>& b, SimilarityMeasure measure) {
  if (a.size() != b.size()) throw PreconditionError("similarity of vectors with different dimensions");
  if (measure == SimilarityMeasure::kEuclidean) {
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
    return -std::sqrt(sq);
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  // Fully masked input embeds to the zero vector: treat as maximal change.
  if (na == 0.0 || nb == 0.0) return -1.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

Document embedder_view(const Document& doc, const Embedder& embedder) {
  const auto surfaces = doc.surfaces();
  return doc.truncated(embedder.visible_word_count(embedder.tokenize(surfaces)));
}

RankedKeyphrases mde_rank(const Document& doc, const std::vector<Candidate>& cands, const Embedder& embedder,
                          MaskStrategy strategy, SimilarityMeasure measure) {
  RankedKeyphrases out;
  out.method = "mderank";
  out.order = ScoreOrder::kAscending;
  out.strategy = strategy;
  out.measure = measure;
  if (cands.empty()) return out;

  const auto surfaces = doc.surfaces();
  const TokenizedWords words = embedder.tokenize(surfaces);
  const std::size_t n = surfaces.size();
  const std::vector<double> original = embedder.embed(words, MaskFlags(n, false)).vector;

  const std::vector<MaskPlan> plans = plan_masks(n, cands, strategy);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const MaskPlan& plan = plans[i];
    if (plan.skip_reason) {
      out.skipped.push_back({cands[i], *plan.skip_reason});
      continue;
    }
    double score = 0.0;
    for (std::size_t v = 0; v < plan.variants.size(); ++v) {
      const double s = similarity(original, embedder.embed(words, plan.variants[v]).vector, measure);
      score = v == 0 ? s : std::min(score, s);
    }
    out.entries.push_back({cands[i], score});
  }
  sort_ranked(out.entries, out.order);
  return out;
}

RankedKeyphrases embed_rank(const Document& doc, const std::vector<Candidate>& cands, const Embedder& embedder,
                            SimilarityMeasure measure) {
  RankedKeyphrases out;
  out.method = "embedrank";
  out.order = ScoreOrder::kDescending;
  out.measure = measure;
  if (cands.empty()) return out;

  const auto surfaces = doc.surfaces();
  const std::vector<double> document = embedder.embed(surfaces, MaskFlags(surfaces.size(), false)).vector;
  for (const auto& c : cands) {
    const auto phrase = embedder.embed(c.phrase_words, MaskFlags(c.phrase_words.size(), false)).vector;
    out.entries.push_back({c, similarity(phrase, document, measure)});
  }
  sort_ranked(out.entries, out.order);
  return out;
}

std::vector<RankedEntry> top_k_entries(const RankedKeyphrases& ranked, std::size_t k) {
  if (k < 1) throw PreconditionError("top_k needs k >= 1");
  std::vector<RankedEntry> out;
  std::unordered_set<std::string> seen;
  for (const auto& e : ranked.entries) {
    if (out.size() >= k) break;
    if (seen.insert(stem_phrase(e.candidate.phrase())).second) out.push_back(e);
  }
  return out;
}

std::vector<std::string> top_k(const RankedKeyphrases& ranked, std::size_t k) {
  std::vector<std::string> out;
  for (const auto& e : top_k_entries(ranked, k)) out.push_back(e.candidate.phrase());
  return out;
}

}  // namespace mderank
