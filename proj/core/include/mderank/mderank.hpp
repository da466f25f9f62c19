#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mderank/candidates.hpp"
#include "mderank/corpus.hpp"
#include "mderank/embedder.hpp"

namespace mderank {

enum class MaskStrategy { kMaskAll, kMaskOnce, kMaskHighest, kMaskSubset };
enum class SimilarityMeasure { kCosine, kEuclidean };
enum class ScoreOrder { kAscending, kDescending };

std::string_view to_string(MaskStrategy s);
std::string_view to_string(SimilarityMeasure m);
MaskStrategy parse_mask_strategy(std::string_view s);
SimilarityMeasure parse_similarity(std::string_view s);

struct RankedEntry {
  Candidate candidate;
  double score = 0.0;
};

struct SkippedCandidate {
  Candidate candidate;
  std::string reason;
};

/// Candidates in ranking order, best first. `order` says how scores relate
/// to rank: ascending for MDERank similarities and yake_lite, descending for
/// EmbedRank and TextRank.
struct RankedKeyphrases {
  std::string method;
  std::vector<RankedEntry> entries;
  ScoreOrder order = ScoreOrder::kAscending;
  MaskStrategy strategy = MaskStrategy::kMaskAll;
  SimilarityMeasure measure = SimilarityMeasure::kCosine;
  std::vector<SkippedCandidate> skipped;
};

/// Sorts by score in `order`; ties go to the earlier first occurrence, then
/// the shorter phrase, then the lexicographically smaller phrase.
void sort_ranked(std::vector<RankedEntry>& entries, ScoreOrder order);

/// Mask flags for one candidate. One vector for mask_all, mask_once and
/// mask_subset; one per occurrence for mask_highest. A mask_subset candidate
/// whose words are all in `prior_masked` gets no vector and a skip reason.
struct MaskPlan {
  std::vector<MaskFlags> variants;
  std::optional<std::string> skip_reason;
};

/// Builds the masked variants of `c` over a document of `doc_length` words.
/// Under mask_subset only words absent from `prior_masked` are masked and the
/// newly masked positions are added to it; other strategies ignore it.
/// `prior_masked` must have doc_length entries.
MaskPlan build_masked(std::size_t doc_length, const Candidate& c, MaskStrategy strategy, MaskFlags& prior_masked);

/// Plans for every candidate, index-aligned with `cands`. mask_subset visits
/// candidates longest phrase first (ties by first occurrence) and accumulates
/// the masked positions.
std::vector<MaskPlan> plan_masks(std::size_t doc_length, const std::vector<Candidate>& cands, MaskStrategy strategy);

/// Cosine similarity, or the negated Euclidean distance, so that a smaller
/// value always means "further apart". Cosine with a zero vector is -1.
double similarity(const std::vector<double>& a, const std::vector<double>& b, SimilarityMeasure measure);

/// The slice of `doc` the embedder sees: the leading words whose pieces fit.
Document embedder_view(const Document& doc, const Embedder& embedder);

/// Masked-document ranking. score(c) = similarity(E(d), E(d masked at c)),
/// the minimum over variants for mask_highest; sorted ascending. `cands`
/// must come from extract_candidates on the same (already windowed) doc.
RankedKeyphrases mde_rank(const Document& doc, const std::vector<Candidate>& cands, const Embedder& embedder,
                          MaskStrategy strategy, SimilarityMeasure measure);

/// Phrase-document baseline: score(c) = similarity(E(phrase alone), E(d)),
/// sorted descending.
RankedKeyphrases embed_rank(const Document& doc, const std::vector<Candidate>& cands, const Embedder& embedder,
                            SimilarityMeasure measure);

/// First min(k, n) phrases after dropping entries whose stemmed phrase was
/// already seen at a better rank. Throws PreconditionError when k < 1.
std::vector<std::string> top_k(const RankedKeyphrases& ranked, std::size_t k);

/// The entries behind top_k, scores included.
std::vector<RankedEntry> top_k_entries(const RankedKeyphrases& ranked, std::size_t k);

}  // namespace mderank
