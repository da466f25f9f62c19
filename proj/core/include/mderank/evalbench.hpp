#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mderank/corpus.hpp"
#include "mderank/embedder.hpp"
#include "mderank/mderank.hpp"
#include "mderank/pseudo_labelers.hpp"

namespace mderank {

/// Precision, recall and F1 as fractions in [0, 1].
struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Lowercased, word-wise Porter-stemmed, space-joined phrases, duplicates
/// removed keeping the first.
std::vector<std::string> normalize_phrases(const std::vector<std::string>& phrases);

/// Stemmed exact-match P/R/F1 of the first k deduplicated predictions.
/// Precision divides by the size of the cut (which may be below k).
/// Throws PreconditionError on empty gold or k < 1.
PrecisionRecall f1_at_k(const std::vector<std::string>& predicted, const std::vector<std::string>& gold,
                        std::size_t k);

/// 100 * distinct stemmed words / total words over the given phrases;
/// nullopt for an empty list.
std::optional<double> diversity(const std::vector<std::string>& predicted);

/// Phrase-length buckets "1", "2", "3" and ">3".
std::string phrase_length_bucket(std::size_t words);

/// Recall per gold phrase-length bucket of the first k deduplicated
/// predictions, as fractions. Buckets without gold phrases are absent.
std::map<std::string, double> recall_by_phrase_length(const std::vector<std::string>& predicted,
                                                      const std::vector<std::string>& gold, std::size_t k = 15);

enum class RankMethod { kMdeRank, kEmbedRank, kTextRank, kYakeLite };

std::string_view to_string(RankMethod m);
RankMethod parse_rank_method(std::string_view s);
bool needs_embedder(RankMethod m);

struct MethodSpec {
  RankMethod method = RankMethod::kMdeRank;
  MaskStrategy strategy = MaskStrategy::kMaskAll;
  SimilarityMeasure measure = SimilarityMeasure::kCosine;
  PseudoLabelConfig pseudo;  // for textrank / yake_lite
};

/// Full ranking pipeline for one document: keep the first `max_words` words
/// (if set), then for embedding methods the words the embedder can see,
/// extract candidates and rank them. `embedder` may be null for graph and
/// statistical methods.
RankedKeyphrases rank_document(const Document& doc, const MethodSpec& spec, const Embedder* embedder,
                               std::optional<std::size_t> max_words = std::nullopt);

struct DocumentPrediction {
  std::string doc_id;
  std::vector<std::string> phrases;  // best first
};

struct DocumentError {
  std::string doc_id;
  std::string message;
};

/// Metrics of one split, percent scale, macro-averaged over the documents
/// that were scored.
struct DatasetMetrics {
  std::map<int, double> f1_at;
  std::map<int, double> precision_at;
  std::map<int, double> recall_at;
  std::optional<double> diversity;
  std::map<std::string, double> recall_by_pl;
  std::size_t documents = 0;
  std::size_t evaluated = 0;
  std::vector<DocumentError> errors;
};

struct EvalReport {
  std::map<std::string, DatasetMetrics> per_dataset;
  std::map<int, double> averages;  // mean F1@K over datasets
  std::map<std::string, std::string> config;
};

struct BenchmarkConfig {
  std::vector<int> ks = {5, 10, 15};
  std::optional<std::size_t> max_words;
  int jobs = 1;
  std::size_t recall_pl_k = 15;
};

/// Scores predictions against the split's gold keyphrases. Predictions are
/// matched by document id; a document without a prediction counts as an
/// empty one. Diversity uses the top max(ks) phrases. Per-document failures
/// (for example an empty gold list) are recorded and skipped.
DatasetMetrics score_predictions(const DatasetSplit& split, const std::vector<DocumentPrediction>& predictions,
                                 const BenchmarkConfig& cfg);

/// Ranks every document (up to max(ks) stem-deduplicated phrases each).
/// Order follows the split regardless of cfg.jobs. Documents that fail are
/// returned with an error message and no phrases.
std::vector<DocumentPrediction> predict_split(const DatasetSplit& split, const MethodSpec& spec,
                                              const Embedder* embedder, const BenchmarkConfig& cfg,
                                              std::vector<DocumentError>* errors = nullptr);

/// predict_split followed by score_predictions. Throws PreconditionError if
/// some document has no gold keyphrases.
DatasetMetrics run_benchmark(const DatasetSplit& split, const MethodSpec& spec, const Embedder* embedder,
                             const BenchmarkConfig& cfg);

/// Fills `averages` from per_dataset.
void finalize_report(EvalReport& report);

std::string report_to_json(const EvalReport& report);
/// Aligned text table: one row per dataset, F1@K columns, then AVG.
std::string report_to_table(const EvalReport& report);
std::string report_to_csv(const EvalReport& report);

/// Prediction files: {"id", "keyphrases": [..] or [{"phrase", "score"}, ..]}
/// per line; extract output is accepted as is.
std::vector<DocumentPrediction> read_predictions(std::istream& in);

}  // namespace mderank
