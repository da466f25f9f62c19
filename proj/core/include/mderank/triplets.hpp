#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mderank/candidates.hpp"
#include "mderank/corpus.hpp"
#include "mderank/pseudo_labelers.hpp"

namespace mderank {

enum class Sampling { kAbsolute, kRelative };

std::string_view to_string(Sampling s);
Sampling parse_sampling(std::string_view s);

/// Pseudo-label list length used when none is given: 10 for absolute
/// sampling, 20 for relative sampling.
int default_pseudo_top_n(Sampling s);

/// An (anchor, positive, negative) training example. The anchor is the
/// plain document; the positive masks a pseudo keyphrase, the negative a
/// phrase judged less important. Masks are word ranges into anchor_words.
struct TripletExample {
  std::string doc_id;
  std::vector<std::string> anchor_words;
  std::vector<Occurrence> positive_mask;
  std::vector<Occurrence> negative_mask;
  std::string positive_phrase;
  std::string negative_phrase;
  Sampling sampling = Sampling::kAbsolute;
  std::string theta;

  friend bool operator==(const TripletExample&, const TripletExample&) = default;
};

struct TripletOptions {
  int n_triplets = 4;
  std::uint64_t seed = 0;
  bool single_occurrence = false;  // mask only the first occurrence
  std::string theta = "yake_lite";
};

/// Triplets for one document, or the reason it was skipped.
struct TripletBatch {
  std::vector<TripletExample> triplets;
  std::optional<std::string> skip_reason;
};

/// Positive drawn uniformly from the pseudo keyphrases C', negative drawn
/// uniformly from the remaining candidates, independently per triplet.
/// Skipped when C' or C minus C' is empty. `pseudo` holds phrases as
/// returned by Candidate::phrase(); entries that are not candidates are
/// ignored.
TripletBatch sample_absolute(const Document& doc, const std::vector<Candidate>& cands,
                             const std::vector<std::string>& pseudo, const TripletOptions& opts);

/// Distinct unordered pairs of pseudo keyphrases drawn uniformly without
/// replacement (at most |pairs| triplets); the better-ranked member is the
/// positive. Skipped when fewer than two pseudo keyphrases are candidates.
TripletBatch sample_relative(const Document& doc, const std::vector<Candidate>& cands,
                             const std::vector<std::string>& pseudo, const TripletOptions& opts);

struct TripletRunConfig {
  Sampling sampling = Sampling::kAbsolute;
  PseudoLabelConfig theta;  // top_n is overridden by pseudo_top_n
  std::optional<int> pseudo_top_n;
  TripletOptions options;
};

/// Extracts candidates, ranks them with the pseudo-labeler and samples triplets.
TripletBatch make_triplets(const Document& doc, const TripletRunConfig& cfg);

/// Checks a triplet against its own anchor: masks are in bounds, sorted and
/// non-overlapping, every masked span spells its phrase, and the phrases
/// differ. Throws FormatError.
void validate_triplet(const TripletExample& t);

/// One JSON object per line:
///   {"doc_id", "words", "pos_mask": [[s,e],...], "neg_mask": [[s,e],...],
///    "pos_phrase", "neg_phrase", "sampling", "theta"}
std::string to_jsonl_line(const TripletExample& t);
TripletExample parse_triplet_line(std::string_view line);
std::vector<TripletExample> read_triplets(std::istream& in);

}  // namespace mderank
