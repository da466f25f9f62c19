#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mderank/corpus.hpp"

namespace mderank {

/// Half-open word range [start_word, end_word) of one candidate occurrence.
struct Occurrence {
  std::size_t start_word = 0;
  std::size_t end_word = 0;

  [[nodiscard]] std::size_t length() const { return end_word - start_word; }
  friend auto operator<=>(const Occurrence&, const Occurrence&) = default;
};

/// A candidate keyphrase: its lowercased words plus every occurrence.
struct Candidate {
  std::vector<std::string> phrase_words;  // lowercased
  std::vector<Occurrence> occurrences;    // ascending, non-overlapping
  std::string surface;                    // words of the first occurrence as written

  [[nodiscard]] std::size_t first_occurrence_index() const { return occurrences.front().start_word; }
  /// Lowercased words joined by single spaces; the candidate's identity.
  [[nodiscard]] std::string phrase() const;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

inline std::size_t candidate_phrase_length(const Candidate& c) { return c.phrase_words.size(); }

/// True for tags the candidate pattern treats as nominal (NN, NNS, NNP, ...).
bool is_noun_tag(std::string_view tag);

/// Maximal matches of `<NN.*|JJ>*<NN.*>` over the tag sequence, as
/// half-open word ranges in scan order. Each maximal run of NN*/JJ tags yields
/// one match ending at the run's last NN* tag.
std::vector<Occurrence> match_candidate_pattern(const std::vector<std::string>& tags);

/// Candidate selection: pattern matches merged by lowercased phrase, ordered
/// by first occurrence.
std::vector<Candidate> extract_candidates(const Document& doc);

}  // namespace mderank
