#include "mderank/candidates.hpp"

#include <unordered_map>

#include "mderank/text.hpp"

namespace mderank {

std::string Candidate::phrase() const { return join(phrase_words, " "); }

bool is_noun_tag(std::string_view tag) { return tag.starts_with("NN"); }

std::vector<Occurrence> match_candidate_pattern(const std::vector<std::string>& tags) {
  std::vector<Occurrence> matches;
  const std::size_t n = tags.size();
  std::size_t i = 0;
  while (i < n) {
    if (!is_noun_tag(tags[i]) && tags[i] != "JJ") {
      ++i;
      continue;
    }
    std::size_t last_noun = n;
    std::size_t j = i;
    for (; j < n && (is_noun_tag(tags[j]) || tags[j] == "JJ"); ++j)
      if (is_noun_tag(tags[j])) last_noun = j;
    if (last_noun != n) matches.push_back(Occurrence{i, last_noun + 1});
    // Adjectives trailing the last noun cannot start a match: no noun follows them in this run.
    i = j;
  }
  return matches;
}

std::vector<Candidate> extract_candidates(const Document& doc) {
  std::vector<Candidate> out;
  std::unordered_map<std::string, std::size_t> index;
  for (const Occurrence& occ : match_candidate_pattern(doc.tags())) {
    std::vector<std::string> words;
    std::string surface;
    for (std::size_t w = occ.start_word; w < occ.end_word; ++w) {
      words.push_back(to_lower_ascii(doc.words[w].surface));
      if (w > occ.start_word) surface += ' ';
      surface += doc.words[w].surface;
    }
    std::string key = join(words, " ");
    auto [it, inserted] = index.try_emplace(std::move(key), out.size());
    if (inserted) {
      out.push_back(Candidate{std::move(words), {occ}, std::move(surface)});
    } else {
      out[it->second].occurrences.push_back(occ);
    }
  }
  return out;
}

}  // namespace mderank
