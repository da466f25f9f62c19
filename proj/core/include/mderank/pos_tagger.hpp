#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mderank {

/// Deterministic fallback tagger for untagged input.
///
/// Lookup order: punctuation -> SYM, numerals -> CD, the bundled lexicon of
/// the 5,000 most frequent English words, then suffix rules (-ly -> RB;
/// -tion/-ment/-ness -> NN; -al/-ive/-ous -> JJ; plural -s of a noun -> NNS),
/// defaulting to NN. Never throws.
std::vector<std::string> tag_pos_heuristic(const std::vector<std::string>& words);

std::string tag_word_heuristic(std::string_view word);

/// Number of entries in the bundled lexicon.
std::size_t lexicon_size();

}  // namespace mderank
