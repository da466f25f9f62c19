#include "mderank/pos_tagger.hpp"

#include <cctype>
#include <string>
#include <string_view>
#include <unordered_map>

#include "mderank/text.hpp"

namespace mderank {
namespace detail {
extern const std::string_view kLexiconTsv;
}  // namespace detail

namespace {

using Lexicon = std::unordered_map<std::string_view, std::string_view>;

const Lexicon& lexicon() {
  static const Lexicon table = [] {
    Lexicon t;
    std::string_view data = detail::kLexiconTsv;
    while (!data.empty()) {
      const std::size_t eol = data.find('\n');
      std::string_view line = data.substr(0, eol);
      data = eol == std::string_view::npos ? std::string_view{} : data.substr(eol + 1);
      const std::size_t tab = line.find('\t');
      if (tab == std::string_view::npos) continue;
      t.emplace(line.substr(0, tab), line.substr(tab + 1));
    }
    return t;
  }();
  return table;
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() > suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

bool is_punctuation(std::string_view w) {
  for (unsigned char c : w)
    if (std::isalnum(c) || c >= 0x80) return false;
  return true;
}

bool is_numeral(std::string_view w) {
  bool digit = false;
  for (unsigned char c : w) {
    if (std::isdigit(c)) {
      digit = true;
    } else if (c != '.' && c != ',' && c != '-' && c != '/') {
      return false;
    }
  }
  return digit;
}

std::string_view lookup(std::string_view lower) {
  const auto& lex = lexicon();
  auto it = lex.find(lower);
  return it == lex.end() ? std::string_view{} : it->second;
}

bool is_noun_tag(std::string_view tag) { return tag.starts_with("NN"); }

// Tag of an open-class word from suffix rules alone, without the plural rule.
std::string_view suffix_tag(std::string_view w) {
  if (ends_with(w, "ly")) return "RB";
  if (ends_with(w, "tion") || ends_with(w, "ment") || ends_with(w, "ness")) return "NN";
  if (ends_with(w, "al") || ends_with(w, "ive") || ends_with(w, "ous")) return "JJ";
  return "NN";
}

// Singular candidates for a word ending in -s: "ies" -> "y", "es" -> "", "s" -> "".
bool singular_is_noun(std::string_view w) {
  auto noun = [](std::string_view singular) {
    if (singular.size() < 2) return false;
    std::string_view known = lookup(singular);
    if (!known.empty()) return is_noun_tag(known);
    return is_noun_tag(suffix_tag(singular));
  };
  if (ends_with(w, "ies") && noun(std::string(w.substr(0, w.size() - 3)) + "y")) return true;
  if (ends_with(w, "es") && noun(w.substr(0, w.size() - 2))) return true;
  return noun(w.substr(0, w.size() - 1));
}

}  // namespace

std::size_t lexicon_size() { return lexicon().size(); }

std::string tag_word_heuristic(std::string_view word) {
  if (word.empty()) return "NN";
  if (is_punctuation(word)) return "SYM";
  if (is_numeral(word)) return "CD";

  const std::string lower = to_lower_ascii(word);
  if (std::string_view known = lookup(lower); !known.empty()) return std::string(known);

  if (lower.size() > 3 && lower.back() == 's' && !ends_with(lower, "ss") && !ends_with(lower, "us") &&
      !ends_with(lower, "is") && singular_is_noun(lower))
    return "NNS";
  return std::string(suffix_tag(lower));
}

std::vector<std::string> tag_pos_heuristic(const std::vector<std::string>& words) {
  std::vector<std::string> tags;
  tags.reserve(words.size());
  for (const auto& w : words) tags.push_back(tag_word_heuristic(w));
  return tags;
}

}  // namespace mderank
