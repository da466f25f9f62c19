#include <array>
#include <cctype>
#include <string>
#include <string_view>

#include "mderank/text.hpp"

namespace mderank {
namespace {

// Porter stemmer, following Martin Porter's reference C implementation
// (which departs from the original 1980 algorithm in step 2: bli->ble and logi->log).
//
// Rule lists use first-suffix-match semantics: the first rule whose suffix
// matches decides the step, whether or not its condition holds.

bool is_consonant(std::string_view w, std::size_t i) {
  switch (w[i]) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
      return false;
    case 'y':
      return i == 0 ? true : !is_consonant(w, i - 1);
    default:
      return true;
  }
}

// m in [C](VC)^m[V]
int measure(std::string_view stem) {
  int m = 0;
  bool prev_vowel = false;
  for (std::size_t i = 0; i < stem.size(); ++i) {
    const bool vowel = !is_consonant(stem, i);
    if (prev_vowel && !vowel) ++m;
    prev_vowel = vowel;
  }
  return m;
}

bool contains_vowel(std::string_view stem) {
  for (std::size_t i = 0; i < stem.size(); ++i)
    if (!is_consonant(stem, i)) return true;
  return false;
}

bool ends_double_consonant(std::string_view w) {
  return w.size() >= 2 && w[w.size() - 1] == w[w.size() - 2] && is_consonant(w, w.size() - 1);
}

// *o: stem ends cvc, where the second c is not w, x or y.
bool ends_cvc(std::string_view w) {
  const std::size_t n = w.size();
  if (n < 3) return false;
  const char last = w[n - 1];
  return is_consonant(w, n - 3) && !is_consonant(w, n - 2) && is_consonant(w, n - 1) && last != 'w' && last != 'x' &&
         last != 'y';
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

enum class Cond { kNone, kM0, kM1, kVowel, kIon };

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
  Cond cond;
};

bool holds(Cond c, std::string_view stem) {
  switch (c) {
    case Cond::kNone:
      return true;
    case Cond::kM0:
      return measure(stem) > 0;
    case Cond::kM1:
      return measure(stem) > 1;
    case Cond::kVowel:
      return contains_vowel(stem);
    case Cond::kIon:
      return measure(stem) > 1 && !stem.empty() && (stem.back() == 's' || stem.back() == 't');
  }
  return false;
}

template <std::size_t N>
std::string apply_rules(std::string word, const std::array<Rule, N>& rules) {
  for (const Rule& r : rules) {
    if (!ends_with(word, r.suffix)) continue;
    const std::string_view stem = std::string_view(word).substr(0, word.size() - r.suffix.size());
    if (!holds(r.cond, stem)) return word;
    std::string out(stem);
    out += r.replacement;
    return out;
  }
  return word;
}

std::string step1a(std::string w) {
  static constexpr std::array<Rule, 4> kRules{{
      {"sses", "ss", Cond::kNone},
      {"ies", "i", Cond::kNone},
      {"ss", "ss", Cond::kNone},
      {"s", "", Cond::kNone},
  }};
  return apply_rules(std::move(w), kRules);
}

std::string step1b(std::string w) {
  if (ends_with(w, "eed")) {
    const std::string_view stem = std::string_view(w).substr(0, w.size() - 3);
    if (measure(stem) > 0) return std::string(stem) + "ee";
    return w;
  }
  std::string stem;
  bool removed = false;
  for (std::string_view suffix : {std::string_view("ed"), std::string_view("ing")}) {
    if (ends_with(w, suffix)) {
      std::string_view candidate = std::string_view(w).substr(0, w.size() - suffix.size());
      if (contains_vowel(candidate)) {
        stem = candidate;
        removed = true;
        break;
      }
    }
  }
  if (!removed) return w;

  if (ends_with(stem, "at") || ends_with(stem, "bl") || ends_with(stem, "iz")) return stem + "e";
  if (ends_double_consonant(stem)) {
    const char last = stem.back();
    if (last != 'l' && last != 's' && last != 'z') stem.pop_back();
    return stem;
  }
  if (measure(stem) == 1 && ends_cvc(stem)) return stem + "e";
  return stem;
}

std::string step1c(std::string w) {
  static constexpr std::array<Rule, 1> kRules{{{"y", "i", Cond::kVowel}}};
  return apply_rules(std::move(w), kRules);
}

std::string step2(std::string w) {
  static constexpr std::array<Rule, 21> kRules{{
      {"ational", "ate", Cond::kM0}, {"tional", "tion", Cond::kM0}, {"enci", "ence", Cond::kM0},
      {"anci", "ance", Cond::kM0},   {"izer", "ize", Cond::kM0},    {"bli", "ble", Cond::kM0},
      {"alli", "al", Cond::kM0},     {"entli", "ent", Cond::kM0},   {"eli", "e", Cond::kM0},
      {"ousli", "ous", Cond::kM0},   {"ization", "ize", Cond::kM0}, {"ation", "ate", Cond::kM0},
      {"ator", "ate", Cond::kM0},    {"alism", "al", Cond::kM0},    {"iveness", "ive", Cond::kM0},
      {"fulness", "ful", Cond::kM0}, {"ousness", "ous", Cond::kM0}, {"aliti", "al", Cond::kM0},
      {"iviti", "ive", Cond::kM0},   {"biliti", "ble", Cond::kM0},  {"logi", "log", Cond::kM0},
  }};
  return apply_rules(std::move(w), kRules);
}

std::string step3(std::string w) {
  static constexpr std::array<Rule, 7> kRules{{
      {"icate", "ic", Cond::kM0},
      {"ative", "", Cond::kM0},
      {"alize", "al", Cond::kM0},
      {"iciti", "ic", Cond::kM0},
      {"ical", "ic", Cond::kM0},
      {"ful", "", Cond::kM0},
      {"ness", "", Cond::kM0},
  }};
  return apply_rules(std::move(w), kRules);
}

std::string step4(std::string w) {
  static constexpr std::array<Rule, 19> kRules{{
      {"al", "", Cond::kM1},   {"ance", "", Cond::kM1}, {"ence", "", Cond::kM1}, {"er", "", Cond::kM1},
      {"ic", "", Cond::kM1},   {"able", "", Cond::kM1}, {"ible", "", Cond::kM1}, {"ant", "", Cond::kM1},
      {"ement", "", Cond::kM1}, {"ment", "", Cond::kM1}, {"ent", "", Cond::kM1}, {"ion", "", Cond::kIon},
      {"ou", "", Cond::kM1},   {"ism", "", Cond::kM1},  {"ate", "", Cond::kM1},  {"iti", "", Cond::kM1},
      {"ous", "", Cond::kM1},  {"ive", "", Cond::kM1},  {"ize", "", Cond::kM1},
  }};
  return apply_rules(std::move(w), kRules);
}

std::string step5a(std::string w) {
  if (!ends_with(w, "e")) return w;
  const std::string_view stem = std::string_view(w).substr(0, w.size() - 1);
  const int m = measure(stem);
  if (m > 1 || (m == 1 && !ends_cvc(stem))) return std::string(stem);
  return w;
}

std::string step5b(std::string w) {
  if (ends_with(w, "ll") && measure(std::string_view(w).substr(0, w.size() - 1)) > 1) w.pop_back();
  return w;
}

}  // namespace

std::string porter_stem(std::string_view word) {
  std::string w(word);
  if (w.size() <= 2) return w;
  w = step1a(std::move(w));
  w = step1b(std::move(w));
  w = step1c(std::move(w));
  w = step2(std::move(w));
  w = step3(std::move(w));
  w = step4(std::move(w));
  w = step5a(std::move(w));
  w = step5b(std::move(w));
  return w;
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string stem_phrase(std::string_view phrase) {
  std::vector<std::string> words = split_whitespace(to_lower_ascii(phrase));
  for (auto& w : words) w = porter_stem(w);
  return join(words, " ");
}

}  // namespace mderank
