#include "mderank/wordpiece.hpp"

#include <fstream>

#include "mderank/error.hpp"

namespace mderank {
namespace {

// --- UTF-8 ---------------------------------------------------------------

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b = static_cast<unsigned char>(s[i]);
    char32_t cp = 0xFFFD;
    std::size_t len = 1;
    if (b < 0x80) {
      cp = b;
    } else if ((b >> 5) == 0x6) {
      len = 2;
    } else if ((b >> 4) == 0xE) {
      len = 3;
    } else if ((b >> 3) == 0x1E) {
      len = 4;
    }
    if (len > 1) {
      if (i + len > s.size()) {
        len = 1;
      } else {
        cp = b & (0x7F >> len);
        for (std::size_t k = 1; k < len; ++k) {
          const auto c = static_cast<unsigned char>(s[i + k]);
          if ((c >> 6) != 0x2) {
            cp = 0xFFFD;
            len = 1;
            break;
          }
          cp = (cp << 6) | (c & 0x3F);
        }
      }
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(std::u32string_view s) {
  std::string out;
  for (char32_t cp : s) append_utf8(out, cp);
  return out;
}

// --- character classes (subset of the Unicode tables BERT consults) -------

bool in(char32_t cp, char32_t lo, char32_t hi) { return cp >= lo && cp <= hi; }

bool is_whitespace(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == 0xA0 || cp == 0x1680 || in(cp, 0x2000, 0x200A) ||
         cp == 0x202F || cp == 0x205F || cp == 0x3000;
}

bool is_control(char32_t cp) {
  if (cp == '\t' || cp == '\n' || cp == '\r') return false;
  return cp < 0x20 || in(cp, 0x7F, 0x9F) || cp == 0xAD || in(cp, 0x200B, 0x200F) || in(cp, 0x202A, 0x202E) ||
         in(cp, 0x2060, 0x2064) || cp == 0xFEFF || in(cp, 0xE000, 0xF8FF);
}

bool is_punctuation(char32_t cp) {
  if (in(cp, 33, 47) || in(cp, 58, 64) || in(cp, 91, 96) || in(cp, 123, 126)) return true;
  switch (cp) {
    case 0xA1:
    case 0xA7:
    case 0xAB:
    case 0xB6:
    case 0xB7:
    case 0xBB:
    case 0xBF:
    case 0x37E:
    case 0x387:
    case 0xFF1A:
    case 0xFF1B:
    case 0xFF1F:
    case 0xFF20:
    case 0xFF3F:
    case 0xFF5B:
    case 0xFF5D:
      return true;
    default:
      break;
  }
  return in(cp, 0x2010, 0x2027) || in(cp, 0x2030, 0x2043) || in(cp, 0x2045, 0x2051) || in(cp, 0x2053, 0x205E) ||
         in(cp, 0x3001, 0x3003) || in(cp, 0x3008, 0x3011) || in(cp, 0x3014, 0x301F) || in(cp, 0xFF01, 0xFF03) ||
         in(cp, 0xFF05, 0xFF0A) || in(cp, 0xFF0C, 0xFF0F) || in(cp, 0xFF3B, 0xFF3D);
}

bool is_cjk(char32_t cp) {
  return in(cp, 0x4E00, 0x9FFF) || in(cp, 0x3400, 0x4DBF) || in(cp, 0x20000, 0x2A6DF) || in(cp, 0x2A700, 0x2B73F) ||
         in(cp, 0x2B740, 0x2B81F) || in(cp, 0x2B820, 0x2CEAF) || in(cp, 0xF900, 0xFAFF) || in(cp, 0x2F800, 0x2FA1F);
}

bool is_combining_mark(char32_t cp) { return in(cp, 0x300, 0x36F); }

// Lowercase mapping for ASCII, Latin-1, Latin Extended-A, Greek and Cyrillic.
void append_lower(std::u32string& out, char32_t cp) {
  if (in(cp, 'A', 'Z') || (in(cp, 0xC0, 0xDE) && cp != 0xD7)) {
    out.push_back(cp + 0x20);
  } else if (cp == 0x130) {
    out.push_back('i');
    out.push_back(0x307);
  } else if (in(cp, 0x100, 0x137) || in(cp, 0x14A, 0x177)) {
    out.push_back((cp % 2 == 0) ? cp + 1 : cp);
  } else if (in(cp, 0x139, 0x148) || in(cp, 0x179, 0x17E)) {
    out.push_back((cp % 2 == 1) ? cp + 1 : cp);
  } else if (cp == 0x178) {
    out.push_back(0xFF);
  } else if (in(cp, 0x391, 0x3A9) && cp != 0x3A2) {
    out.push_back(cp + 0x20);
  } else if (in(cp, 0x410, 0x42F)) {
    out.push_back(cp + 0x20);
  } else if (in(cp, 0x400, 0x40F)) {
    out.push_back(cp + 0x50);
  } else {
    out.push_back(cp);
  }
}

// Base letter of a lowercase precomposed Latin letter, or 0 when the letter
// has no canonical decomposition.
char32_t strip_accent(char32_t cp) {
  static constexpr char32_t kLatin1[] = {
      // 0xE0 .. 0xFF
      'a', 'a', 'a', 'a', 'a', 'a', 0, 'c', 'e', 'e', 'e', 'e', 'i', 'i', 'i', 'i',
      0,   'n', 'o', 'o', 'o', 'o', 'o', 0, 0,   'u', 'u', 'u', 'u', 'y', 0,   'y'};
  static constexpr char32_t kExtA[] = {
      // 0x100 .. 0x17F
      'a', 'a', 'a', 'a', 'a', 'a', 'c', 'c', 'c', 'c', 'c', 'c', 'c', 'c', 'd', 'd',  // 0x100
      0,   0,   'e', 'e', 'e', 'e', 'e', 'e', 'e', 'e', 'e', 'e', 'g', 'g', 'g', 'g',  // 0x110
      'g', 'g', 'g', 'g', 'h', 'h', 0,   0,   'i', 'i', 'i', 'i', 'i', 'i', 'i', 'i',  // 0x120
      'i', 0,   0,   0,   'j', 'j', 'k', 'k', 0,   'l', 'l', 'l', 'l', 'l', 'l', 0,    // 0x130
      0,   0,   0,   'n', 'n', 'n', 'n', 'n', 'n', 0,   0,   0,   'o', 'o', 'o', 'o',  // 0x140
      'o', 'o', 0,   0,   'r', 'r', 'r', 'r', 'r', 'r', 's', 's', 's', 's', 's', 's',  // 0x150
      's', 's', 't', 't', 't', 't', 0,   0,   'u', 'u', 'u', 'u', 'u', 'u', 'u', 'u',  // 0x160
      'u', 'u', 'u', 'u', 'w', 'w', 'y', 'y', 'y', 'z', 'z', 'z', 'z', 'z', 'z', 0};   // 0x170
  if (in(cp, 0xE0, 0xFF)) return kLatin1[cp - 0xE0];
  if (in(cp, 0x100, 0x17F)) return kExtA[cp - 0x100];
  return 0;
}

std::vector<std::u32string> whitespace_split(const std::u32string& s) {
  std::vector<std::u32string> out;
  std::u32string cur;
  for (char32_t cp : s) {
    if (is_whitespace(cp)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(cp);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace

WordPieceTokenizer::WordPieceTokenizer(std::vector<std::string> vocab, bool do_lower_case, std::string unk_piece)
    : vocab_(std::move(vocab)), do_lower_case_(do_lower_case), unk_piece_(std::move(unk_piece)) {
  // A repeated piece maps to its last line, as in the reference loader.
  for (std::size_t i = 0; i < vocab_.size(); ++i) index_.insert_or_assign(vocab_[i], static_cast<std::int64_t>(i));
  if (id_of(unk_piece_) < 0) throw FormatError("vocabulary has no unknown piece '" + unk_piece_ + "'");
}

WordPieceTokenizer WordPieceTokenizer::from_file(const std::filesystem::path& vocab_file, bool do_lower_case,
                                                 std::string unk_piece) {
  std::ifstream in(vocab_file);
  if (!in) throw FormatError("cannot open vocabulary " + vocab_file.string());
  std::vector<std::string> vocab;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    vocab.push_back(line);
  }
  if (vocab.empty()) throw FormatError("empty vocabulary " + vocab_file.string());
  return WordPieceTokenizer(std::move(vocab), do_lower_case, std::move(unk_piece));
}

std::int64_t WordPieceTokenizer::id_of(std::string_view piece) const {
  auto it = index_.find(std::string(piece));
  return it == index_.end() ? -1 : it->second;
}

std::vector<std::string> WordPieceTokenizer::basic_tokenize(std::string_view text) const {
  std::u32string cleaned;
  for (char32_t cp : decode_utf8(text)) {
    if (cp == 0 || cp == 0xFFFD || is_control(cp)) continue;
    if (is_whitespace(cp)) {
      cleaned.push_back(' ');
    } else if (is_cjk(cp)) {
      cleaned.push_back(' ');
      cleaned.push_back(cp);
      cleaned.push_back(' ');
    } else {
      cleaned.push_back(cp);
    }
  }

  std::vector<std::string> out;
  for (const auto& token : whitespace_split(cleaned)) {
    std::u32string norm;
    if (do_lower_case_) {
      std::u32string lowered;
      for (char32_t cp : token) append_lower(lowered, cp);
      for (char32_t cp : lowered) {
        if (is_combining_mark(cp)) continue;
        const char32_t base = strip_accent(cp);
        norm.push_back(base ? base : cp);
      }
    } else {
      norm = token;
    }
    std::u32string cur;
    for (char32_t cp : norm) {
      if (is_punctuation(cp)) {
        if (!cur.empty()) out.push_back(encode_utf8(cur));
        cur.clear();
        out.push_back(encode_utf8(std::u32string(1, cp)));
      } else {
        cur.push_back(cp);
      }
    }
    if (!cur.empty()) out.push_back(encode_utf8(cur));
  }
  return out;
}

void WordPieceTokenizer::wordpiece(const std::string& token, std::vector<std::string>& out) const {
  const std::u32string chars = decode_utf8(token);
  if (chars.size() > max_chars_per_word_) {
    out.push_back(unk_piece_);
    return;
  }
  std::vector<std::string> pieces;
  std::size_t start = 0;
  while (start < chars.size()) {
    std::size_t end = chars.size();
    std::string found;
    while (start < end) {
      std::string sub = encode_utf8(std::u32string_view(chars).substr(start, end - start));
      if (start > 0) sub = "##" + sub;
      if (index_.contains(sub)) {
        found = std::move(sub);
        break;
      }
      --end;
    }
    if (found.empty()) {
      out.push_back(unk_piece_);
      return;
    }
    pieces.push_back(std::move(found));
    start = end;
  }
  for (auto& p : pieces) out.push_back(std::move(p));
}

std::vector<std::string> WordPieceTokenizer::tokenize(std::string_view text) const {
  std::vector<std::string> out;
  for (const auto& token : basic_tokenize(text)) wordpiece(token, out);
  return out;
}

std::vector<std::int64_t> WordPieceTokenizer::encode(std::string_view text) const {
  std::vector<std::int64_t> ids;
  for (const auto& piece : tokenize(text)) ids.push_back(index_.at(piece));
  return ids;
}

}  // namespace mderank
