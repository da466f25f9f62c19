#include "mderank/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mderank/error.hpp"
#include "mderank/pos_tagger.hpp"
#include "mderank/text.hpp"

namespace mderank {

using nlohmann::json;

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }
bool is_space(unsigned char c) { return std::isspace(c) != 0; }

}  // namespace

std::string normalize_pos_tag(std::string_view tag) {
  std::string out;
  bool alnum = false;
  for (unsigned char c : tag) {
    if (std::isalnum(c)) {
      out.push_back(static_cast<char>(std::toupper(c)));
      alnum = true;
    } else if (c == '$') {
      out.push_back('S');
    } else {
      // Bracket and quote tags (-LRB-, ``, '') carry no word class.
      return "SYM";
    }
  }
  return alnum ? out : "SYM";
}

Word make_word(std::string surface, std::string_view pos_tag, std::size_t char_start, std::size_t char_end) {
  if (surface.empty()) throw PreconditionError("word surface must be non-empty");
  if (pos_tag.empty()) throw PreconditionError("word '" + surface + "' has an empty POS tag");
  if (char_start >= char_end)
    throw PreconditionError("word '" + surface + "' has an empty character span");
  return Word{std::move(surface), normalize_pos_tag(pos_tag), char_start, char_end};
}

std::vector<std::string> Document::surfaces() const {
  std::vector<std::string> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(w.surface);
  return out;
}

std::vector<std::string> Document::tags() const {
  std::vector<std::string> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(w.pos_tag);
  return out;
}

Document Document::truncated(std::size_t max_words) const {
  if (words.size() <= max_words) return *this;
  Document out;
  out.id = id;
  out.words.assign(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(max_words));
  out.raw_text = out.words.empty() ? std::string{} : raw_text.substr(0, out.words.back().char_end);
  out.gold_keyphrases = gold_keyphrases;
  return out;
}

void validate_document(const Document& doc) {
  if (doc.words.empty()) throw FormatError("document '" + doc.id + "' has no words");
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < doc.words.size(); ++i) {
    const Word& w = doc.words[i];
    if (w.surface.empty() || w.char_start >= w.char_end || w.char_end > doc.raw_text.size() || w.char_start < cursor)
      throw FormatError("document '" + doc.id + "': invalid span for word " + std::to_string(i));
    cursor = w.char_end;
  }
}

bool DatasetSplit::fully_labelled() const {
  return std::all_of(documents.begin(), documents.end(),
                     [](const Document& d) { return d.gold_keyphrases.has_value(); });
}

double DatasetSplit::average_words_per_document() const {
  if (documents.empty()) return 0.0;
  std::size_t total = 0;
  for (const auto& d : documents) total += d.words.size();
  return static_cast<double>(total) / static_cast<double>(documents.size());
}

std::string split_name_from_path(const std::filesystem::path& path) {
  std::string stem = to_lower_ascii(path.stem().string());
  stem.erase(std::remove_if(stem.begin(), stem.end(), [](char c) { return c == '-' || c == '_'; }), stem.end());
  for (std::string_view known : kKnownSplitNames)
    if (stem.starts_with(known)) return std::string(known);
  return "custom";
}

std::vector<TextToken> tokenize_text(std::string_view text) {
  std::vector<TextToken> tokens;
  const std::size_t n = text.size();
  auto at = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };
  std::size_t i = 0;
  while (i < n) {
    if (is_space(at(i))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    if (is_word_byte(at(i))) {
      while (j < n) {
        if (is_word_byte(at(j))) {
          ++j;
          continue;
        }
        const unsigned char c = at(j);
        const bool joiner = (c == '-' || c == '\'') || (c == '.' && std::isdigit(at(j - 1)));
        if (joiner && j + 1 < n && is_word_byte(at(j + 1)) && (c != '.' || std::isdigit(at(j + 1)))) {
          j += 2;
          continue;
        }
        break;
      }
    } else {
      j = i + 1;
    }
    tokens.push_back(TextToken{std::string(text.substr(i, j - i)), i, j});
    i = j;
  }
  return tokens;
}

Document document_from_text(std::string id, std::string text, std::optional<std::vector<std::string>> gold) {
  Document doc;
  doc.id = std::move(id);
  doc.raw_text = std::move(text);
  doc.gold_keyphrases = std::move(gold);
  for (auto& tok : tokenize_text(doc.raw_text)) {
    std::string tag = tag_word_heuristic(tok.text);
    doc.words.push_back(make_word(std::move(tok.text), tag, tok.start, tok.end));
  }
  return doc;
}

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw FormatError(what + " at line " + std::to_string(line));
}

Document document_from_json(const json& obj, std::size_t line) {
  if (!obj.is_object()) fail(line, "expected a JSON object");
  if (!obj.contains("id")) fail(line, "missing field id");
  if (!obj["id"].is_string() && !obj["id"].is_number_integer()) fail(line, "field id must be a string");
  std::string id = obj["id"].is_string() ? obj["id"].get<std::string>() : std::to_string(obj["id"].get<long long>());

  std::optional<std::vector<std::string>> gold;
  if (obj.contains("keyphrases") && !obj["keyphrases"].is_null()) {
    if (!obj["keyphrases"].is_array()) fail(line, "field keyphrases must be an array");
    std::vector<std::string> kps;
    for (const auto& kp : obj["keyphrases"]) {
      if (!kp.is_string()) fail(line, "keyphrases must be strings");
      kps.push_back(kp.get<std::string>());
    }
    gold = std::move(kps);
  }

  const bool has_text = obj.contains("text") && obj["text"].is_string();
  if (!obj.contains("tokens")) {
    if (!has_text) fail(line, "missing field tokens or text");
    Document doc = document_from_text(std::move(id), obj["text"].get<std::string>(), std::move(gold));
    if (doc.words.empty()) fail(line, "document text has no tokens");
    return doc;
  }

  const json& tokens = obj["tokens"];
  if (!tokens.is_array() || tokens.empty()) fail(line, "field tokens must be a non-empty array");

  Document doc;
  doc.id = std::move(id);
  doc.gold_keyphrases = std::move(gold);

  std::vector<std::pair<std::string, std::string>> raw;
  bool explicit_spans = true;
  for (const auto& tok : tokens) {
    if (!tok.is_object() || !tok.contains("w") || !tok["w"].is_string()) fail(line, "token missing field w");
    if (!tok.contains("pos") || !tok["pos"].is_string()) fail(line, "token missing field pos");
    raw.emplace_back(tok["w"].get<std::string>(), tok["pos"].get<std::string>());
    if (raw.back().first.empty()) fail(line, "empty token");
    explicit_spans = explicit_spans && tok.contains("start") && tok.contains("end");
  }

  if (has_text) {
    doc.raw_text = obj["text"].get<std::string>();
  } else {
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (i) doc.raw_text.push_back(' ');
      doc.raw_text += raw[i].first;
    }
  }

  std::size_t cursor = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    std::size_t start = 0;
    if (explicit_spans) {
      start = tokens[i]["start"].get<std::size_t>();
      const std::size_t end = tokens[i]["end"].get<std::size_t>();
      if (end != start + raw[i].first.size()) fail(line, "token span does not match its surface");
    } else {
      start = doc.raw_text.find(raw[i].first, cursor);
      if (start == std::string::npos) fail(line, "token '" + raw[i].first + "' not found in text");
    }
    const std::size_t end = start + raw[i].first.size();
    if (start < cursor || end > doc.raw_text.size() ||
        doc.raw_text.compare(start, raw[i].first.size(), raw[i].first) != 0)
      fail(line, "token '" + raw[i].first + "' does not align with text");
    try {
      doc.words.push_back(make_word(std::move(raw[i].first), raw[i].second, start, end));
    } catch (const PreconditionError& e) {
      fail(line, e.what());
    }
    cursor = end;
  }
  return doc;
}

}  // namespace

DatasetSplit parse_jsonl(std::istream& in, std::string name) {
  DatasetSplit split;
  split.name = std::move(name);
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error&) {
      fail(line_no, "malformed JSON");
    }
    try {
      split.documents.push_back(document_from_json(obj, line_no));
    } catch (const json::exception& e) {
      fail(line_no, std::string("invalid field: ") + e.what());
    }
  }
  if (split.documents.empty()) throw FormatError("dataset contains no documents");
  return split;
}

DatasetSplit load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset file: " + path.string());
  try {
    return parse_jsonl(in, split_name_from_path(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string to_jsonl_line(const Document& doc) {
  json obj;
  obj["id"] = doc.id;
  json tokens = json::array();
  for (const auto& w : doc.words)
    tokens.push_back({{"w", w.surface}, {"pos", w.pos_tag}, {"start", w.char_start}, {"end", w.char_end}});
  obj["tokens"] = std::move(tokens);
  obj["text"] = doc.raw_text;
  if (doc.gold_keyphrases) obj["keyphrases"] = *doc.gold_keyphrases;
  return obj.dump();
}

void write_jsonl(const DatasetSplit& split, std::ostream& out) {
  for (const auto& doc : split.documents) out << to_jsonl_line(doc) << '\n';
}

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

DatasetSplit convert_raw_benchmark(const std::filesystem::path& docs_dir, const std::filesystem::path& keys_dir,
                                   std::string name) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(docs_dir)) throw Error("not a directory: " + docs_dir.string());
  if (!fs::is_directory(keys_dir)) throw Error("not a directory: " + keys_dir.string());

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(docs_dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  DatasetSplit split;
  split.name = std::move(name);
  for (const auto& file : files) {
    const std::string id = file.stem().string();
    const fs::path key_file = keys_dir / (id + ".key");
    if (!fs::exists(key_file)) continue;
    std::vector<std::string> gold;
    std::istringstream keys(read_file(key_file));
    std::string kp;
    while (std::getline(keys, kp)) {
      auto parts = split_whitespace(kp);
      if (!parts.empty()) gold.push_back(join(parts, " "));
    }
    // Raw benchmark texts are line-wrapped; newlines carry no structure.
    std::string text = read_file(file);
    std::replace_if(text.begin(), text.end(), [](char c) { return c == '\n' || c == '\r' || c == '\t'; }, ' ');
    Document doc = document_from_text(id, std::move(text), std::move(gold));
    if (!doc.words.empty()) split.documents.push_back(std::move(doc));
  }
  if (split.documents.empty()) throw FormatError("no document/key pairs found in " + docs_dir.string());
  return split;
}

}  // namespace mderank
