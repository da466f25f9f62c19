#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mderank {

/// One token of a document: surface form, Penn-Treebank tag and the
/// half-open byte span [char_start, char_end) it occupies in the raw text.
struct Word {
  std::string surface;
  std::string pos_tag;
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  friend bool operator==(const Word&, const Word&) = default;
};

/// Builds a validated Word. Throws PreconditionError on an empty surface,
/// an empty tag or an empty span. The tag is normalized with normalize_pos_tag.
Word make_word(std::string surface, std::string_view pos_tag, std::size_t char_start, std::size_t char_end);

/// Folds a tagger's output onto uppercase alphanumeric tags: "PRP$" -> "PRPS",
/// punctuation tags such as "," or "-LRB-" -> "SYM".
std::string normalize_pos_tag(std::string_view tag);

struct Document {
  std::string id;
  std::vector<Word> words;
  std::string raw_text;
  std::optional<std::vector<std::string>> gold_keyphrases;

  [[nodiscard]] std::vector<std::string> surfaces() const;
  [[nodiscard]] std::vector<std::string> tags() const;
  /// First `max_words` words; raw_text is cut at the end of the last kept word.
  [[nodiscard]] Document truncated(std::size_t max_words) const;

  friend bool operator==(const Document&, const Document&) = default;
};

/// Validates the Document invariants (non-empty words, spans in bounds,
/// ascending and non-overlapping). Throws FormatError naming the document.
void validate_document(const Document& doc);

/// Names of the bundled benchmark splits; anything else loads as "custom".
inline constexpr std::string_view kKnownSplitNames[] = {
    "inspec", "semeval2010", "semeval2017", "duc2001", "krapivin", "nus", "custom"};

struct DatasetSplit {
  std::string name = "custom";
  std::vector<Document> documents;

  [[nodiscard]] bool fully_labelled() const;
  [[nodiscard]] double average_words_per_document() const;
};

/// Picks a split name from a file name ("data/Inspec.jsonl" -> "inspec").
std::string split_name_from_path(const std::filesystem::path& path);

/// Raw-text token with its byte span.
struct TextToken {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;
};

/// Whitespace/punctuation tokenizer. Runs of letters and digits (any byte
/// >= 0x80 counts as a letter) form one token, with inner hyphens and
/// apostrophes kept ("real-time", "don't") and decimal points between digits
/// kept ("3.5"). Every other non-space character is a token of its own.
std::vector<TextToken> tokenize_text(std::string_view text);

/// Tokenizes and tags raw text with the heuristic tagger.
Document document_from_text(std::string id, std::string text,
                            std::optional<std::vector<std::string>> gold = std::nullopt);

/// Reads the JSONL dataset format:
///   {"id": ..., "tokens": [{"w": ..., "pos": ..., "start"?: n, "end"?: n}, ...],
///    "text"?: ..., "keyphrases"?: [...]}
/// or {"id": ..., "text": ..., "keyphrases"?: [...]} for untagged input.
/// Errors name the 1-based line number.
DatasetSplit parse_jsonl(std::istream& in, std::string name = "custom");
DatasetSplit load_jsonl(const std::filesystem::path& path);

std::string to_jsonl_line(const Document& doc);
void write_jsonl(const DatasetSplit& split, std::ostream& out);

/// Converts the common raw benchmark layout: one `<id>.txt` (or any
/// extension) per document in `docs_dir` and a matching `<id>.key` file with
/// one gold keyphrase per line in `keys_dir`. Documents are ordered by id.
DatasetSplit convert_raw_benchmark(const std::filesystem::path& docs_dir, const std::filesystem::path& keys_dir,
                                   std::string name = "custom");

}  // namespace mderank
