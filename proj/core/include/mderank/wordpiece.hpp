#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mderank {

/// BERT word-piece tokenizer: basic tokenization (cleanup, CJK splitting,
/// optional lowercasing with accent stripping, punctuation splitting)
/// followed by greedy longest-match-first sub-word lookup with "##"
/// continuation pieces.
class WordPieceTokenizer {
 public:
  WordPieceTokenizer(std::vector<std::string> vocab, bool do_lower_case, std::string unk_piece = "[UNK]");
  static WordPieceTokenizer from_file(const std::filesystem::path& vocab_file, bool do_lower_case,
                                      std::string unk_piece = "[UNK]");

  [[nodiscard]] std::vector<std::string> basic_tokenize(std::string_view text) const;
  [[nodiscard]] std::vector<std::string> tokenize(std::string_view text) const;
  [[nodiscard]] std::vector<std::int64_t> encode(std::string_view text) const;

  /// -1 when `piece` is not in the vocabulary.
  [[nodiscard]] std::int64_t id_of(std::string_view piece) const;
  [[nodiscard]] const std::string& piece_of(std::int64_t id) const { return vocab_.at(static_cast<std::size_t>(id)); }
  [[nodiscard]] std::size_t size() const { return vocab_.size(); }

 private:
  void wordpiece(const std::string& token, std::vector<std::string>& out) const;

  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::int64_t> index_;
  bool do_lower_case_;
  std::string unk_piece_;
  std::size_t max_chars_per_word_ = 100;
};

}  // namespace mderank
