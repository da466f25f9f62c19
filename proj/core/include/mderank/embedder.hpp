#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mderank/backend.hpp"

namespace mderank {

enum class BackendKind { kTransformer, kTestBow };
enum class Pooling { kMax, kAvg };

/// How many placeholders a masked word contributes: one per word piece it
/// would otherwise produce (length preserving), or exactly one.
enum class MaskGranularity { kPiece, kWord };

struct EmbedderConfig {
  BackendKind backend = BackendKind::kTestBow;
  std::optional<std::filesystem::path> model_path;
  int layer = 12;  // 1-based encoder layer
  Pooling pooling = Pooling::kMax;
  int max_pieces = 512;  // includes special pieces
  std::string mask_piece = "[MASK]";
  MaskGranularity mask_granularity = MaskGranularity::kPiece;
};

std::string_view to_string(BackendKind k);
std::string_view to_string(Pooling p);
std::string_view to_string(MaskGranularity g);
BackendKind parse_backend_kind(std::string_view s);
Pooling parse_pooling(std::string_view s);
MaskGranularity parse_mask_granularity(std::string_view s);

struct DocumentEmbedding {
  std::vector<double> vector;
  int piece_count = 0;  // content pieces that reached the encoder
};

using MaskFlags = std::vector<bool>;

/// Word pieces of every word of a document, computed once and reused for
/// all of its masked variants.
struct TokenizedWords {
  std::vector<std::vector<PieceId>> pieces;
};

/// Turns (optionally masked) word sequences into pooled document vectors:
/// the content pieces are encoded, hidden states at the configured layer are
/// max- or mean-pooled element-wise, special pieces excluded.
class Embedder {
 public:
  /// Throws PreconditionError when the layer is outside [1, num_layers] or
  /// max_pieces is below 16 or above what the backend accepts.
  Embedder(std::shared_ptr<const EncoderBackend> backend, EmbedderConfig config);

  /// Loads the backend named by `config` (test_bow, or the transformer export
  /// at config.model_path).
  static Embedder from_config(const EmbedderConfig& config);

  [[nodiscard]] const EmbedderConfig& config() const { return config_; }
  [[nodiscard]] const EncoderBackend& backend() const { return *backend_; }
  [[nodiscard]] std::shared_ptr<const EncoderBackend> backend_handle() const { return backend_; }
  [[nodiscard]] int dimension() const { return backend_->hidden_size(); }
  /// Content pieces that fit after the special pieces are accounted for.
  [[nodiscard]] std::size_t content_capacity() const;

  [[nodiscard]] TokenizedWords tokenize(std::span<const std::string> words) const;
  /// Number of leading words whose pieces all fit in the content capacity.
  [[nodiscard]] std::size_t visible_word_count(const TokenizedWords& words) const;

  /// Piece sequence after masking and truncation to the content capacity.
  [[nodiscard]] std::vector<PieceId> assemble(const TokenizedWords& words, const MaskFlags& mask_flags) const;

  [[nodiscard]] DocumentEmbedding embed_pieces(std::span<const PieceId> pieces) const;
  [[nodiscard]] DocumentEmbedding embed(const TokenizedWords& words, const MaskFlags& mask_flags) const;
  /// Throws PreconditionError when `words` is empty or the flag count differs.
  [[nodiscard]] DocumentEmbedding embed(std::span<const std::string> words, const MaskFlags& mask_flags) const;

 private:
  std::shared_ptr<const EncoderBackend> backend_;
  EmbedderConfig config_;
  PieceId mask_id_ = 0;
};

}  // namespace mderank
