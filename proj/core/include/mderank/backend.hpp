#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mderank {

using PieceId = std::int64_t;

/// Read-only contextual encoder. Implementations must be safe to call
/// concurrently from several threads.
class EncoderBackend {
 public:
  virtual ~EncoderBackend() = default;

  [[nodiscard]] virtual std::string_view name() const = 0;
  [[nodiscard]] virtual int num_layers() const = 0;
  [[nodiscard]] virtual int hidden_size() const = 0;
  /// Longest piece sequence, special pieces included, the encoder accepts.
  [[nodiscard]] virtual int max_sequence_pieces() const = 0;
  /// Special pieces wrapped around the content ([CLS] and [SEP] for BERT).
  [[nodiscard]] virtual int special_pieces() const = 0;

  /// Pieces a single (unmasked) word turns into; may be empty.
  [[nodiscard]] virtual std::vector<PieceId> word_pieces(std::string_view word) const = 0;
  /// Id of the mask placeholder named `piece` ("[MASK]"). Throws if unknown.
  [[nodiscard]] virtual PieceId mask_piece(std::string_view piece) const = 0;

  /// Hidden states at `layer` (1-based) for the content pieces, one row per
  /// piece. Special pieces are added internally and never returned.
  [[nodiscard]] virtual Eigen::MatrixXd content_states(std::span<const PieceId> pieces, int layer) const = 0;
};

/// Deterministic bag-of-words backend for tests and property checks.
///
/// Every piece is a whole lowercased word. A word's hidden state is its hash
/// vector h(w) in R^32: with H = FNV-1a-64 of the lowercased UTF-8 bytes
/// (offset basis 0xcbf29ce484222325 xor seed, seed 0; prime 0x100000001b3),
/// h(w)[j] = +1/sqrt(32) when bit j of H is set and -1/sqrt(32) otherwise.
/// The mask placeholder is the zero vector. States are identical at every
/// one of the 12 nominal layers.
class BowBackend final : public EncoderBackend {
 public:
  static constexpr int kDimension = 32;
  static constexpr int kLayers = 12;
  static constexpr PieceId kMaskId = 0;

  [[nodiscard]] std::string_view name() const override { return "test_bow"; }
  [[nodiscard]] int num_layers() const override { return kLayers; }
  [[nodiscard]] int hidden_size() const override { return kDimension; }
  [[nodiscard]] int max_sequence_pieces() const override { return 1 << 20; }
  [[nodiscard]] int special_pieces() const override { return 0; }
  [[nodiscard]] std::vector<PieceId> word_pieces(std::string_view word) const override;
  [[nodiscard]] PieceId mask_piece(std::string_view) const override { return kMaskId; }
  [[nodiscard]] Eigen::MatrixXd content_states(std::span<const PieceId> pieces, int layer) const override;

  static std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0);
  /// h(piece) as defined above; zero for kMaskId.
  static Eigen::VectorXd piece_vector(PieceId piece);
};

std::shared_ptr<const EncoderBackend> test_bow_backend();

/// Loads an exported encoder directory (manifest.json, vocab.txt, graph.bin).
/// Throws FormatError on a missing or inconsistent export.
std::shared_ptr<const EncoderBackend> load_transformer_backend(const std::filesystem::path& model_dir);

}  // namespace mderank
