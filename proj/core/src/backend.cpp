#include "mderank/backend.hpp"

#include <cmath>

#include "mderank/bert_encoder.hpp"
#include "mderank/error.hpp"
#include "mderank/text.hpp"
#include "mderank/wordpiece.hpp"

namespace mderank {

std::uint64_t BowBackend::fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Eigen::VectorXd BowBackend::piece_vector(PieceId piece) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(kDimension);
  if (piece == kMaskId) return v;
  const auto h = static_cast<std::uint64_t>(piece);
  const double unit = 1.0 / std::sqrt(static_cast<double>(kDimension));
  for (int j = 0; j < kDimension; ++j) v[j] = ((h >> j) & 1U) ? unit : -unit;
  return v;
}

std::vector<PieceId> BowBackend::word_pieces(std::string_view word) const {
  return {static_cast<PieceId>(fnv1a(to_lower_ascii(word)))};
}

Eigen::MatrixXd BowBackend::content_states(std::span<const PieceId> pieces, int layer) const {
  if (layer < 1 || layer > kLayers) throw PreconditionError("layer outside [1, 12] for test_bow");
  Eigen::MatrixXd states(static_cast<Eigen::Index>(pieces.size()), kDimension);
  for (std::size_t i = 0; i < pieces.size(); ++i)
    states.row(static_cast<Eigen::Index>(i)) = piece_vector(pieces[i]).transpose();
  return states;
}

std::shared_ptr<const EncoderBackend> test_bow_backend() {
  static const auto backend = std::make_shared<const BowBackend>();
  return backend;
}

namespace {

class TransformerBackend final : public EncoderBackend {
 public:
  TransformerBackend(EncoderManifest manifest, WordPieceTokenizer tokenizer, BertEncoder encoder)
      : manifest_(std::move(manifest)), tokenizer_(std::move(tokenizer)), encoder_(std::move(encoder)) {
    cls_ = require(manifest_.cls_piece);
    sep_ = require(manifest_.sep_piece);
    require(manifest_.mask_piece);
  }

  [[nodiscard]] std::string_view name() const override { return "transformer"; }
  [[nodiscard]] int num_layers() const override { return encoder_.num_layers(); }
  [[nodiscard]] int hidden_size() const override { return encoder_.hidden_size(); }
  [[nodiscard]] int max_sequence_pieces() const override { return manifest_.max_pieces; }
  [[nodiscard]] int special_pieces() const override { return 2; }

  [[nodiscard]] std::vector<PieceId> word_pieces(std::string_view word) const override { return tokenizer_.encode(word); }

  [[nodiscard]] PieceId mask_piece(std::string_view piece) const override { return require(piece); }

  [[nodiscard]] Eigen::MatrixXd content_states(std::span<const PieceId> pieces, int layer) const override {
    if (layer < 1 || layer > num_layers())
      throw PreconditionError("layer " + std::to_string(layer) + " outside [1, " + std::to_string(num_layers()) + "]");
    if (static_cast<int>(pieces.size()) + 2 > manifest_.max_pieces)
      throw PreconditionError("piece sequence exceeds max_pieces");
    std::vector<PieceId> ids;
    ids.reserve(pieces.size() + 2);
    ids.push_back(cls_);
    ids.insert(ids.end(), pieces.begin(), pieces.end());
    ids.push_back(sep_);
    const Eigen::MatrixXf states = encoder_.hidden_states(ids, layer);
    return states.middleRows(1, static_cast<Eigen::Index>(pieces.size())).cast<double>();
  }

 private:
  PieceId require(std::string_view piece) const {
    const auto id = tokenizer_.id_of(piece);
    if (id < 0) throw FormatError("vocabulary has no piece '" + std::string(piece) + "'");
    return id;
  }

  EncoderManifest manifest_;
  WordPieceTokenizer tokenizer_;
  BertEncoder encoder_;
  PieceId cls_ = 0;
  PieceId sep_ = 0;
};

}  // namespace

std::shared_ptr<const EncoderBackend> load_transformer_backend(const std::filesystem::path& model_dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(model_dir)) throw FormatError("model directory not found: " + model_dir.string());
  EncoderManifest manifest = read_manifest(model_dir / "manifest.json");
  WordPieceTokenizer tokenizer =
      WordPieceTokenizer::from_file(model_dir / "vocab.txt", manifest.do_lower_case, manifest.unk_piece);
  if (manifest.vocab_size > 0 && static_cast<std::size_t>(manifest.vocab_size) != tokenizer.size())
    throw FormatError("manifest vocab_size " + std::to_string(manifest.vocab_size) + " but vocab.txt has " +
                      std::to_string(tokenizer.size()) + " pieces");
  manifest.vocab_size = static_cast<int>(tokenizer.size());
  BertEncoder encoder(manifest, read_tensor_file(model_dir / "graph.bin"));
  return std::make_shared<const TransformerBackend>(std::move(manifest), std::move(tokenizer), std::move(encoder));
}

}  // namespace mderank
