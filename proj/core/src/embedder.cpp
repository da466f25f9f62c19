#include "mderank/embedder.hpp"

#include <algorithm>

#include "mderank/error.hpp"

namespace mderank {

std::string_view to_string(BackendKind k) { return k == BackendKind::kTestBow ? "test_bow" : "transformer"; }
std::string_view to_string(Pooling p) { return p == Pooling::kMax ? "max" : "avg"; }
std::string_view to_string(MaskGranularity g) { return g == MaskGranularity::kPiece ? "piece" : "word"; }

BackendKind parse_backend_kind(std::string_view s) {
  if (s == "test_bow") return BackendKind::kTestBow;
  if (s == "transformer" || s == "transformer_model") return BackendKind::kTransformer;
  throw PreconditionError("unknown backend '" + std::string(s) + "'");
}

Pooling parse_pooling(std::string_view s) {
  if (s == "max") return Pooling::kMax;
  if (s == "avg" || s == "mean") return Pooling::kAvg;
  throw PreconditionError("unknown pooling '" + std::string(s) + "'");
}

MaskGranularity parse_mask_granularity(std::string_view s) {
  if (s == "piece") return MaskGranularity::kPiece;
  if (s == "word") return MaskGranularity::kWord;
  throw PreconditionError("unknown mask granularity '" + std::string(s) + "'");
}

Embedder::Embedder(std::shared_ptr<const EncoderBackend> backend, EmbedderConfig config)
    : backend_(std::move(backend)), config_(std::move(config)) {
  if (!backend_) throw PreconditionError("embedder needs a backend");
  if (config_.layer < 1 || config_.layer > backend_->num_layers())
    throw PreconditionError("layer " + std::to_string(config_.layer) + " is not valid for a " +
                            std::to_string(backend_->num_layers()) + "-layer model");
  if (config_.max_pieces < 16) throw PreconditionError("max_pieces must be at least 16");
  if (config_.max_pieces > backend_->max_sequence_pieces())
    throw PreconditionError("max_pieces " + std::to_string(config_.max_pieces) + " exceeds the model limit of " +
                            std::to_string(backend_->max_sequence_pieces()));
  mask_id_ = backend_->mask_piece(config_.mask_piece);
}

Embedder Embedder::from_config(const EmbedderConfig& config) {
  if (config.backend == BackendKind::kTestBow) return Embedder(test_bow_backend(), config);
  if (!config.model_path) throw PreconditionError("the transformer backend needs a model path");
  return Embedder(load_transformer_backend(*config.model_path), config);
}

std::size_t Embedder::content_capacity() const {
  return static_cast<std::size_t>(config_.max_pieces - backend_->special_pieces());
}

TokenizedWords Embedder::tokenize(std::span<const std::string> words) const {
  TokenizedWords out;
  out.pieces.reserve(words.size());
  for (const auto& w : words) out.pieces.push_back(backend_->word_pieces(w));
  return out;
}

std::size_t Embedder::visible_word_count(const TokenizedWords& words) const {
  const std::size_t capacity = content_capacity();
  std::size_t used = 0;
  for (std::size_t i = 0; i < words.pieces.size(); ++i) {
    used += words.pieces[i].size();
    if (used > capacity) return i;
  }
  return words.pieces.size();
}

std::vector<PieceId> Embedder::assemble(const TokenizedWords& words, const MaskFlags& mask_flags) const {
  if (mask_flags.size() != words.pieces.size())
    throw PreconditionError("mask_flags length " + std::to_string(mask_flags.size()) + " differs from word count " +
                            std::to_string(words.pieces.size()));
  const std::size_t capacity = content_capacity();
  std::vector<PieceId> seq;
  for (std::size_t i = 0; i < words.pieces.size() && seq.size() < capacity; ++i) {
    const auto& pieces = words.pieces[i];
    if (!mask_flags[i]) {
      seq.insert(seq.end(), pieces.begin(), pieces.end());
    } else if (config_.mask_granularity == MaskGranularity::kPiece) {
      seq.insert(seq.end(), pieces.size(), mask_id_);
    } else if (!pieces.empty()) {
      seq.push_back(mask_id_);
    }
  }
  if (seq.size() > capacity) seq.resize(capacity);
  return seq;
}

DocumentEmbedding Embedder::embed_pieces(std::span<const PieceId> pieces) const {
  DocumentEmbedding out;
  out.piece_count = static_cast<int>(pieces.size());
  const int dim = backend_->hidden_size();
  if (pieces.empty()) {
    out.vector.assign(static_cast<std::size_t>(dim), 0.0);
    return out;
  }
  const Eigen::MatrixXd states = backend_->content_states(pieces, config_.layer);
  Eigen::RowVectorXd pooled;
  if (config_.pooling == Pooling::kMax) {
    pooled = states.colwise().maxCoeff();
  } else {
    pooled = states.row(0);
    for (Eigen::Index r = 1; r < states.rows(); ++r) pooled += states.row(r);
    pooled /= static_cast<double>(states.rows());
  }
  out.vector.assign(pooled.data(), pooled.data() + pooled.size());
  return out;
}

DocumentEmbedding Embedder::embed(const TokenizedWords& words, const MaskFlags& mask_flags) const {
  if (words.pieces.empty()) throw PreconditionError("cannot embed an empty word sequence");
  return embed_pieces(assemble(words, mask_flags));
}

DocumentEmbedding Embedder::embed(std::span<const std::string> words, const MaskFlags& mask_flags) const {
  if (words.empty()) throw PreconditionError("cannot embed an empty word sequence");
  if (mask_flags.size() != words.size()) throw PreconditionError("mask_flags must match the word count");
  return embed(tokenize(words), mask_flags);
}

}  // namespace mderank
