#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace mderank {

/// Architecture settings read from an export's manifest.json.
struct EncoderManifest {
  std::string architecture = "bert";
  int num_layers = 0;
  int hidden_size = 0;
  int num_heads = 0;
  int intermediate_size = 0;
  int vocab_size = 0;
  int max_position = 512;
  int type_vocab_size = 2;
  double layer_norm_eps = 1e-12;
  std::string hidden_act = "gelu";
  bool do_lower_case = true;
  std::string mask_piece = "[MASK]";
  std::string unk_piece = "[UNK]";
  std::string cls_piece = "[CLS]";
  std::string sep_piece = "[SEP]";
  int max_pieces = 512;
};

EncoderManifest read_manifest(const std::filesystem::path& file);

/// A named float32 tensor from graph.bin (row-major data).
struct Tensor {
  std::vector<std::int64_t> shape;
  std::vector<float> data;
};

/// Reads the graph.bin tensor container: "MDEG", u32 version, u32 count,
/// then per tensor u32 name length, name, u32 ndim, i64 dims, f32 data.
std::map<std::string, Tensor> read_tensor_file(const std::filesystem::path& file);
void write_tensor_file(const std::filesystem::path& file, const std::map<std::string, Tensor>& tensors);

/// BERT encoder forward pass (post-LayerNorm transformer, absolute position
/// embeddings, token type 0 throughout).
class BertEncoder {
 public:
  BertEncoder(const EncoderManifest& manifest, std::map<std::string, Tensor> tensors);

  [[nodiscard]] int num_layers() const { return static_cast<int>(layers_.size()); }
  [[nodiscard]] int hidden_size() const { return hidden_; }
  [[nodiscard]] int max_position() const { return max_position_; }

  /// Hidden states after encoder layer `layer` (1-based; 0 is the embedding
  /// output) for the full id sequence, one row per piece.
  [[nodiscard]] Eigen::MatrixXf hidden_states(std::span<const std::int64_t> ids, int layer) const;

 private:
  using Matrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  struct Linear {
    Matrix weight_t;  // in x out
    Eigen::RowVectorXf bias;
  };
  struct LayerNorm {
    Eigen::RowVectorXf gamma;
    Eigen::RowVectorXf beta;
  };
  struct Layer {
    Linear query, key, value, attention_out;
    LayerNorm attention_norm;
    Linear intermediate, output;
    LayerNorm output_norm;
  };

  void layer_norm(Matrix& x, const LayerNorm& ln) const;
  void activation(Matrix& x) const;

  int hidden_ = 0;
  int heads_ = 0;
  int max_position_ = 0;
  float eps_ = 1e-12f;
  std::string act_;
  Matrix word_embeddings_;
  Matrix position_embeddings_;
  Eigen::RowVectorXf token_type0_;
  LayerNorm embedding_norm_;
  std::vector<Layer> layers_;
};

}  // namespace mderank
