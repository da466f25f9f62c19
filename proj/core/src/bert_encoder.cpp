#include "mderank/bert_encoder.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "mderank/error.hpp"

namespace mderank {
namespace {

constexpr char kMagic[4] = {'M', 'D', 'E', 'G'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void read_pod(std::istream& in, T& value, const std::filesystem::path& file) {
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw FormatError("truncated tensor file " + file.string());
}

template <class T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

}  // namespace

EncoderManifest read_manifest(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw FormatError("missing manifest " + file.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("corrupt manifest " + file.string() + ": " + e.what());
  }
  EncoderManifest m;
  try {
    for (const char* key : {"num_layers", "hidden_size", "num_heads", "intermediate_size", "mask_piece", "max_pieces"})
      if (!j.contains(key)) throw FormatError(std::string("manifest missing field ") + key);
    m.num_layers = j.at("num_layers").get<int>();
    m.hidden_size = j.at("hidden_size").get<int>();
    m.num_heads = j.at("num_heads").get<int>();
    m.intermediate_size = j.at("intermediate_size").get<int>();
    m.mask_piece = j.at("mask_piece").get<std::string>();
    m.max_pieces = j.at("max_pieces").get<int>();
    m.architecture = j.value("architecture", m.architecture);
    m.vocab_size = j.value("vocab_size", 0);
    m.max_position = j.value("max_position", m.max_pieces);
    m.type_vocab_size = j.value("type_vocab_size", m.type_vocab_size);
    m.layer_norm_eps = j.value("layer_norm_eps", m.layer_norm_eps);
    m.hidden_act = j.value("hidden_act", m.hidden_act);
    m.do_lower_case = j.value("do_lower_case", m.do_lower_case);
    m.unk_piece = j.value("unk_piece", m.unk_piece);
    m.cls_piece = j.value("cls_piece", m.cls_piece);
    m.sep_piece = j.value("sep_piece", m.sep_piece);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("corrupt manifest " + file.string() + ": " + e.what());
  }
  if (m.architecture != "bert") throw FormatError("unsupported encoder architecture '" + m.architecture + "'");
  if (m.num_layers < 1 || m.hidden_size < 1 || m.num_heads < 1 || m.intermediate_size < 1)
    throw FormatError("manifest dimensions must be positive");
  if (m.hidden_size % m.num_heads != 0) throw FormatError("hidden_size is not divisible by num_heads");
  if (m.max_pieces > m.max_position) throw FormatError("max_pieces exceeds max_position");
  return m;
}

std::map<std::string, Tensor> read_tensor_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw FormatError("missing encoder graph " + file.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw FormatError("not an encoder graph file: " + file.string());
  std::uint32_t version = 0, count = 0;
  read_pod(in, version, file);
  if (version != kVersion) throw FormatError("unsupported graph version " + std::to_string(version));
  read_pod(in, count, file);

  std::map<std::string, Tensor> tensors;
  for (std::uint32_t t = 0; t < count; ++t) {
    std::uint32_t name_len = 0;
    read_pod(in, name_len, file);
    if (name_len > 4096) throw FormatError("corrupt tensor name in " + file.string());
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    std::uint32_t ndim = 0;
    read_pod(in, ndim, file);
    if (ndim > 8) throw FormatError("corrupt tensor rank for " + name);
    Tensor tensor;
    std::int64_t elements = 1;
    for (std::uint32_t d = 0; d < ndim; ++d) {
      std::int64_t dim = 0;
      read_pod(in, dim, file);
      if (dim <= 0 || dim > (std::int64_t{1} << 32)) throw FormatError("corrupt tensor shape for " + name);
      tensor.shape.push_back(dim);
      elements *= dim;
    }
    tensor.data.resize(static_cast<std::size_t>(elements));
    in.read(reinterpret_cast<char*>(tensor.data.data()), static_cast<std::streamsize>(elements * sizeof(float)));
    if (!in) throw FormatError("truncated tensor " + name + " in " + file.string());
    tensors.emplace(std::move(name), std::move(tensor));
  }
  return tensors;
}

void write_tensor_file(const std::filesystem::path& file, const std::map<std::string, Tensor>& tensors) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write " + file.string());
  out.write(kMagic, 4);
  write_pod(out, kVersion);
  write_pod(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& [name, tensor] : tensors) {
    write_pod(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_pod(out, static_cast<std::uint32_t>(tensor.shape.size()));
    for (auto dim : tensor.shape) write_pod(out, dim);
    out.write(reinterpret_cast<const char*>(tensor.data.data()),
              static_cast<std::streamsize>(tensor.data.size() * sizeof(float)));
  }
}

namespace {

class TensorTable {
 public:
  explicit TensorTable(std::map<std::string, Tensor> tensors) : tensors_(std::move(tensors)) {}

  const Tensor& get(const std::string& name, std::initializer_list<std::int64_t> shape) const {
    auto it = tensors_.find(name);
    if (it == tensors_.end()) throw FormatError("encoder graph is missing tensor " + name);
    const auto& got_shape = it->second.shape;
    const bool matches = got_shape.size() == shape.size() &&
                         std::equal(shape.begin(), shape.end(), got_shape.begin(),
                                    [](std::int64_t want, std::int64_t got) { return want < 0 || want == got; });
    if (!matches) {
      std::string got;
      for (auto d : it->second.shape) got += (got.empty() ? "" : "x") + std::to_string(d);
      std::string want;
      for (auto d : shape) want += (want.empty() ? "" : "x") + std::to_string(d);
      throw FormatError("tensor " + name + " has shape " + got + ", manifest implies " + want);
    }
    return it->second;
  }

 private:
  std::map<std::string, Tensor> tensors_;
};

using RowMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

RowMatrix as_matrix(const Tensor& t) {
  return Eigen::Map<const RowMatrix>(t.data.data(), t.shape[0], t.shape[1]);
}

Eigen::RowVectorXf as_row(const Tensor& t) {
  return Eigen::Map<const Eigen::RowVectorXf>(t.data.data(), static_cast<Eigen::Index>(t.data.size()));
}

}  // namespace

BertEncoder::BertEncoder(const EncoderManifest& m, std::map<std::string, Tensor> tensors)
    : hidden_(m.hidden_size),
      heads_(m.num_heads),
      max_position_(m.max_position),
      eps_(static_cast<float>(m.layer_norm_eps)),
      act_(m.hidden_act) {
  if (act_ != "gelu" && act_ != "gelu_new" && act_ != "gelu_pytorch_tanh" && act_ != "relu")
    throw FormatError("unsupported hidden_act '" + act_ + "'");
  TensorTable table(std::move(tensors));
  const std::int64_t h = m.hidden_size;
  const std::int64_t inter = m.intermediate_size;

  const Tensor& words = table.get("embeddings.word_embeddings.weight", {m.vocab_size > 0 ? m.vocab_size : -1, h});
  word_embeddings_ = as_matrix(words);
  position_embeddings_ = as_matrix(table.get("embeddings.position_embeddings.weight", {m.max_position, h}));
  token_type0_ = as_matrix(table.get("embeddings.token_type_embeddings.weight", {m.type_vocab_size, h})).row(0);
  embedding_norm_ = {as_row(table.get("embeddings.LayerNorm.weight", {h})),
                     as_row(table.get("embeddings.LayerNorm.bias", {h}))};

  auto linear = [&](const std::string& prefix, std::int64_t out, std::int64_t in) {
    Linear lin;
    lin.weight_t = as_matrix(table.get(prefix + ".weight", {out, in})).transpose();
    lin.bias = as_row(table.get(prefix + ".bias", {out}));
    return lin;
  };
  auto norm = [&](const std::string& prefix) {
    return LayerNorm{as_row(table.get(prefix + ".weight", {h})), as_row(table.get(prefix + ".bias", {h}))};
  };

  for (int l = 0; l < m.num_layers; ++l) {
    const std::string p = "encoder.layer." + std::to_string(l) + ".";
    Layer layer;
    layer.query = linear(p + "attention.self.query", h, h);
    layer.key = linear(p + "attention.self.key", h, h);
    layer.value = linear(p + "attention.self.value", h, h);
    layer.attention_out = linear(p + "attention.output.dense", h, h);
    layer.attention_norm = norm(p + "attention.output.LayerNorm");
    layer.intermediate = linear(p + "intermediate.dense", inter, h);
    layer.output = linear(p + "output.dense", h, inter);
    layer.output_norm = norm(p + "output.LayerNorm");
    layers_.push_back(std::move(layer));
  }
}

void BertEncoder::layer_norm(Matrix& x, const LayerNorm& ln) const {
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    auto row = x.row(r);
    const float mean = row.mean();
    row.array() -= mean;
    const float var = row.squaredNorm() / static_cast<float>(row.size());
    row *= 1.0f / std::sqrt(var + eps_);
    row = row.cwiseProduct(ln.gamma) + ln.beta;
  }
}

void BertEncoder::activation(Matrix& x) const {
  if (act_ == "gelu") {
    x = x.unaryExpr([](float v) { return 0.5f * v * (1.0f + std::erf(v * 0.70710678118654752f)); });
  } else if (act_ == "relu") {
    x = x.cwiseMax(0.0f);
  } else {
    x = x.unaryExpr([](float v) {
      return 0.5f * v * (1.0f + std::tanh(0.79788456080286536f * (v + 0.044715f * v * v * v)));
    });
  }
}

Eigen::MatrixXf BertEncoder::hidden_states(std::span<const std::int64_t> ids, int layer) const {
  if (layer < 0 || layer > num_layers())
    throw PreconditionError("layer " + std::to_string(layer) + " outside [0, " + std::to_string(num_layers()) + "]");
  const auto n = static_cast<Eigen::Index>(ids.size());
  if (n == 0) throw PreconditionError("empty piece sequence");
  if (n > max_position_) throw PreconditionError("piece sequence longer than the position table");

  Matrix x(n, hidden_);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto id = ids[static_cast<std::size_t>(i)];
    if (id < 0 || id >= word_embeddings_.rows()) throw PreconditionError("piece id out of vocabulary range");
    x.row(i) = word_embeddings_.row(id) + position_embeddings_.row(i) + token_type0_;
  }
  layer_norm(x, embedding_norm_);

  const int head_dim = hidden_ / heads_;
  const float scale = 1.0f / std::sqrt(static_cast<float>(head_dim));
  for (int l = 0; l < layer; ++l) {
    const Layer& L = layers_[static_cast<std::size_t>(l)];
    Matrix q = (x * L.query.weight_t).rowwise() + L.query.bias;
    Matrix k = (x * L.key.weight_t).rowwise() + L.key.bias;
    Matrix v = (x * L.value.weight_t).rowwise() + L.value.bias;
    Matrix context(n, hidden_);
    for (int h = 0; h < heads_; ++h) {
      const auto cols = Eigen::seqN(h * head_dim, head_dim);
      Matrix scores = (q(Eigen::all, cols) * k(Eigen::all, cols).transpose()) * scale;
      for (Eigen::Index r = 0; r < n; ++r) {
        auto row = scores.row(r);
        row.array() -= row.maxCoeff();
        row = row.array().exp().matrix();
        row /= row.sum();
      }
      context(Eigen::all, cols) = scores * v(Eigen::all, cols);
    }
    Matrix attn = (context * L.attention_out.weight_t).rowwise() + L.attention_out.bias;
    attn += x;
    layer_norm(attn, L.attention_norm);

    Matrix ff = (attn * L.intermediate.weight_t).rowwise() + L.intermediate.bias;
    activation(ff);
    Matrix out = (ff * L.output.weight_t).rowwise() + L.output.bias;
    out += attn;
    layer_norm(out, L.output_norm);
    x = std::move(out);
  }
  return x;
}

}  // namespace mderank
