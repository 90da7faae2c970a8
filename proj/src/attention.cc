/*
 * Copyright 2026 The vidagg Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "vidagg/attention.h"

#include <cmath>
#include <random>

#include "binary_io.h"
#include "vidagg/error.h"

namespace vidagg {
namespace {

constexpr char kTensorMagic[] = "VWTS";
constexpr uint32_t kTensorVersion = 1;
constexpr uint8_t kMaxRank = 8;
constexpr double kLayerNormEps = 1e-5;

// Row-major n x cols activations in double.
struct Activations {
  int rows = 0;
  int cols = 0;
  std::vector<double> v;

  Activations(int r, int c) : rows(r), cols(c), v(static_cast<size_t>(r) * c, 0.0) {}
  double* row(int i) { return v.data() + static_cast<size_t>(i) * cols; }
  const double* row(int i) const { return v.data() + static_cast<size_t>(i) * cols; }
};

// y = x * W + b with W stored in x out.
Activations Affine(const Activations& x, const std::vector<float>& w,
                   const std::vector<float>& b, int out) {
  Activations y(x.rows, out);
  for (int i = 0; i < x.rows; ++i) {
    double* yr = y.row(i);
    for (int o = 0; o < out; ++o) yr[o] = b[o];
    const double* xr = x.row(i);
    for (int k = 0; k < x.cols; ++k) {
      const double xk = xr[k];
      const float* wr = w.data() + static_cast<size_t>(k) * out;
      for (int o = 0; o < out; ++o) yr[o] += xk * wr[o];
    }
  }
  return y;
}

Activations LayerNorm(const Activations& x, const std::vector<float>& gamma,
                      const std::vector<float>& beta) {
  Activations y(x.rows, x.cols);
  for (int i = 0; i < x.rows; ++i) {
    const double* xr = x.row(i);
    double mean = 0.0;
    for (int j = 0; j < x.cols; ++j) mean += xr[j];
    mean /= x.cols;
    double var = 0.0;
    for (int j = 0; j < x.cols; ++j) var += (xr[j] - mean) * (xr[j] - mean);
    var /= x.cols;
    const double inv = 1.0 / std::sqrt(var + kLayerNormEps);
    double* yr = y.row(i);
    for (int j = 0; j < x.cols; ++j) {
      yr[j] = (xr[j] - mean) * inv * gamma[j] + beta[j];
    }
  }
  return y;
}

double Gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0))); }

Activations MultiHeadAttention(const Activations& h,
                               const EncoderLayerWeights& layer, int d,
                               int heads) {
  const Activations q = Affine(h, layer.wq, layer.bq, d);
  const Activations k = Affine(h, layer.wk, layer.bk, d);
  const Activations v = Affine(h, layer.wv, layer.bv, d);
  const int n = h.rows;
  const int head_dim = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
  Activations context(n, d);
  std::vector<double> logits(static_cast<size_t>(n));
  for (int hd = 0; hd < heads; ++hd) {
    const int off = hd * head_dim;
    for (int i = 0; i < n; ++i) {
      double max_logit = -INFINITY;
      for (int j = 0; j < n; ++j) {
        double dot = 0.0;
        for (int c = 0; c < head_dim; ++c) dot += q.row(i)[off + c] * k.row(j)[off + c];
        logits[j] = dot * scale;
        max_logit = std::max(max_logit, logits[j]);
      }
      double total = 0.0;
      for (int j = 0; j < n; ++j) {
        logits[j] = std::exp(logits[j] - max_logit);
        total += logits[j];
      }
      double* out = context.row(i) + off;
      for (int j = 0; j < n; ++j) {
        const double a = logits[j] / total;
        for (int c = 0; c < head_dim; ++c) out[c] += a * v.row(j)[off + c];
      }
    }
  }
  return Affine(context, layer.wo, layer.bo, d);
}

void EncoderLayer(Activations& x, const EncoderLayerWeights& layer, int d,
                  int heads) {
  const Activations attn =
      MultiHeadAttention(LayerNorm(x, layer.ln1_gamma, layer.ln1_beta), layer,
                         d, heads);
  for (size_t i = 0; i < x.v.size(); ++i) x.v[i] += attn.v[i];

  Activations hidden = Affine(LayerNorm(x, layer.ln2_gamma, layer.ln2_beta),
                              layer.ffn_w1, layer.ffn_b1, kFfnExpansion * d);
  for (double& a : hidden.v) a = Gelu(a);
  const Activations ffn = Affine(hidden, layer.ffn_w2, layer.ffn_b2, d);
  for (size_t i = 0; i < x.v.size(); ++i) x.v[i] += ffn.v[i];
}

// Runs the encoder over `tokens` and applies the head to the first
// `scored_rows` positions.
ScoreVector Forward(Activations tokens, int scored_rows,
                    const ScorerWeights& w) {
  for (const auto& layer : w.layers) EncoderLayer(tokens, layer, w.d, w.heads);
  ScoreVector scores(static_cast<size_t>(scored_rows));
  for (int i = 0; i < scored_rows; ++i) {
    double s = w.head_bias;
    const double* r = tokens.row(i);
    for (int j = 0; j < w.d; ++j) s += r[j] * w.head_weight[j];
    scores[i] = s;
  }
  return scores;
}

Activations FrameTokens(const FrameMatrix& frames, const ScorerWeights& w,
                        int extra_rows) {
  if (frames.dim() != w.d) {
    throw Error(ErrorCode::kDimMismatch,
                "frame dim " + std::to_string(frames.dim()) + " vs scorer dim " +
                    std::to_string(w.d));
  }
  if (w.use_positional && frames.rows() > w.max_len) {
    throw Error(ErrorCode::kDimMismatch,
                "video has " + std::to_string(frames.rows()) +
                    " frames but positional table holds " +
                    std::to_string(w.max_len));
  }
  Activations x(frames.rows() + extra_rows, w.d);
  for (int i = 0; i < frames.rows(); ++i) {
    auto src = frames.row(i);
    double* dst = x.row(i);
    for (int j = 0; j < w.d; ++j) dst[j] = src[j];
    if (w.use_positional) {
      const float* pos = w.positional.data() + static_cast<size_t>(i) * w.d;
      for (int j = 0; j < w.d; ++j) dst[j] += pos[j];
    }
  }
  return x;
}

// --- tensor container -------------------------------------------------------

const Tensor& Require(const TensorMap& m, const std::string& name) {
  auto it = m.find(name);
  if (it == m.end()) {
    throw Error(ErrorCode::kMissingTensor, "missing tensor '" + name + "'");
  }
  return it->second;
}

std::string ShapeString(const std::vector<uint32_t>& shape) {
  std::string s = "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

std::vector<float> Expect(const TensorMap& m, const std::string& name,
                          std::vector<uint32_t> shape) {
  const Tensor& t = Require(m, name);
  if (t.shape != shape) {
    throw Error(ErrorCode::kShapeMismatch,
                "tensor '" + name + "' has shape " + ShapeString(t.shape) +
                    ", expected " + ShapeString(shape));
  }
  for (float x : t.data) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::kShapeMismatch,
                  "tensor '" + name + "' contains NaN or Inf");
    }
  }
  return t.data;
}

int ScalarInt(const TensorMap& m, const std::string& name) {
  const Tensor& t = Require(m, name);
  if (t.data.size() != 1) {
    throw Error(ErrorCode::kShapeMismatch, "'" + name + "' must be a scalar");
  }
  const float v = t.data[0];
  if (!std::isfinite(v) || v != std::floor(v) || v < 0.0f || v > 1e7f) {
    throw Error(ErrorCode::kShapeMismatch,
                "'" + name + "' must be a non-negative integer");
  }
  return static_cast<int>(v);
}

Tensor Scalar(float v) { return Tensor{{}, {v}}; }

std::string LayerPrefix(int i) { return "layer" + std::to_string(i) + "."; }

}  // namespace

void WriteTensorFile(const std::filesystem::path& path,
                     const TensorMap& tensors) {
  internal::ByteWriter out;
  out.Bytes(std::string_view(kTensorMagic, 4));
  out.U32(kTensorVersion);
  out.U32(static_cast<uint32_t>(tensors.size()));
  for (const auto& [name, t] : tensors) {
    if (name.size() > UINT16_MAX || t.shape.size() > kMaxRank) {
      throw Error(ErrorCode::kInvalidArgument, "tensor '" + name + "' not encodable");
    }
    size_t count = 1;
    for (uint32_t dim : t.shape) count *= dim;
    if (count != t.data.size()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "tensor '" + name + "' data does not match its shape");
    }
    out.U16(static_cast<uint16_t>(name.size()));
    out.Bytes(name);
    out.U8(static_cast<uint8_t>(t.shape.size()));
    for (uint32_t dim : t.shape) out.U32(dim);
    for (float x : t.data) out.F32(x);
  }
  internal::WriteFileBytes(path, out.buffer());
}

TensorMap ReadTensorFile(const std::filesystem::path& path) {
  const std::vector<uint8_t> bytes = internal::ReadFileBytes(path);
  internal::ByteReader in(bytes, ErrorCode::kBadMagic);
  if (in.remaining() < 4 || in.Bytes(4) != std::string_view(kTensorMagic, 4)) {
    throw Error(ErrorCode::kBadMagic, "not a VWTS file: '" + path.string() + "'");
  }
  if (const uint32_t version = in.U32(); version != kTensorVersion) {
    throw Error(ErrorCode::kBadMagic,
                "unsupported VWTS version " + std::to_string(version));
  }
  const uint32_t count = in.U32();
  TensorMap tensors;
  for (uint32_t t = 0; t < count; ++t) {
    const uint16_t name_len = in.U16();
    std::string name = in.Bytes(name_len);
    const uint8_t rank = in.U8();
    if (rank > kMaxRank) {
      throw Error(ErrorCode::kBadMagic, "tensor '" + name + "' rank too large");
    }
    Tensor tensor;
    uint64_t elements = 1;
    for (uint8_t r = 0; r < rank; ++r) {
      const uint32_t dim = in.U32();
      tensor.shape.push_back(dim);
      elements *= dim;
      // Bound the element count by the bytes left so a corrupt header can
      // never request an oversized allocation.
      if (elements > in.remaining() / 4) {
        throw Error(ErrorCode::kBadMagic,
                    "tensor '" + name + "' extends past end of file");
      }
    }
    tensor.data.resize(static_cast<size_t>(elements));
    for (auto& x : tensor.data) x = in.F32();
    if (!tensors.emplace(std::move(name), std::move(tensor)).second) {
      throw Error(ErrorCode::kBadMagic, "duplicate tensor name");
    }
  }
  if (in.remaining() != 0) {
    throw Error(ErrorCode::kBadMagic, "trailing bytes after last tensor");
  }
  return tensors;
}

ScorerWeights ScorerFromTensors(const TensorMap& m) {
  ScorerWeights w;
  w.d = ScalarInt(m, "meta.d");
  w.heads = ScalarInt(m, "meta.H");
  const int n_layers = ScalarInt(m, "meta.n_layers");
  w.use_positional = ScalarInt(m, "meta.use_positional") != 0;
  if (w.d < 1 || w.heads < 1 || w.d % w.heads != 0) {
    throw Error(ErrorCode::kShapeMismatch,
                "meta.d must be a positive multiple of meta.H");
  }
  if (n_layers < 1) {
    throw Error(ErrorCode::kShapeMismatch, "meta.n_layers must be >= 1");
  }
  const auto d = static_cast<uint32_t>(w.d);
  const uint32_t hidden = kFfnExpansion * d;
  for (int i = 0; i < n_layers; ++i) {
    const std::string p = LayerPrefix(i);
    EncoderLayerWeights l;
    l.wq = Expect(m, p + "attn.q.weight", {d, d});
    l.bq = Expect(m, p + "attn.q.bias", {d});
    l.wk = Expect(m, p + "attn.k.weight", {d, d});
    l.bk = Expect(m, p + "attn.k.bias", {d});
    l.wv = Expect(m, p + "attn.v.weight", {d, d});
    l.bv = Expect(m, p + "attn.v.bias", {d});
    l.wo = Expect(m, p + "attn.o.weight", {d, d});
    l.bo = Expect(m, p + "attn.o.bias", {d});
    l.ln1_gamma = Expect(m, p + "ln1.weight", {d});
    l.ln1_beta = Expect(m, p + "ln1.bias", {d});
    l.ln2_gamma = Expect(m, p + "ln2.weight", {d});
    l.ln2_beta = Expect(m, p + "ln2.bias", {d});
    l.ffn_w1 = Expect(m, p + "ffn.fc1.weight", {d, hidden});
    l.ffn_b1 = Expect(m, p + "ffn.fc1.bias", {hidden});
    l.ffn_w2 = Expect(m, p + "ffn.fc2.weight", {hidden, d});
    l.ffn_b2 = Expect(m, p + "ffn.fc2.bias", {d});
    w.layers.push_back(std::move(l));
  }
  w.head_weight = Expect(m, "head.weight", {d, 1});
  w.head_bias = Expect(m, "head.bias", {1})[0];
  if (w.use_positional) {
    const Tensor& pos = Require(m, "pos.table");
    if (pos.shape.size() != 2 || pos.shape[1] != d || pos.shape[0] == 0) {
      throw Error(ErrorCode::kShapeMismatch,
                  "tensor 'pos.table' must be max_len x d");
    }
    w.max_len = static_cast<int>(pos.shape[0]);
    w.positional = Expect(m, "pos.table", pos.shape);
  }
  return w;
}

TensorMap ScorerToTensors(const ScorerWeights& w) {
  const auto d = static_cast<uint32_t>(w.d);
  const uint32_t hidden = kFfnExpansion * d;
  TensorMap m;
  m["meta.d"] = Scalar(static_cast<float>(w.d));
  m["meta.H"] = Scalar(static_cast<float>(w.heads));
  m["meta.n_layers"] = Scalar(static_cast<float>(w.n_layers()));
  m["meta.use_positional"] = Scalar(w.use_positional ? 1.0f : 0.0f);
  for (int i = 0; i < w.n_layers(); ++i) {
    const std::string p = LayerPrefix(i);
    const EncoderLayerWeights& l = w.layers[i];
    m[p + "attn.q.weight"] = {{d, d}, l.wq};
    m[p + "attn.q.bias"] = {{d}, l.bq};
    m[p + "attn.k.weight"] = {{d, d}, l.wk};
    m[p + "attn.k.bias"] = {{d}, l.bk};
    m[p + "attn.v.weight"] = {{d, d}, l.wv};
    m[p + "attn.v.bias"] = {{d}, l.bv};
    m[p + "attn.o.weight"] = {{d, d}, l.wo};
    m[p + "attn.o.bias"] = {{d}, l.bo};
    m[p + "ln1.weight"] = {{d}, l.ln1_gamma};
    m[p + "ln1.bias"] = {{d}, l.ln1_beta};
    m[p + "ln2.weight"] = {{d}, l.ln2_gamma};
    m[p + "ln2.bias"] = {{d}, l.ln2_beta};
    m[p + "ffn.fc1.weight"] = {{d, hidden}, l.ffn_w1};
    m[p + "ffn.fc1.bias"] = {{hidden}, l.ffn_b1};
    m[p + "ffn.fc2.weight"] = {{hidden, d}, l.ffn_w2};
    m[p + "ffn.fc2.bias"] = {{d}, l.ffn_b2};
  }
  m["head.weight"] = {{d, 1}, w.head_weight};
  m["head.bias"] = {{1}, {w.head_bias}};
  if (w.use_positional) {
    m["pos.table"] = {{static_cast<uint32_t>(w.max_len), d}, w.positional};
  }
  return m;
}

ScorerWeights LoadScorerWeights(const std::filesystem::path& path) {
  return ScorerFromTensors(ReadTensorFile(path));
}

void SaveScorerWeights(const std::filesystem::path& path,
                       const ScorerWeights& weights) {
  WriteTensorFile(path, ScorerToTensors(weights));
}

ScorerWeights RandomScorerWeights(int d, int heads, int n_layers,
                                  bool use_positional, int max_len,
                                  uint64_t seed) {
  if (d < 1 || heads < 1 || d % heads != 0 || n_layers < 1) {
    throw Error(ErrorCode::kInvalidArgument, "invalid scorer dimensions");
  }
  std::mt19937_64 rng(seed);
  auto normal = [&](size_t n, double stddev) {
    std::normal_distribution<float> dist(0.0f, static_cast<float>(stddev));
    std::vector<float> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
  };
  const size_t dd = static_cast<size_t>(d);
  const size_t hidden = kFfnExpansion * dd;
  const double s_in = 1.0 / std::sqrt(static_cast<double>(d));
  const double s_hidden = 1.0 / std::sqrt(static_cast<double>(hidden));

  ScorerWeights w;
  w.d = d;
  w.heads = heads;
  w.use_positional = use_positional;
  for (int i = 0; i < n_layers; ++i) {
    EncoderLayerWeights l;
    l.wq = normal(dd * dd, s_in);
    l.wk = normal(dd * dd, s_in);
    l.wv = normal(dd * dd, s_in);
    l.wo = normal(dd * dd, s_in);
    l.bq = normal(dd, 0.02);
    l.bk = normal(dd, 0.02);
    l.bv = normal(dd, 0.02);
    l.bo = normal(dd, 0.02);
    l.ln1_gamma.assign(dd, 1.0f);
    l.ln1_beta.assign(dd, 0.0f);
    l.ln2_gamma.assign(dd, 1.0f);
    l.ln2_beta.assign(dd, 0.0f);
    l.ffn_w1 = normal(dd * hidden, s_in);
    l.ffn_b1 = normal(hidden, 0.02);
    l.ffn_w2 = normal(hidden * dd, s_hidden);
    l.ffn_b2 = normal(dd, 0.02);
    w.layers.push_back(std::move(l));
  }
  w.head_weight = normal(dd, s_in);
  w.head_bias = 0.0f;
  if (use_positional) {
    w.max_len = max_len;
    w.positional = normal(static_cast<size_t>(max_len) * dd, 0.02);
  }
  return w;
}

ScoreVector SelfAttentionScores(const FrameMatrix& frames,
                                const ScorerWeights& weights) {
  return Forward(FrameTokens(frames, weights, 0), frames.rows(), weights);
}

ScoreVector JointAttentionScores(const FrameMatrix& frames,
                                 const TextVector& query,
                                 const ScorerWeights& weights) {
  if (query.dim() != weights.d) {
    throw Error(ErrorCode::kDimMismatch,
                "query dim " + std::to_string(query.dim()) + " vs scorer dim " +
                    std::to_string(weights.d));
  }
  Activations tokens = FrameTokens(frames, weights, 1);
  double* last = tokens.row(frames.rows());
  auto q = query.vector();
  for (int j = 0; j < weights.d; ++j) last[j] = q[j];
  return Forward(std::move(tokens), frames.rows(), weights);
}

}  // namespace vidagg
