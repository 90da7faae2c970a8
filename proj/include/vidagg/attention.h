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

#ifndef VIDAGG_ATTENTION_H_
#define VIDAGG_ATTENTION_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vidagg/embedding.h"

namespace vidagg {

// A named f32 tensor as stored in a VWTS container. Rank-0 tensors hold one
// value.
struct Tensor {
  std::vector<uint32_t> shape;
  std::vector<float> data;
};

using TensorMap = std::map<std::string, Tensor>;

// VWTS container: "VWTS", u32 version (1), u32 tensor count, then per tensor
// u16 name length, name bytes, u8 rank, u32 dims[rank], f32 data row-major.
// All integers and floats little-endian. Tensors are written in name order.
void WriteTensorFile(const std::filesystem::path& path, const TensorMap& tensors);
TensorMap ReadTensorFile(const std::filesystem::path& path);

// One pre-LN transformer encoder layer. Matrices are stored input-major
// (in x out), so a projection is y = x * W + b.
struct EncoderLayerWeights {
  std::vector<float> wq, wk, wv, wo;  // d x d
  std::vector<float> bq, bk, bv, bo;  // d
  std::vector<float> ln1_gamma, ln1_beta;
  std::vector<float> ln2_gamma, ln2_beta;
  std::vector<float> ffn_w1;  // d x 4d
  std::vector<float> ffn_b1;  // 4d
  std::vector<float> ffn_w2;  // 4d x d
  std::vector<float> ffn_b2;  // d
};

// Parameters of the self-/joint-attention frame scorer: encoder layers
// followed by a linear head d -> 1 applied at every frame position.
struct ScorerWeights {
  int d = 0;
  int heads = 8;
  bool use_positional = false;
  int max_len = 0;                  // rows of `positional`
  std::vector<float> positional;    // max_len x d, frame positions only
  std::vector<EncoderLayerWeights> layers;
  std::vector<float> head_weight;   // d
  float head_bias = 0.0f;

  int n_layers() const { return static_cast<int>(layers.size()); }
};

inline constexpr int kDefaultHeads = 8;
inline constexpr int kFfnExpansion = 4;

// Throws BadMagic on a corrupt container, MissingTensor when a required
// tensor is absent, ShapeMismatch on inconsistent shapes or meta values.
ScorerWeights LoadScorerWeights(const std::filesystem::path& path);
ScorerWeights ScorerFromTensors(const TensorMap& tensors);
TensorMap ScorerToTensors(const ScorerWeights& weights);
void SaveScorerWeights(const std::filesystem::path& path,
                       const ScorerWeights& weights);

// Random scorer weights (scaled normal init, unit LN gains) for property
// tests and benchmarks. Deterministic in `seed`.
ScorerWeights RandomScorerWeights(int d, int heads, int n_layers,
                                  bool use_positional, int max_len,
                                  uint64_t seed);

// Query-independent frame scores. Throws DimMismatch.
ScoreVector SelfAttentionScores(const FrameMatrix& frames,
                                const ScorerWeights& weights);

// Frames followed by the raw query token; scores are read from the K frame
// positions. Throws DimMismatch.
ScoreVector JointAttentionScores(const FrameMatrix& frames,
                                 const TextVector& query,
                                 const ScorerWeights& weights);

}  // namespace vidagg

#endif  // VIDAGG_ATTENTION_H_
