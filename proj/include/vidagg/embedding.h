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

#ifndef VIDAGG_EMBEDDING_H_
#define VIDAGG_EMBEDDING_H_

#include <span>
#include <string>
#include <vector>

namespace vidagg {

// Per-frame relevance scores, one entry per frame row.
using ScoreVector = std::vector<double>;

// Softmax weights over frames together with the temperature that made them.
struct WeightVector {
  std::vector<double> weights;
  double tau = 0.0;
};

// Default softmax temperature for query-scoring.
inline constexpr double kDefaultTau = 0.1;
// Default number of uniformly sampled frames kept per video at test time.
inline constexpr int kDefaultFramesPerVideo = 120;

// Returns v / ||v||. Throws ZeroNorm when ||v|| < 1e-12 and NonFinite on any
// NaN/Inf entry.
std::vector<float> L2Normalize(std::span<const float> v);

// Dot product accumulated in double, left to right.
double Dot(std::span<const float> a, std::span<const float> b);

// A video's K x d matrix of unit-norm frame embeddings, row-major.
// Immutable once built.
class FrameMatrix {
 public:
  // Validates the raw rows and L2-normalizes each one.
  static FrameMatrix FromRaw(std::string video_id, int rows, int dim,
                             std::vector<float> data);
  // Same as FromRaw but only validates; rows must already have unit norm.
  static FrameMatrix FromNormalized(std::string video_id, int rows, int dim,
                                    std::vector<float> data);

  const std::string& id() const { return id_; }
  int rows() const { return rows_; }
  int dim() const { return dim_; }
  std::span<const float> row(int k) const {
    return {data_.data() + static_cast<size_t>(k) * dim_,
            static_cast<size_t>(dim_)};
  }
  std::span<const float> data() const { return data_; }

 private:
  FrameMatrix(std::string id, int rows, int dim, std::vector<float> data)
      : id_(std::move(id)), rows_(rows), dim_(dim), data_(std::move(data)) {}

  std::string id_;
  int rows_;
  int dim_;
  std::vector<float> data_;
};

// A unit-norm text (query or class prompt) embedding.
class TextVector {
 public:
  static TextVector FromRaw(std::string query_id, std::vector<float> raw);

  const std::string& id() const { return id_; }
  int dim() const { return static_cast<int>(vector_.size()); }
  std::span<const float> vector() const { return vector_; }

 private:
  TextVector(std::string id, std::vector<float> v)
      : id_(std::move(id)), vector_(std::move(v)) {}

  std::string id_;
  std::vector<float> vector_;
};

// scores[i] = <frames[i], query>. The raw-span overload does not require a
// unit-norm query. Throws DimMismatch.
ScoreVector FrameScores(const FrameMatrix& frames, std::span<const float> query);
ScoreVector FrameScores(const FrameMatrix& frames, const TextVector& query);

// weights[k] = exp(s_k / tau) / sum_j exp(s_j / tau), evaluated with the
// maximum score subtracted. Throws InvalidTau when tau <= 0 (or is not
// finite) and NonFinite for non-finite scores.
WeightVector SoftmaxWeights(std::span<const double> scores, double tau);

// Keeps rows floor(i * K / n) for i in [0, n). Returns the input unchanged
// when n >= K.
FrameMatrix UniformSubsample(const FrameMatrix& frames, int n);

}  // namespace vidagg

#endif  // VIDAGG_EMBEDDING_H_
