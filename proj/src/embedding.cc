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

#include "vidagg/embedding.h"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "vidagg/error.h"

namespace vidagg {
namespace {

constexpr double kMinNorm = 1e-12;
constexpr double kUnitTolerance = 1e-4;

void CheckFinite(std::span<const float> v, const std::string& what) {
  for (float x : v) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::kNonFinite, what + " contains NaN or Inf");
    }
  }
}

void CheckShape(const std::string& id, int rows, int dim, size_t size) {
  if (rows < 1) {
    throw Error(ErrorCode::kZeroFrames, "video '" + id + "' has no frames");
  }
  if (dim < 1) {
    throw Error(ErrorCode::kDimMismatch,
                "video '" + id + "' has embedding dimension < 1");
  }
  if (size != static_cast<size_t>(rows) * static_cast<size_t>(dim)) {
    throw Error(ErrorCode::kLengthMismatch,
                "video '" + id + "' data size does not match rows x dim");
  }
}

}  // namespace

std::vector<float> L2Normalize(std::span<const float> v) {
  if (v.empty()) {
    throw Error(ErrorCode::kZeroNorm, "cannot normalize an empty vector");
  }
  CheckFinite(v, "vector");
  const double norm = std::sqrt(Dot(v, v));
  if (norm < kMinNorm) {
    throw Error(ErrorCode::kZeroNorm, "vector norm below 1e-12");
  }
  std::vector<float> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    out[i] = static_cast<float>(static_cast<double>(v[i]) / norm);
  }
  return out;
}

double Dot(std::span<const float> a, std::span<const float> b) {
  double acc = 0.0;
  const size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return acc;
}

FrameMatrix FrameMatrix::FromRaw(std::string video_id, int rows, int dim,
                                 std::vector<float> data) {
  CheckShape(video_id, rows, dim, data.size());
  CheckFinite(data, "video '" + video_id + "'");
  for (int k = 0; k < rows; ++k) {
    std::span<float> row(data.data() + static_cast<size_t>(k) * dim,
                         static_cast<size_t>(dim));
    const double norm = std::sqrt(Dot(row, row));
    if (norm < kMinNorm) {
      throw Error(ErrorCode::kZeroNorm, "video '" + video_id + "' frame " +
                                            std::to_string(k) +
                                            " has zero norm");
    }
    for (float& x : row) x = static_cast<float>(x / norm);
  }
  return FrameMatrix(std::move(video_id), rows, dim, std::move(data));
}

FrameMatrix FrameMatrix::FromNormalized(std::string video_id, int rows,
                                        int dim, std::vector<float> data) {
  CheckShape(video_id, rows, dim, data.size());
  CheckFinite(data, "video '" + video_id + "'");
  for (int k = 0; k < rows; ++k) {
    std::span<const float> row(data.data() + static_cast<size_t>(k) * dim,
                               static_cast<size_t>(dim));
    if (std::abs(std::sqrt(Dot(row, row)) - 1.0) > kUnitTolerance) {
      throw Error(ErrorCode::kInvalidArgument,
                  "video '" + video_id + "' frame " + std::to_string(k) +
                      " is not unit norm");
    }
  }
  return FrameMatrix(std::move(video_id), rows, dim, std::move(data));
}

TextVector TextVector::FromRaw(std::string query_id, std::vector<float> raw) {
  return TextVector(std::move(query_id), L2Normalize(raw));
}

ScoreVector FrameScores(const FrameMatrix& frames,
                        std::span<const float> query) {
  if (static_cast<int>(query.size()) != frames.dim()) {
    throw Error(ErrorCode::kDimMismatch,
                "frame dim " + std::to_string(frames.dim()) +
                    " vs query dim " + std::to_string(query.size()));
  }
  ScoreVector scores(static_cast<size_t>(frames.rows()));
  for (int k = 0; k < frames.rows(); ++k) {
    scores[k] = Dot(frames.row(k), query);
  }
  return scores;
}

ScoreVector FrameScores(const FrameMatrix& frames, const TextVector& query) {
  return FrameScores(frames, query.vector());
}

WeightVector SoftmaxWeights(std::span<const double> scores, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorCode::kInvalidTau, "tau must be > 0");
  }
  if (scores.empty()) {
    throw Error(ErrorCode::kLengthMismatch, "empty score vector");
  }
  double max_score = scores[0];
  for (double s : scores) {
    if (!std::isfinite(s)) {
      throw Error(ErrorCode::kNonFinite, "score vector contains NaN or Inf");
    }
    max_score = std::max(max_score, s);
  }
  WeightVector out;
  out.tau = tau;
  out.weights.resize(scores.size());
  double total = 0.0;
  for (size_t k = 0; k < scores.size(); ++k) {
    out.weights[k] = std::exp((scores[k] - max_score) / tau);
    total += out.weights[k];
  }
  // total >= 1 because the max entry contributes exp(0).
  for (double& w : out.weights) w /= total;
  return out;
}

FrameMatrix UniformSubsample(const FrameMatrix& frames, int n) {
  if (n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "subsample size must be >= 1");
  }
  const int k_total = frames.rows();
  if (n >= k_total) return frames;
  const size_t dim = static_cast<size_t>(frames.dim());
  std::vector<float> data;
  data.reserve(static_cast<size_t>(n) * dim);
  for (int i = 0; i < n; ++i) {
    const int src = static_cast<int>(static_cast<int64_t>(i) * k_total / n);
    auto row = frames.row(src);
    data.insert(data.end(), row.begin(), row.end());
  }
  return FrameMatrix::FromNormalized(frames.id(), n, frames.dim(),
                                     std::move(data));
}

}  // namespace vidagg
