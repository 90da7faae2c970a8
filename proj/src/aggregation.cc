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

#include "vidagg/aggregation.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vidagg/error.h"

namespace vidagg {
namespace {

std::vector<double> UniformWeights(int count) {
  return std::vector<double>(static_cast<size_t>(count), 1.0 / count);
}

std::vector<double> SelectionWeights(int total, std::span<const int> picked) {
  std::vector<double> w(static_cast<size_t>(total), 0.0);
  const double share = 1.0 / static_cast<double>(picked.size());
  for (int idx : picked) w[idx] = share;
  return w;
}

double DotWithQuery(std::span<const double> v, std::span<const float> q) {
  double acc = 0.0;
  for (size_t i = 0; i < v.size(); ++i) acc += v[i] * static_cast<double>(q[i]);
  return acc;
}

}  // namespace

void AggregationConfig::Validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorCode::kInvalidTau, "tau must be > 0");
  }
  if (topk_k < 1) {
    throw Error(ErrorCode::kInvalidArgument, "topk must be >= 1");
  }
}

bool IsAttentionMethod(Method method) {
  return method == Method::kSelfAttention || method == Method::kJointAttention;
}

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kMean:
      return "mean";
    case Method::kQueryScoring:
      return "query";
    case Method::kTopK:
      return "topk";
    case Method::kSelfAttention:
      return "self-attn";
    case Method::kJointAttention:
      return "joint-attn";
  }
  return "unknown";
}

std::string_view SourceName(Source source) {
  return source == Source::kFeature ? "feature" : "score";
}

Method ParseMethod(std::string_view name) {
  for (Method m : {Method::kMean, Method::kQueryScoring, Method::kTopK,
                   Method::kSelfAttention, Method::kJointAttention}) {
    if (MethodName(m) == name) return m;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown method '" + std::string(name) + "'");
}

Source ParseSource(std::string_view name) {
  if (name == "feature") return Source::kFeature;
  if (name == "score") return Source::kScore;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown source '" + std::string(name) + "'");
}

AggregatedEmbedding WeightedMean(const FrameMatrix& frames,
                                 std::span<const double> weights,
                                 bool renormalize) {
  if (static_cast<int>(weights.size()) != frames.rows()) {
    throw Error(ErrorCode::kLengthMismatch,
                "weight count " + std::to_string(weights.size()) +
                    " vs frame count " + std::to_string(frames.rows()));
  }
  AggregatedEmbedding out;
  out.vector.assign(static_cast<size_t>(frames.dim()), 0.0);
  for (int k = 0; k < frames.rows(); ++k) {
    const double w = weights[k];
    if (w == 0.0) continue;
    auto row = frames.row(k);
    for (size_t j = 0; j < row.size(); ++j) {
      out.vector[j] += w * static_cast<double>(row[j]);
    }
  }
  if (renormalize) {
    double sq = 0.0;
    for (double x : out.vector) sq += x * x;
    const double norm = std::sqrt(sq);
    // A zero aggregate (e.g. antipodal frames) has no direction; it is left
    // as-is and scores 0 against every query.
    if (norm >= 1e-12) {
      for (double& x : out.vector) x /= norm;
      out.renormalized = true;
    }
  }
  return out;
}

std::vector<int> TopKSelect(std::span<const double> scores, int k) {
  if (k < 1) {
    throw Error(ErrorCode::kInvalidArgument, "top-k size must be >= 1");
  }
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  const size_t keep = std::min(static_cast<size_t>(k), scores.size());
  std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                    [&](int a, int b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  order.resize(keep);
  std::sort(order.begin(), order.end());
  return order;
}

WeightVector AggregationWeights(
    const FrameMatrix& frames, const TextVector& query,
    const AggregationConfig& config,
    std::optional<std::span<const double>> score_override) {
  config.Validate();
  if (frames.dim() != query.dim()) {
    throw Error(ErrorCode::kDimMismatch,
                "frame dim " + std::to_string(frames.dim()) +
                    " vs query dim " + std::to_string(query.dim()));
  }
  switch (config.method) {
    case Method::kMean:
      return {UniformWeights(frames.rows()), config.tau};
    case Method::kQueryScoring:
      return SoftmaxWeights(FrameScores(frames, query), config.tau);
    case Method::kTopK: {
      const auto picked =
          TopKSelect(FrameScores(frames, query), config.topk_k);
      return {SelectionWeights(frames.rows(), picked), config.tau};
    }
    case Method::kSelfAttention:
    case Method::kJointAttention:
      if (!score_override.has_value()) {
        throw Error(ErrorCode::kMissingScores,
                    "attention methods need scorer output");
      }
      if (static_cast<int>(score_override->size()) != frames.rows()) {
        throw Error(ErrorCode::kLengthMismatch,
                    "scorer output length does not match frame count");
      }
      return SoftmaxWeights(*score_override, config.tau);
  }
  throw Error(ErrorCode::kInvalidArgument, "unhandled method");
}

double Similarity(const FrameMatrix& frames, const TextVector& query,
                  const AggregationConfig& config,
                  std::optional<std::span<const double>> score_override) {
  const WeightVector weights =
      AggregationWeights(frames, query, config, score_override);
  if (config.source == Source::kFeature) {
    const AggregatedEmbedding agg =
        WeightedMean(frames, weights.weights, config.renormalize_feature);
    return DotWithQuery(agg.vector, query.vector());
  }
  // Score source: pool query cosines. Attention methods only change how the
  // pooling weights are produced.
  const ScoreVector cosines = FrameScores(frames, query);
  double acc = 0.0;
  for (size_t k = 0; k < cosines.size(); ++k) {
    acc += weights.weights[k] * cosines[k];
  }
  return acc;
}

}  // namespace vidagg
