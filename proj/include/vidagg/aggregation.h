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

#ifndef VIDAGG_AGGREGATION_H_
#define VIDAGG_AGGREGATION_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vidagg/embedding.h"

namespace vidagg {

enum class Method { kMean, kQueryScoring, kTopK, kSelfAttention, kJointAttention };

// Whether frames are pooled into one embedding before comparing against the
// query (kFeature) or per-frame similarities are pooled directly (kScore).
enum class Source { kFeature, kScore };

inline constexpr int kDefaultTopK = 8;

struct AggregationConfig {
  Method method = Method::kQueryScoring;
  Source source = Source::kFeature;
  double tau = kDefaultTau;
  int topk_k = kDefaultTopK;
  // Feature-source aggregates are L2-normalized before the final dot product.
  bool renormalize_feature = true;

  // Throws InvalidTau / InvalidArgument on out-of-range fields.
  void Validate() const;
};

bool IsAttentionMethod(Method method);

// Names used on the command line and in reports: mean, query, topk,
// self-attn, joint-attn / feature, score.
std::string_view MethodName(Method method);
std::string_view SourceName(Source source);
// Throws InvalidArgument for unknown names.
Method ParseMethod(std::string_view name);
Source ParseSource(std::string_view name);

struct AggregatedEmbedding {
  std::vector<double> vector;
  bool renormalized = false;
};

// sum_k w_k * frames[k], optionally L2-normalized. Throws LengthMismatch.
AggregatedEmbedding WeightedMean(const FrameMatrix& frames,
                                 std::span<const double> weights,
                                 bool renormalize);

// Indices of the min(k, K) largest scores, ties to the lower index, returned
// in ascending index order.
std::vector<int> TopKSelect(std::span<const double> scores, int k);

// Query-video similarity under `config`. For attention methods
// `score_override` supplies the scorer output used for the softmax weighting;
// it must be present (MissingScores otherwise) and have length K.
double Similarity(const FrameMatrix& frames, const TextVector& query,
                  const AggregationConfig& config,
                  std::optional<std::span<const double>> score_override =
                      std::nullopt);

// The per-frame weights that `config` applies to `frames`. Mean and top-K
// yield uniform weights over their selected frames.
WeightVector AggregationWeights(const FrameMatrix& frames,
                                const TextVector& query,
                                const AggregationConfig& config,
                                std::optional<std::span<const double>>
                                    score_override = std::nullopt);

}  // namespace vidagg

#endif  // VIDAGG_AGGREGATION_H_
