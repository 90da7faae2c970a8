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

#ifndef VIDAGG_RETRIEVAL_H_
#define VIDAGG_RETRIEVAL_H_

#include <atomic>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "vidagg/aggregation.h"
#include "vidagg/attention.h"
#include "vidagg/embedding.h"
#include "vidagg/score_matrix.h"
#include "vidagg/store.h"

namespace vidagg {

// Corpus of subsampled frame matrices plus their precomputed normalized mean
// embeddings. Immutable after Build; safe to share across threads.
class RetrievalIndex {
 public:
  // Normalizes every entry, subsamples to `frames_per_video` and precomputes
  // means. Throws on invalid stores or frames_per_video < 1.
  static RetrievalIndex Build(const EmbeddingStore& store,
                              int frames_per_video = kDefaultFramesPerVideo);
  static RetrievalIndex Build(std::vector<FrameMatrix> videos,
                              int frames_per_video = kDefaultFramesPerVideo);

  RetrievalIndex(RetrievalIndex&& other) noexcept;
  RetrievalIndex& operator=(RetrievalIndex&& other) noexcept;

  int size() const { return static_cast<int>(videos_.size()); }
  int dim() const { return dim_; }
  const std::string& video_id(int i) const { return videos_[i].id(); }
  std::vector<std::string> video_ids() const;
  // Index of `id`, or -1.
  int Find(const std::string& id) const;

  std::span<const float> mean_embedding(int i) const {
    return {means_.data() + static_cast<size_t>(i) * dim_,
            static_cast<size_t>(dim_)};
  }
  // Every call is counted; see frame_access_count().
  const FrameMatrix& frames(int i) const;

  // Number of frames() lookups so far. Mean-pooled ranking never touches
  // frames, which tests assert through this counter.
  uint64_t frame_access_count() const {
    return frame_accesses_.load(std::memory_order_relaxed);
  }

  // Payload bytes of the retained tensors.
  uint64_t mean_bytes() const { return means_.size() * sizeof(float); }
  uint64_t frame_bytes() const;

  // Similarity of video `i` to `query` under `config`. Mean/feature with
  // renormalization reads the precomputed mean; every other configuration
  // aggregates frames. `scorer` is required for attention methods
  // (MissingScorer) and ignored otherwise.
  double Score(int i, const TextVector& query, const AggregationConfig& config,
               const ScorerWeights* scorer = nullptr) const;

 private:
  RetrievalIndex(std::vector<FrameMatrix> videos, std::vector<float> means,
                 int dim);

  std::vector<FrameMatrix> videos_;
  std::vector<float> means_;  // size() x dim, row-major
  std::unordered_map<std::string, int> rows_by_id_;
  int dim_ = 0;
  mutable std::atomic<uint64_t> frame_accesses_{0};
};

struct RankedItem {
  std::string video_id;
  double similarity = 0.0;
};

// Descending similarity; equal similarities ordered by ascending video id.
struct RankedList {
  std::vector<RankedItem> items;

  // 1-based position of `video_id`, or 0 when absent.
  int RankOf(const std::string& video_id) const;
};

RankedList RankT2V(const RetrievalIndex& index, const TextVector& query,
                   const AggregationConfig& config,
                   const ScorerWeights* scorer = nullptr);

// Coarse ranking on mean embeddings, then the top min(rerank_depth, v)
// candidates are re-scored with `config` and re-ordered. The tail keeps its
// coarse order. Throws InvalidArgument when rerank_depth < 1.
RankedList TwoStageRank(const RetrievalIndex& index, const TextVector& query,
                        const AggregationConfig& config, int rerank_depth,
                        const ScorerWeights* scorer = nullptr);

// v x q matrix, entry (i, j) = similarity(video i, query j). Work is split
// across `workers` threads by query; every entry is computed by the same
// sequential code so the result does not depend on the split.
ScoreMatrix SimilarityMatrix(const RetrievalIndex& index,
                             std::span<const TextVector> queries,
                             const AggregationConfig& config,
                             const ScorerWeights* scorer = nullptr,
                             int workers = 1);

// Video-to-class scores for classification as video-to-text retrieval;
// a v x C matrix.
ScoreMatrix Classify(const RetrievalIndex& index,
                     std::span<const TextVector> class_prompts,
                     const AggregationConfig& config,
                     const ScorerWeights* scorer = nullptr, int workers = 1);

// 1-based rank of row `target` within column `col` under the descending
// similarity / ascending id total order.
int RankInColumn(const ScoreMatrix& scores, std::span<const std::string> ids,
                 int col, int target);

// Rank of the ground-truth video for every pair in `pairs`, in order.
// rerank_depth == 0 ranks exhaustively; otherwise two-stage.
std::vector<int> GroundTruthRanks(const RetrievalIndex& index,
                                  std::span<const TextVector> queries,
                                  std::span<const RetrievalPair> pairs,
                                  const AggregationConfig& config,
                                  const ScorerWeights* scorer = nullptr,
                                  int rerank_depth = 0, int workers = 1);

}  // namespace vidagg

#endif  // VIDAGG_RETRIEVAL_H_
