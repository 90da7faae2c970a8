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

#include "vidagg/retrieval.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "vidagg/error.h"

namespace vidagg {
namespace {

bool RanksBefore(double sim_a, const std::string& id_a, double sim_b,
                 const std::string& id_b) {
  if (sim_a != sim_b) return sim_a > sim_b;
  return id_a < id_b;
}

void SortRanked(std::vector<RankedItem>::iterator first,
                std::vector<RankedItem>::iterator last) {
  std::sort(first, last, [](const RankedItem& a, const RankedItem& b) {
    return RanksBefore(a.similarity, a.video_id, b.similarity, b.video_id);
  });
}

RankedList RankBy(const RetrievalIndex& index, const TextVector& query,
                  const AggregationConfig& config, const ScorerWeights* scorer) {
  RankedList out;
  out.items.reserve(static_cast<size_t>(index.size()));
  for (int i = 0; i < index.size(); ++i) {
    out.items.push_back({index.video_id(i), index.Score(i, query, config, scorer)});
  }
  SortRanked(out.items.begin(), out.items.end());
  return out;
}

AggregationConfig CoarseConfig(const AggregationConfig& config) {
  AggregationConfig coarse;
  coarse.method = Method::kMean;
  coarse.source = Source::kFeature;
  coarse.tau = config.tau;
  coarse.renormalize_feature = true;
  return coarse;
}

}  // namespace

RetrievalIndex::RetrievalIndex(std::vector<FrameMatrix> videos,
                               std::vector<float> means, int dim)
    : videos_(std::move(videos)), means_(std::move(means)), dim_(dim) {
  for (int i = 0; i < size(); ++i) rows_by_id_.emplace(videos_[i].id(), i);
}

RetrievalIndex::RetrievalIndex(RetrievalIndex&& other) noexcept
    : videos_(std::move(other.videos_)),
      means_(std::move(other.means_)),
      rows_by_id_(std::move(other.rows_by_id_)),
      dim_(other.dim_),
      frame_accesses_(other.frame_accesses_.load()) {}

RetrievalIndex& RetrievalIndex::operator=(RetrievalIndex&& other) noexcept {
  videos_ = std::move(other.videos_);
  means_ = std::move(other.means_);
  rows_by_id_ = std::move(other.rows_by_id_);
  dim_ = other.dim_;
  frame_accesses_.store(other.frame_accesses_.load());
  return *this;
}

RetrievalIndex RetrievalIndex::Build(const EmbeddingStore& store,
                                     int frames_per_video) {
  store.Validate();
  return Build(ToFrameMatrices(store), frames_per_video);
}

RetrievalIndex RetrievalIndex::Build(std::vector<FrameMatrix> videos,
                                     int frames_per_video) {
  if (frames_per_video < 1) {
    throw Error(ErrorCode::kInvalidArgument, "frames per video must be >= 1");
  }
  if (videos.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot index an empty corpus");
  }
  const int dim = videos.front().dim();
  std::vector<FrameMatrix> kept;
  kept.reserve(videos.size());
  std::vector<float> means;
  means.reserve(videos.size() * static_cast<size_t>(dim));
  std::unordered_map<std::string, int> ids;
  for (FrameMatrix& v : videos) {
    if (v.dim() != dim) {
      throw Error(ErrorCode::kDimMismatch, "video '" + v.id() + "' dimension differs");
    }
    if (!ids.emplace(v.id(), 0).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate video id '" + v.id() + "'");
    }
    FrameMatrix sampled = UniformSubsample(v, frames_per_video);
    const std::vector<double> uniform(static_cast<size_t>(sampled.rows()),
                                      1.0 / sampled.rows());
    const AggregatedEmbedding mean = WeightedMean(sampled, uniform, true);
    for (double x : mean.vector) means.push_back(static_cast<float>(x));
    kept.push_back(std::move(sampled));
  }
  return RetrievalIndex(std::move(kept), std::move(means), dim);
}

std::vector<std::string> RetrievalIndex::video_ids() const {
  std::vector<std::string> ids;
  ids.reserve(videos_.size());
  for (const auto& v : videos_) ids.push_back(v.id());
  return ids;
}

int RetrievalIndex::Find(const std::string& id) const {
  auto it = rows_by_id_.find(id);
  return it == rows_by_id_.end() ? -1 : it->second;
}

const FrameMatrix& RetrievalIndex::frames(int i) const {
  frame_accesses_.fetch_add(1, std::memory_order_relaxed);
  return videos_[i];
}

uint64_t RetrievalIndex::frame_bytes() const {
  uint64_t total = 0;
  for (const auto& v : videos_) total += v.data().size() * sizeof(float);
  return total;
}

double RetrievalIndex::Score(int i, const TextVector& query,
                             const AggregationConfig& config,
                             const ScorerWeights* scorer) const {
  config.Validate();
  if (query.dim() != dim_) {
    throw Error(ErrorCode::kDimMismatch,
                "query dim " + std::to_string(query.dim()) + " vs index dim " +
                    std::to_string(dim_));
  }
  if (config.method == Method::kMean && config.source == Source::kFeature &&
      config.renormalize_feature) {
    return Dot(mean_embedding(i), query.vector());
  }
  if (!IsAttentionMethod(config.method)) {
    return Similarity(frames(i), query, config);
  }
  if (scorer == nullptr) {
    throw Error(ErrorCode::kMissingScorer,
                std::string(MethodName(config.method)) + " needs scorer weights");
  }
  const FrameMatrix& f = frames(i);
  const ScoreVector attn = config.method == Method::kSelfAttention
                               ? SelfAttentionScores(f, *scorer)
                               : JointAttentionScores(f, query, *scorer);
  return Similarity(f, query, config, std::span<const double>(attn));
}

int RankedList::RankOf(const std::string& video_id) const {
  for (size_t i = 0; i < items.size(); ++i) {
    if (items[i].video_id == video_id) return static_cast<int>(i) + 1;
  }
  return 0;
}

RankedList RankT2V(const RetrievalIndex& index, const TextVector& query,
                   const AggregationConfig& config,
                   const ScorerWeights* scorer) {
  return RankBy(index, query, config, scorer);
}

RankedList TwoStageRank(const RetrievalIndex& index, const TextVector& query,
                        const AggregationConfig& config, int rerank_depth,
                        const ScorerWeights* scorer) {
  if (rerank_depth < 1) {
    throw Error(ErrorCode::kInvalidArgument, "rerank depth must be >= 1");
  }
  if (IsAttentionMethod(config.method) && scorer == nullptr) {
    throw Error(ErrorCode::kMissingScorer,
                std::string(MethodName(config.method)) + " needs scorer weights");
  }
  RankedList ranked = RankBy(index, query, CoarseConfig(config), nullptr);
  const size_t depth = std::min(static_cast<size_t>(rerank_depth), ranked.items.size());
  for (size_t r = 0; r < depth; ++r) {
    const int i = index.Find(ranked.items[r].video_id);
    ranked.items[r].similarity = index.Score(i, query, config, scorer);
  }
  SortRanked(ranked.items.begin(), ranked.items.begin() + static_cast<long>(depth));
  return ranked;
}

ScoreMatrix SimilarityMatrix(const RetrievalIndex& index,
                             std::span<const TextVector> queries,
                             const AggregationConfig& config,
                             const ScorerWeights* scorer, int workers) {
  config.Validate();
  if (IsAttentionMethod(config.method) && scorer == nullptr) {
    throw Error(ErrorCode::kMissingScorer,
                std::string(MethodName(config.method)) + " needs scorer weights");
  }
  for (const TextVector& q : queries) {
    if (q.dim() != index.dim()) {
      throw Error(ErrorCode::kDimMismatch, "query '" + q.id() + "' dimension differs");
    }
  }
  ScoreMatrix out(index.size(), static_cast<int>(queries.size()));
  const int n_queries = static_cast<int>(queries.size());
  auto work = [&](int first) {
    for (int j = first; j < n_queries; j += std::max(workers, 1)) {
      for (int i = 0; i < index.size(); ++i) {
        out.at(i, j) = index.Score(i, queries[j], config, scorer);
      }
    }
  };
  if (workers <= 1 || n_queries <= 1) {
    work(0);
    return out;
  }
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
  pool.clear();
  return out;
}

ScoreMatrix Classify(const RetrievalIndex& index,
                     std::span<const TextVector> class_prompts,
                     const AggregationConfig& config,
                     const ScorerWeights* scorer, int workers) {
  if (class_prompts.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one class prompt");
  }
  return SimilarityMatrix(index, class_prompts, config, scorer, workers);
}

int RankInColumn(const ScoreMatrix& scores, std::span<const std::string> ids,
                 int col, int target) {
  const double s = scores.at(target, col);
  int rank = 1;
  for (int i = 0; i < scores.rows; ++i) {
    if (i != target && RanksBefore(scores.at(i, col), ids[i], s, ids[target])) {
      ++rank;
    }
  }
  return rank;
}

std::vector<int> GroundTruthRanks(const RetrievalIndex& index,
                                  std::span<const TextVector> queries,
                                  std::span<const RetrievalPair> pairs,
                                  const AggregationConfig& config,
                                  const ScorerWeights* scorer, int rerank_depth,
                                  int workers) {
  if (rerank_depth < 0) {
    throw Error(ErrorCode::kInvalidArgument, "rerank depth must be >= 0");
  }
  std::unordered_map<std::string, int> query_pos;
  for (size_t j = 0; j < queries.size(); ++j) {
    query_pos.emplace(queries[j].id(), static_cast<int>(j));
  }
  std::vector<int> query_col;
  std::vector<int> target_row;
  for (const RetrievalPair& p : pairs) {
    auto it = query_pos.find(p.query_id);
    if (it == query_pos.end()) {
      throw Error(ErrorCode::kUnknownId, "unknown query '" + p.query_id + "'");
    }
    const int row = index.Find(p.video_id);
    if (row < 0) {
      throw Error(ErrorCode::kUnknownId, "unknown video '" + p.video_id + "'");
    }
    query_col.push_back(it->second);
    target_row.push_back(row);
  }

  std::vector<int> ranks(pairs.size());
  if (rerank_depth == 0) {
    const ScoreMatrix sims = SimilarityMatrix(index, queries, config, scorer, workers);
    const std::vector<std::string> ids = index.video_ids();
    for (size_t p = 0; p < pairs.size(); ++p) {
      ranks[p] = RankInColumn(sims, ids, query_col[p], target_row[p]);
    }
    return ranks;
  }
  for (size_t p = 0; p < pairs.size(); ++p) {
    const RankedList ranked =
        TwoStageRank(index, queries[query_col[p]], config, rerank_depth, scorer);
    ranks[p] = ranked.RankOf(pairs[p].video_id);
  }
  return ranks;
}

}  // namespace vidagg
