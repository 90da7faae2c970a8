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

#include "vidagg/bench.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <optional>

#include "vidagg/attention.h"
#include "vidagg/error.h"
#include "vidagg/retrieval.h"
#include "vidagg/synthetic.h"

namespace vidagg {
namespace {

double Median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

void BenchConfig::Validate() const {
  auto positive = [](const std::vector<int>& xs) {
    return !xs.empty() && std::all_of(xs.begin(), xs.end(), [](int x) { return x > 0; });
  };
  if (!positive(videos) || !positive(frames) || dim < 1 || methods.empty() ||
      queries_per_cell < 1 || warmup < 0) {
    throw Error(ErrorCode::kInvalidArgument, "bench sizes must be positive");
  }
  for (const auto& m : methods) m.Validate();
}

uint64_t MethodIndexBytes(Method method, int videos, int frames, int dim) {
  const uint64_t per_vector = static_cast<uint64_t>(dim) * sizeof(float);
  switch (method) {
    case Method::kMean:
    case Method::kSelfAttention:
      return static_cast<uint64_t>(videos) * per_vector;
    case Method::kQueryScoring:
    case Method::kTopK:
    case Method::kJointAttention:
      return static_cast<uint64_t>(videos) * frames * per_vector;
  }
  return 0;
}

std::vector<BenchRow> RunScalingBench(const BenchConfig& config) {
  config.Validate();
  std::optional<ScorerWeights> scorer;
  for (const auto& m : config.methods) {
    if (IsAttentionMethod(m.method) && !scorer) {
      const int heads = config.dim % kDefaultHeads == 0 ? kDefaultHeads : 1;
      scorer = RandomScorerWeights(config.dim, heads, 1, false, 0, config.seed ^ 0x5eed);
    }
  }
  std::mt19937_64 query_rng(config.seed + 1);
  std::vector<TextVector> queries;
  const int total_queries = config.warmup + config.queries_per_cell;
  for (int q = 0; q < total_queries; ++q) {
    queries.push_back(TextVector::FromRaw("q" + std::to_string(q),
                                          RandomUnitVector(query_rng, config.dim)));
  }

  const ScorerWeights* weights = scorer ? &*scorer : nullptr;
  const size_t n_methods = config.methods.size();
  std::vector<BenchRow> rows;
  for (int v : config.videos) {
    // All frame counts for one v are resident at once so that query
    // repetitions can round-robin over cells; load spikes then hit every
    // cell instead of one.
    std::vector<RetrievalIndex> indexes;
    for (int k : config.frames) {
      indexes.push_back(
          RetrievalIndex::Build(RandomVideos(v, k, config.dim, config.seed), k));
    }
    std::vector<std::vector<double>> samples(indexes.size() * n_methods);
    for (int q = 0; q < total_queries; ++q) {
      for (size_t c = 0; c < indexes.size(); ++c) {
        for (size_t m = 0; m < n_methods; ++m) {
          const auto start = std::chrono::steady_clock::now();
          const RankedList ranked =
              RankT2V(indexes[c], queries[q], config.methods[m], weights);
          (void)ranked;
          const auto stop = std::chrono::steady_clock::now();
          if (q >= config.warmup) {
            samples[c * n_methods + m].push_back(
                std::chrono::duration<double, std::micro>(stop - start).count());
          }
        }
      }
    }
    for (size_t c = 0; c < indexes.size(); ++c) {
      for (size_t m = 0; m < n_methods; ++m) {
        const AggregationConfig& method = config.methods[m];
        const bool means_only = method.method == Method::kMean ||
                                method.method == Method::kSelfAttention;
        rows.push_back({method.method, method.source, v, config.frames[c], config.dim,
                        Median(std::move(samples[c * n_methods + m])),
                        means_only ? indexes[c].mean_bytes()
                                   : indexes[c].frame_bytes()});
      }
    }
  }
  return rows;
}

std::string BenchCsv(const std::vector<BenchRow>& rows) {
  std::string out = std::string(kBenchCsvHeader) + "\n";
  char buf[256];
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%d,%d,%d,%.3f,%llu\n",
                  std::string(MethodName(r.method)).c_str(),
                  std::string(SourceName(r.source)).c_str(), r.videos, r.frames,
                  r.dim, r.latency_us_median,
                  static_cast<unsigned long long>(r.index_bytes));
    out += buf;
  }
  return out;
}

}  // namespace vidagg
