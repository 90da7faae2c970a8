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

#ifndef VIDAGG_BENCH_H_
#define VIDAGG_BENCH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "vidagg/aggregation.h"

namespace vidagg {

struct BenchConfig {
  std::vector<int> videos{500, 2000};
  std::vector<int> frames{16, 32};
  int dim = 512;
  std::vector<AggregationConfig> methods;
  int queries_per_cell = 9;  // timed runs per cell
  int warmup = 3;
  uint64_t seed = 0;

  void Validate() const;
};

struct BenchRow {
  Method method = Method::kMean;
  Source source = Source::kFeature;
  int videos = 0;
  int frames = 0;
  int dim = 0;
  double latency_us_median = 0.0;
  // Payload the method must retain: one mean per video for mean and
  // self-attention, every frame for query-dependent methods.
  uint64_t index_bytes = 0;
};

// Bytes a method retains for a corpus of `videos` x `frames` x `dim` f32.
uint64_t MethodIndexBytes(Method method, int videos, int frames, int dim);

// Single-threaded. For each v builds one seeded random corpus per k, then
// times full exhaustive rankings, cycling query by query over the (k, method)
// cells, and reports each cell's median. Rows are ordered by v, then k, then
// method.
std::vector<BenchRow> RunScalingBench(const BenchConfig& config);

inline constexpr char kBenchCsvHeader[] =
    "method,source,v,k,d,latency_us_median,index_bytes";

std::string BenchCsv(const std::vector<BenchRow>& rows);

}  // namespace vidagg

#endif  // VIDAGG_BENCH_H_
