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

#include <gtest/gtest.h>

#include "vidagg/error.h"

namespace vidagg {
namespace {

BenchConfig SmallConfig() {
  BenchConfig c;
  c.videos = {20, 40};
  c.frames = {4, 8};
  c.dim = 16;
  AggregationConfig mean;
  mean.method = Method::kMean;
  AggregationConfig query;
  query.method = Method::kQueryScoring;
  c.methods = {mean, query};
  c.queries_per_cell = 3;
  c.warmup = 1;
  return c;
}

TEST(BenchTest, OneRowPerCell) {
  const auto rows = RunScalingBench(SmallConfig());
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows[0].videos, 20);
  EXPECT_EQ(rows[0].frames, 4);
  EXPECT_EQ(rows[0].method, Method::kMean);
  EXPECT_EQ(rows[1].method, Method::kQueryScoring);
  EXPECT_EQ(rows[7].videos, 40);
  EXPECT_EQ(rows[7].frames, 8);
  for (const auto& r : rows) {
    EXPECT_GT(r.latency_us_median, 0.0);
    EXPECT_EQ(r.index_bytes, MethodIndexBytes(r.method, r.videos, r.frames, r.dim));
  }
}

TEST(BenchTest, MeanBytesIgnoreFramesQueryBytesScale) {
  EXPECT_EQ(MethodIndexBytes(Method::kMean, 2000, 16, 512), 2000u * 512 * 4);
  EXPECT_EQ(MethodIndexBytes(Method::kMean, 2000, 32, 512),
            MethodIndexBytes(Method::kMean, 2000, 16, 512));
  EXPECT_EQ(MethodIndexBytes(Method::kSelfAttention, 10, 32, 8), 10u * 8 * 4);
  EXPECT_EQ(MethodIndexBytes(Method::kQueryScoring, 2000, 32, 512),
            2 * MethodIndexBytes(Method::kQueryScoring, 2000, 16, 512));
  EXPECT_EQ(MethodIndexBytes(Method::kJointAttention, 3, 5, 7), 3u * 5 * 7 * 4);
}

TEST(BenchTest, CsvLayout) {
  BenchRow r;
  r.method = Method::kTopK;
  r.source = Source::kScore;
  r.videos = 2;
  r.frames = 3;
  r.dim = 4;
  r.latency_us_median = 12.5;
  r.index_bytes = 96;
  EXPECT_EQ(BenchCsv({r}), std::string(kBenchCsvHeader) + "\ntopk,score,2,3,4,12.500,96\n");
}

TEST(BenchTest, RejectsEmptyConfig) {
  BenchConfig c = SmallConfig();
  c.methods.clear();
  EXPECT_THROW(RunScalingBench(c), Error);
  c = SmallConfig();
  c.videos = {0};
  EXPECT_THROW(RunScalingBench(c), Error);
}

}  // namespace
}  // namespace vidagg
