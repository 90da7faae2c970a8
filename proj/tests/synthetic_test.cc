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

#include "vidagg/synthetic.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "vidagg/error.h"

namespace vidagg {
namespace {

TEST(SyntheticTest, RandomVideosShapeAndDeterminism) {
  const auto a = RandomVideos(3, 5, 7, 42);
  const auto b = RandomVideos(3, 5, 7, 42);
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a[2].id(), "v00002");
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a[i].rows(), 5);
    EXPECT_TRUE(std::ranges::equal(a[i].data(), b[i].data()));
  }
  EXPECT_FALSE(std::ranges::equal(a[0].data(), RandomVideos(1, 5, 7, 43)[0].data()));
  EXPECT_THROW(RandomVideos(0, 5, 7, 1), Error);
}

TEST(SyntheticTest, PlantedCorpusLayout) {
  PlantedConfig c;
  c.videos = 20;
  c.frames = 6;
  c.dim = 16;
  c.seed = 3;
  const PlantedCorpus p = MakePlantedCorpus(c);
  ASSERT_EQ(p.videos.entries.size(), 20u);
  ASSERT_EQ(p.queries.entries.size(), 20u);
  ASSERT_EQ(p.truth.pairs.size(), 20u);
  for (int i = 0; i < 20; ++i) {
    const auto& q = p.queries.entries[i];
    const auto& v = p.videos.entries[i];
    EXPECT_EQ(p.truth.pairs[i].query_id, q.id);
    EXPECT_EQ(p.truth.pairs[i].video_id, v.id);
    EXPECT_EQ(q.rows, 1);
    EXPECT_EQ(v.rows, 6);
    double norm = 0.0;
    for (float x : q.data) norm += static_cast<double>(x) * x;
    EXPECT_NEAR(norm, 1.0, 1e-6);
    // Exactly one frame is unit norm; the relevant frame is stored as drawn.
    int best = -1;
    double best_dot = -2.0;
    for (int k = 0; k < v.rows; ++k) {
      double dot = 0.0, n = 0.0;
      for (int j = 0; j < c.dim; ++j) {
        dot += static_cast<double>(v.data[k * c.dim + j]) * q.data[j];
        n += static_cast<double>(v.data[k * c.dim + j]) * v.data[k * c.dim + j];
      }
      dot /= std::sqrt(n);
      if (dot > best_dot) {
        best_dot = dot;
        best = k;
      }
    }
    EXPECT_GE(best, 0);
    EXPECT_GT(best_dot, 0.8);
  }
  p.videos.Validate();
  p.queries.Validate();
  const PlantedCorpus again = MakePlantedCorpus(c);
  EXPECT_EQ(again.videos.entries[7].data, p.videos.entries[7].data);
}

}  // namespace
}  // namespace vidagg
