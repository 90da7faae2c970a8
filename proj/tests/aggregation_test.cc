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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.h"
#include "vidagg/error.h"

namespace vidagg {
namespace {

using test::RandomFrames;
using test::RandomText;

AggregationConfig Config(Method m, Source s, double tau = kDefaultTau, int k = kDefaultTopK) {
  AggregationConfig c;
  c.method = m;
  c.source = s;
  c.tau = tau;
  c.topk_k = k;
  return c;
}

constexpr Method kParameterFree[] = {Method::kMean, Method::kQueryScoring, Method::kTopK};
constexpr Source kSources[] = {Source::kFeature, Source::kScore};

TEST(WeightedMeanTest, SingletonIsTheFrame) {
  std::mt19937_64 rng(1);
  const FrameMatrix v = RandomFrames(rng, "v", 1, 6);
  const std::vector<double> w{1.0};
  const auto agg = WeightedMean(v, w, false);
  for (int j = 0; j < 6; ++j) EXPECT_DOUBLE_EQ(agg.vector[j], v.row(0)[j]);
  EXPECT_FALSE(agg.renormalized);
}

TEST(WeightedMeanTest, UniformOverOrthonormalRows) {
  const FrameMatrix v = FrameMatrix::FromRaw("v", 2, 4, {1, 0, 0, 0, 0, 1, 0, 0});
  const std::vector<double> w{0.5, 0.5};
  const auto agg = WeightedMean(v, w, true);
  EXPECT_TRUE(agg.renormalized);
  EXPECT_NEAR(agg.vector[0], 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(agg.vector[1], 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_EQ(agg.vector[2], 0.0);
}

TEST(WeightedMeanTest, MatchesSummationOracle) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const FrameMatrix v = RandomFrames(rng, "v", 8, 16);
    const auto w = test::RandomSimplex(rng, 8);
    const auto agg = WeightedMean(v, w, false);
    const auto rows = test::ToDouble(v);
    for (int j = 0; j < 16; ++j) {
      double expect = 0.0;
      for (int k = 0; k < 8; ++k) expect += w[k] * rows[k][j];
      EXPECT_NEAR(agg.vector[j], expect, 1e-6);
    }
    const auto norm = WeightedMean(v, w, true);
    double sq = 0.0;
    for (double x : norm.vector) sq += x * x;
    EXPECT_NEAR(std::sqrt(sq), 1.0, 1e-6);
  }
}

TEST(WeightedMeanTest, LengthMismatch) {
  std::mt19937_64 rng(3);
  const FrameMatrix v = RandomFrames(rng, "v", 3, 4);
  const std::vector<double> w{0.5, 0.5};
  EXPECT_THROW(WeightedMean(v, w, true), Error);
}

TEST(WeightedMeanTest, AntipodalFramesLeaveZeroVector) {
  const FrameMatrix v = FrameMatrix::FromRaw("v", 2, 2, {1, 0, -1, 0});
  const std::vector<double> w{0.5, 0.5};
  const auto agg = WeightedMean(v, w, true);
  EXPECT_FALSE(agg.renormalized);
  EXPECT_EQ(agg.vector[0], 0.0);
}

TEST(TopKSelectTest, DirectOrdering) {
  const std::vector<double> s{0.1, 0.9, 0.5};
  EXPECT_EQ(TopKSelect(s, 2), (std::vector<int>{1, 2}));
}

TEST(TopKSelectTest, TiesPreferLowerIndex) {
  const std::vector<double> s{0.5, 0.5, 0.5};
  EXPECT_EQ(TopKSelect(s, 2), (std::vector<int>{0, 1}));
}

TEST(TopKSelectTest, ClampsToFrameCount) {
  std::vector<double> s(10);
  for (int i = 0; i < 10; ++i) s[i] = std::sin(i);
  const auto picked = TopKSelect(s, 60);
  ASSERT_EQ(picked.size(), 10u);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(picked[i], i);
  EXPECT_THROW(TopKSelect(s, 0), Error);
}

TEST(SimilarityTest, SingletonCollapsesEveryMethod) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const FrameMatrix v = RandomFrames(rng, "v", 1, 12);
    const TextVector t = RandomText(rng, "q", 12);
    const double expected = Dot(v.row(0), t.vector());
    const std::vector<double> attn{0.3};
    for (Source s : kSources) {
      for (Method m : kParameterFree) {
        EXPECT_NEAR(Similarity(v, t, Config(m, s)), expected, 1e-6);
      }
      EXPECT_NEAR(Similarity(v, t, Config(Method::kSelfAttention, s), attn), expected, 1e-6);
      EXPECT_NEAR(Similarity(v, t, Config(Method::kJointAttention, s), attn), expected, 1e-6);
    }
  }
}

TEST(SimilarityTest, MeanScoreEqualsUnnormalizedMeanFeature) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const FrameMatrix v = RandomFrames(rng, "v", 1 + trial % 9, 16);
    const TextVector t = RandomText(rng, "q", 16);
    auto feature = Config(Method::kMean, Source::kFeature);
    feature.renormalize_feature = false;
    EXPECT_NEAR(Similarity(v, t, Config(Method::kMean, Source::kScore)),
                Similarity(v, t, feature), 1e-6);
  }
}

TEST(SimilarityTest, ArgmaxLimitPicksMatchingFrame) {
  const FrameMatrix v = FrameMatrix::FromRaw("v", 2, 3, {1, 0, 0, 0, 1, 0});
  const TextVector t = TextVector::FromRaw("q", {1, 0, 0});
  EXPECT_NEAR(Similarity(v, t, Config(Method::kQueryScoring, Source::kFeature, 1e-6)), 1.0,
              1e-12);
}

TEST(SimilarityTest, MatchesOracleForParameterFreeMethods) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 60; ++trial) {
    const FrameMatrix v = RandomFrames(rng, "v", 1 + trial % 12, 16);
    const TextVector t = RandomText(rng, "q", 16);
    const auto rows = test::ToDouble(v);
    const auto q = test::ToDouble(t.vector());
    for (Method m : kParameterFree) {
      for (Source s : kSources) {
        for (double tau : {0.01, 0.1, 1.0}) {
          const auto cfg = Config(m, s, tau, 1 + trial % 5);
          EXPECT_NEAR(Similarity(v, t, cfg), test::OracleSimilarity(rows, q, cfg), 1e-6);
        }
      }
    }
  }
}

TEST(SimilarityTest, TemperatureLimits) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + trial % 15;
    const FrameMatrix v = RandomFrames(rng, "v", k, 32);
    const TextVector t = RandomText(rng, "q", 32);
    const double mean = Similarity(v, t, Config(Method::kMean, Source::kFeature));
    EXPECT_NEAR(Similarity(v, t, Config(Method::kQueryScoring, Source::kFeature, 1e6)), mean,
                1e-4);
    const ScoreVector s = FrameScores(v, t);
    const auto best = std::max_element(s.begin(), s.end()) - s.begin();
    EXPECT_NEAR(Similarity(v, t, Config(Method::kQueryScoring, Source::kFeature, 1e-6)),
                s[best], 1e-4);
  }
}

TEST(SimilarityTest, TopKWithLargeKEqualsMean) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 1 + trial % 10;
    const FrameMatrix v = RandomFrames(rng, "v", k, 8);
    const TextVector t = RandomText(rng, "q", 8);
    for (Source s : kSources) {
      EXPECT_NEAR(Similarity(v, t, Config(Method::kTopK, s, 0.1, k + trial % 3)),
                  Similarity(v, t, Config(Method::kMean, s)), 1e-6);
    }
  }
}

TEST(SimilarityTest, ScoreSourceStaysInCosineRange) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const FrameMatrix v = RandomFrames(rng, "v", 1 + trial % 7, 4);
    const TextVector t = RandomText(rng, "q", 4);
    for (Method m : kParameterFree) {
      const double s = Similarity(v, t, Config(m, Source::kScore));
      EXPECT_LE(std::abs(s), 1.0 + 1e-6);
    }
  }
}

TEST(SimilarityTest, AttentionUsesOverrideWeights) {
  const FrameMatrix v = FrameMatrix::FromRaw("v", 2, 2, {1, 0, 0, 1});
  const TextVector t = TextVector::FromRaw("q", {1, 0});
  // The override prefers frame 1 even though the query matches frame 0.
  const std::vector<double> attn{0.0, 10.0};
  const double feature =
      Similarity(v, t, Config(Method::kSelfAttention, Source::kFeature, 0.1), attn);
  EXPECT_NEAR(feature, 0.0, 1e-6);
  const double score =
      Similarity(v, t, Config(Method::kJointAttention, Source::kScore, 0.1), attn);
  EXPECT_NEAR(score, std::exp(-100.0) / (1 + std::exp(-100.0)), 1e-12);
}

TEST(SimilarityTest, Errors) {
  const FrameMatrix v = FrameMatrix::FromRaw("v", 2, 2, {1, 0, 0, 1});
  const TextVector t = TextVector::FromRaw("q", {1, 0});
  try {
    Similarity(v, t, Config(Method::kSelfAttention, Source::kFeature));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingScores);
  }
  const std::vector<double> wrong_len{1.0};
  EXPECT_THROW(Similarity(v, t, Config(Method::kJointAttention, Source::kFeature), wrong_len),
               Error);
  try {
    Similarity(v, t, Config(Method::kQueryScoring, Source::kFeature, 0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidTau);
  }
  const TextVector t3 = TextVector::FromRaw("q", {1, 0, 0});
  EXPECT_THROW(Similarity(v, t3, Config(Method::kMean, Source::kFeature)), Error);
}

TEST(AggregationWeightsTest, SumToOneAndArgmaxIsScaleInvariant) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const FrameMatrix v = RandomFrames(rng, "v", 2 + trial % 12, 8);
    const TextVector t = RandomText(rng, "q", 8);
    std::size_t argmax = 0;
    for (double tau : {0.01, 0.1, 1.0, 10.0}) {
      for (Method m : kParameterFree) {
        const auto w = AggregationWeights(v, t, Config(m, Source::kFeature, tau, 3));
        double total = 0.0;
        for (double x : w.weights) {
          EXPECT_GE(x, 0.0);
          total += x;
        }
        EXPECT_NEAR(total, 1.0, 1e-6);
      }
      const auto w = AggregationWeights(v, t, Config(Method::kQueryScoring, Source::kFeature, tau));
      const auto best = static_cast<std::size_t>(
          std::max_element(w.weights.begin(), w.weights.end()) - w.weights.begin());
      if (tau == 0.01) argmax = best;
      EXPECT_EQ(best, argmax);
    }
  }
}

TEST(AggregationNamesTest, RoundTrip) {
  for (Method m : {Method::kMean, Method::kQueryScoring, Method::kTopK, Method::kSelfAttention,
                   Method::kJointAttention}) {
    EXPECT_EQ(ParseMethod(MethodName(m)), m);
  }
  EXPECT_EQ(ParseSource("score"), Source::kScore);
  EXPECT_THROW(ParseMethod("median"), Error);
}

}  // namespace
}  // namespace vidagg
