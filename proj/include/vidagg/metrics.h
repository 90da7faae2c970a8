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

#ifndef VIDAGG_METRICS_H_
#define VIDAGG_METRICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vidagg/score_matrix.h"
#include "vidagg/store.h"

namespace vidagg {

// Fraction of ranks <= k. Throws EmptyRanks / InvalidArgument (k < 1).
double RecallAtK(std::span<const int> ranks, int k);

struct RankStats {
  double median_rank = 0.0;  // even counts average the two middle ranks
  double mean_rank = 0.0;
};

RankStats ComputeRankStats(std::span<const int> ranks);

// Cube root of r1 * r5 * r10, in whatever unit the inputs use. Throws
// NonPositive unless all inputs are > 0.
double GeometricMeanRecall(double r1, double r5, double r10);

// Average precision of one class: mean over positives of the precision at
// each positive's position in the ranking. positive[i] != 0 marks row i.
double AveragePrecision(std::span<const double> scores,
                        std::span<const std::string> ids,
                        std::span<const uint8_t> positive);

// Mean AP over classes with at least one positive. `scores` is v x C with
// rows ordered like `video_ids`; rankings break ties by ascending video id.
// Throws NoPositives when no class has a positive, InvalidArgument when a
// label references a missing column.
double MultilabelMap(const ScoreMatrix& scores,
                     std::span<const std::string> video_ids,
                     std::span<const LabelRecord> labels);

inline constexpr int kReportRecallCutoffs[] = {1, 5, 10, 50};

struct EvalReport {
  std::map<int, double> recall_at;  // k -> fraction
  double median_rank = 0.0;
  double mean_rank = 0.0;
  double geo_mean_recall = 0.0;  // over R@{1,5,10}; 0 if any of them is 0
  std::optional<double> map;
  std::vector<int> ranks;
};

EvalReport MakeEvalReport(std::vector<int> ranks);

// Flat "key value" lines, fixed formatting.
std::string FormatReport(const EvalReport& report);
// Object-notation rendering of the same fields (ranks excluded).
std::string ReportToJson(const EvalReport& report);

}  // namespace vidagg

#endif  // VIDAGG_METRICS_H_
