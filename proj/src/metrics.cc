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

#include "vidagg/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <numeric>

#include "vidagg/error.h"

namespace vidagg {
namespace {

void RequireRanks(std::span<const int> ranks) {
  if (ranks.empty()) throw Error(ErrorCode::kEmptyRanks, "no ranks given");
  for (int r : ranks) {
    if (r < 1) throw Error(ErrorCode::kInvalidArgument, "ranks must be >= 1");
  }
}

std::string FormatValue(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

double RecallAtK(std::span<const int> ranks, int k) {
  RequireRanks(ranks);
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  const auto hits = std::count_if(ranks.begin(), ranks.end(),
                                  [k](int r) { return r <= k; });
  return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

RankStats ComputeRankStats(std::span<const int> ranks) {
  RequireRanks(ranks);
  std::vector<int> sorted(ranks.begin(), ranks.end());
  std::sort(sorted.begin(), sorted.end());
  const size_t n = sorted.size();
  RankStats stats;
  stats.median_rank = n % 2 == 1
                          ? sorted[n / 2]
                          : 0.5 * (static_cast<double>(sorted[n / 2 - 1]) +
                                   static_cast<double>(sorted[n / 2]));
  stats.mean_rank =
      std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
  return stats;
}

double GeometricMeanRecall(double r1, double r5, double r10) {
  if (!(r1 > 0.0 && r5 > 0.0 && r10 > 0.0)) {
    throw Error(ErrorCode::kNonPositive, "recalls must be > 0");
  }
  return std::cbrt(r1 * r5 * r10);
}

double AveragePrecision(std::span<const double> scores,
                        std::span<const std::string> ids,
                        std::span<const uint8_t> positive) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return ids[a] < ids[b];
  });
  double sum = 0.0;
  int hits = 0;
  for (size_t pos = 0; pos < order.size(); ++pos) {
    if (positive[order[pos]]) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(pos + 1);
    }
  }
  return hits == 0 ? 0.0 : sum / hits;
}

double MultilabelMap(const ScoreMatrix& scores,
                     std::span<const std::string> video_ids,
                     std::span<const LabelRecord> labels) {
  if (static_cast<int>(video_ids.size()) != scores.rows) {
    throw Error(ErrorCode::kLengthMismatch, "video id count differs from score rows");
  }
  std::map<std::string, int> row_of;
  for (int i = 0; i < scores.rows; ++i) row_of.emplace(video_ids[i], i);

  // positives[c][i]: video i carries class c.
  std::vector<std::vector<uint8_t>> positives(
      static_cast<size_t>(scores.cols),
      std::vector<uint8_t>(static_cast<size_t>(scores.rows), 0));
  for (const LabelRecord& rec : labels) {
    auto it = row_of.find(rec.video_id);
    if (it == row_of.end()) {
      throw Error(ErrorCode::kUnknownId, "unknown video '" + rec.video_id + "'");
    }
    for (int c : rec.labels) {
      if (c < 0 || c >= scores.cols) {
        throw Error(ErrorCode::kInvalidArgument,
                    "label " + std::to_string(c) + " has no score column");
      }
      positives[c][it->second] = 1;
    }
  }

  double total = 0.0;
  int classes = 0;
  std::vector<double> column(static_cast<size_t>(scores.rows));
  for (int c = 0; c < scores.cols; ++c) {
    const auto& pos = positives[c];
    if (std::find(pos.begin(), pos.end(), 1) == pos.end()) continue;
    for (int i = 0; i < scores.rows; ++i) column[i] = scores.at(i, c);
    total += AveragePrecision(column, video_ids, pos);
    ++classes;
  }
  if (classes == 0) {
    throw Error(ErrorCode::kNoPositives, "no class has a positive video");
  }
  return total / classes;
}

EvalReport MakeEvalReport(std::vector<int> ranks) {
  EvalReport report;
  for (int k : kReportRecallCutoffs) report.recall_at[k] = RecallAtK(ranks, k);
  const RankStats stats = ComputeRankStats(ranks);
  report.median_rank = stats.median_rank;
  report.mean_rank = stats.mean_rank;
  const double r1 = report.recall_at[1];
  const double r5 = report.recall_at[5];
  const double r10 = report.recall_at[10];
  report.geo_mean_recall =
      (r1 > 0.0 && r5 > 0.0 && r10 > 0.0) ? GeometricMeanRecall(r1, r5, r10) : 0.0;
  report.ranks = std::move(ranks);
  return report;
}

std::string FormatReport(const EvalReport& report) {
  std::string out;
  out += "queries " + std::to_string(report.ranks.size()) + "\n";
  for (const auto& [k, r] : report.recall_at) {
    out += "r" + std::to_string(k) + " " + FormatValue(r) + "\n";
  }
  out += "medr " + FormatValue(report.median_rank) + "\n";
  out += "mnr " + FormatValue(report.mean_rank) + "\n";
  out += "geo_mean_r " + FormatValue(report.geo_mean_recall) + "\n";
  if (report.map) out += "map " + FormatValue(*report.map) + "\n";
  return out;
}

std::string ReportToJson(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["queries"] = report.ranks.size();
  for (const auto& [k, r] : report.recall_at) j["r" + std::to_string(k)] = r;
  j["medr"] = report.median_rank;
  j["mnr"] = report.mean_rank;
  j["geo_mean_r"] = report.geo_mean_recall;
  if (report.map) j["map"] = *report.map;
  return j.dump(2) + "\n";
}

}  // namespace vidagg
