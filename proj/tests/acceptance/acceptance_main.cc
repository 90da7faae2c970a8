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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Every check compares the library against
// code in this file or test_util.h, never against itself.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "test_util.h"
#include "vidagg/aggregation.h"
#include "vidagg/attention.h"
#include "vidagg/bench.h"
#include "vidagg/error.h"
#include "vidagg/metrics.h"
#include "vidagg/retrieval.h"
#include "vidagg/store.h"
#include "vidagg/synthetic.h"

namespace vidagg {
namespace {

using test::DMatrix;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string Fmt(const char* format, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

AggregationConfig Cfg(Method m, Source s = Source::kFeature, double tau = kDefaultTau) {
  AggregationConfig c;
  c.method = m;
  c.source = s;
  c.tau = tau;
  return c;
}

std::vector<std::string> Ids(const RankedList& r) {
  std::vector<std::string> ids;
  for (const auto& item : r.items) ids.push_back(item.video_id);
  return ids;
}

std::string VideoId(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "v%02d", i);
  return buf;
}

std::vector<FrameMatrix> RandomCorpus(std::mt19937_64& rng, int v, int max_k, int d) {
  std::uniform_int_distribution<int> k(1, max_k);
  std::vector<FrameMatrix> out;
  for (int i = 0; i < v; ++i) out.push_back(test::RandomFrames(rng, VideoId(i), k(rng), d));
  return out;
}

constexpr Method kAllMethods[] = {Method::kMean, Method::kQueryScoring, Method::kTopK,
                                  Method::kSelfAttention, Method::kJointAttention};

Outcome TemperatureLimits() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> pick_k(1, 16);
  std::uniform_int_distribution<int> pick_d(2, 64);
  double worst_hot = 0.0, worst_cold = 0.0;
  int instances = 0, cold_checked = 0;
  while (instances < 200) {
    const int k = pick_k(rng), d = pick_d(rng);
    const FrameMatrix f = test::RandomFrames(rng, "v", k, d);
    const TextVector t = test::RandomText(rng, "q", d);
    const DMatrix frames = test::ToDouble(f);
    const auto q = test::ToDouble(t.vector());
    std::vector<double> s;
    for (const auto& row : frames) s.push_back(test::OracleDot(row, q));
    ++instances;
    for (Source src : {Source::kFeature, Source::kScore}) {
      const double hot = Similarity(f, t, Cfg(Method::kQueryScoring, src, 1e6));
      const double mean = test::OracleSimilarity(frames, q, Cfg(Method::kMean, src));
      worst_hot = std::max(worst_hot, std::abs(hot - mean));
    }
    // Unique maximum: the runner-up trails by more than 1e-3.
    std::vector<double> sorted = s;
    std::sort(sorted.rbegin(), sorted.rend());
    if (k > 1 && sorted[0] - sorted[1] < 1e-3) continue;
    ++cold_checked;
    const double best = sorted[0];  // argmax frame, unit norm, so both sources agree
    for (Source src : {Source::kFeature, Source::kScore}) {
      const double cold = Similarity(f, t, Cfg(Method::kQueryScoring, src, 1e-6));
      worst_cold = std::max(worst_cold, std::abs(cold - best));
    }
  }
  Outcome o;
  o.pass = worst_hot <= 1e-4 && worst_cold <= 1e-4;
  o.detail = Fmt("max |tau=1e6 - mean| %.2e, max |tau=1e-6 - argmax| %.2e over %g unique-max",
                 worst_hot, worst_cold, cold_checked);
  return o;
}

Outcome CollapseSuite() {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> pick_k(1, 16);
  const ScorerWeights scorer = RandomScorerWeights(32, 4, 1, false, 0, 202);
  double topk = 0.0, score_mean = 0.0, single = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int k = pick_k(rng);
    const FrameMatrix f = test::RandomFrames(rng, "v", k, 32);
    const TextVector t = test::RandomText(rng, "q", 32);
    for (Source src : {Source::kFeature, Source::kScore}) {
      AggregationConfig c = Cfg(Method::kTopK, src);
      c.topk_k = k + trial % 3;
      topk = std::max(topk, std::abs(Similarity(f, t, c) - Similarity(f, t, Cfg(Method::kMean, src))));
    }
    AggregationConfig raw = Cfg(Method::kMean);
    raw.renormalize_feature = false;
    score_mean = std::max(score_mean, std::abs(Similarity(f, t, Cfg(Method::kMean, Source::kScore)) -
                                               Similarity(f, t, raw)));

    // K=1: every method through the index, both sources.
    std::vector<FrameMatrix> one{test::RandomFrames(rng, "x", 1, 32)};
    const double cosine = test::OracleDot(test::ToDouble(one[0].row(0)), test::ToDouble(t.vector()));
    const RetrievalIndex index = RetrievalIndex::Build(std::move(one));
    for (Method m : kAllMethods) {
      for (Source src : {Source::kFeature, Source::kScore}) {
        single = std::max(single, std::abs(index.Score(0, t, Cfg(m, src), &scorer) - cosine));
      }
    }
  }
  Outcome o;
  o.pass = topk <= 1e-6 && score_mean <= 1e-6 && single <= 1e-6;
  o.detail = Fmt("topk(k>=K) vs mean %.2e, score-mean vs raw feature-mean %.2e, K=1 spread %.2e",
                 topk, score_mean, single);
  return o;
}

Outcome OracleEquivalence() {
  std::mt19937_64 rng(303);
  int mismatches = 0, rankings = 0;
  for (int corpus = 0; corpus < 50; ++corpus) {
    const auto videos = RandomCorpus(rng, 20, 8, 16);
    const RetrievalIndex index = RetrievalIndex::Build(videos);
    const TextVector t = test::RandomText(rng, "q", 16);
    const auto q = test::ToDouble(t.vector());
    for (Method m : {Method::kMean, Method::kQueryScoring, Method::kTopK}) {
      for (Source src : {Source::kFeature, Source::kScore}) {
        AggregationConfig c = Cfg(m, src);
        c.topk_k = 1 + corpus % 8;
        std::vector<std::pair<std::string, double>> scored;
        for (const auto& v : videos) {
          scored.emplace_back(v.id(), test::OracleSimilarity(test::ToDouble(v), q, c));
        }
        ++rankings;
        if (Ids(RankT2V(index, t, c)) != test::OracleRanking(scored)) ++mismatches;
      }
    }
  }
  return {mismatches == 0, Fmt("%g of %g rankings differ from brute force", mismatches, rankings)};
}

Outcome TwoStageIdentity() {
  std::mt19937_64 rng(404);
  const ScorerWeights scorer = RandomScorerWeights(16, 4, 2, false, 0, 404);
  int mismatches = 0, rankings = 0;
  for (int corpus = 0; corpus < 20; ++corpus) {
    const RetrievalIndex index = RetrievalIndex::Build(RandomCorpus(rng, 20, 8, 16));
    const TextVector t = test::RandomText(rng, "q", 16);
    for (Method m : kAllMethods) {
      for (Source src : {Source::kFeature, Source::kScore}) {
        ++rankings;
        if (Ids(TwoStageRank(index, t, Cfg(m, src), index.size(), &scorer)) !=
            Ids(RankT2V(index, t, Cfg(m, src), &scorer))) {
          ++mismatches;
        }
      }
    }
  }
  return {mismatches == 0, Fmt("%g of %g rankings differ at R=v", mismatches, rankings)};
}

// Rank of the ground-truth video for every query, by direct enumeration.
std::vector<int> BruteForceRanks(const std::vector<DMatrix>& videos,
                                 const std::vector<std::string>& video_ids,
                                 const std::vector<std::vector<double>>& queries,
                                 const std::vector<int>& truth, const AggregationConfig& c) {
  std::vector<int> ranks;
  std::vector<double> sims(videos.size());
  for (size_t j = 0; j < queries.size(); ++j) {
    for (size_t i = 0; i < videos.size(); ++i) sims[i] = test::OracleSimilarity(videos[i], queries[j], c);
    const int target = truth[j];
    int rank = 1;
    for (size_t i = 0; i < videos.size(); ++i) {
      if (sims[i] > sims[target] || (sims[i] == sims[target] && video_ids[i] < video_ids[target])) {
        ++rank;
      }
    }
    ranks.push_back(rank);
  }
  return ranks;
}

Outcome PlantedExperiment() {
  std::map<int, std::pair<double, double>> r1;  // K -> (query, mean)
  bool library_agrees = true;
  for (int k : {4, 16, 64}) {
    PlantedConfig pc;
    pc.frames = k;
    const PlantedCorpus corpus = MakePlantedCorpus(pc);
    std::vector<DMatrix> videos;
    std::vector<std::string> ids;
    std::map<std::string, int> row_of;
    for (const StoreEntry& e : corpus.videos.entries) {
      DMatrix m;
      for (int r = 0; r < e.rows; ++r) {
        m.push_back(test::OracleNormalize(std::vector<double>(
            e.data.begin() + static_cast<long>(r) * pc.dim,
            e.data.begin() + static_cast<long>(r + 1) * pc.dim)));
      }
      row_of[e.id] = static_cast<int>(ids.size());
      ids.push_back(e.id);
      videos.push_back(std::move(m));
    }
    std::vector<std::vector<double>> queries;
    for (const StoreEntry& e : corpus.queries.entries) {
      queries.push_back(test::OracleNormalize(std::vector<double>(e.data.begin(), e.data.end())));
    }
    std::vector<int> truth;
    for (const auto& p : corpus.truth.pairs) truth.push_back(row_of.at(p.video_id));

    const auto q_ranks = BruteForceRanks(videos, ids, queries, truth, Cfg(Method::kQueryScoring));
    const auto m_ranks = BruteForceRanks(videos, ids, queries, truth, Cfg(Method::kMean));
    const double rq = RecallAtK(q_ranks, 1), rm = RecallAtK(m_ranks, 1);
    r1[k] = {rq, rm};

    // The library must reproduce the same R@1.
    const RetrievalIndex index = RetrievalIndex::Build(corpus.videos);
    const auto texts = ToTextVectors(corpus.queries);
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    const auto lib_q = GroundTruthRanks(index, texts, corpus.truth.pairs,
                                        Cfg(Method::kQueryScoring), nullptr, 0, workers);
    const auto lib_m = GroundTruthRanks(index, texts, corpus.truth.pairs, Cfg(Method::kMean),
                                        nullptr, 0, workers);
    library_agrees = library_agrees && RecallAtK(lib_q, 1) == rq && RecallAtK(lib_m, 1) == rm;
  }
  bool pass = library_agrees && r1[64].first >= 0.9;
  double prev_gap = -1.0;
  std::string detail;
  for (const auto& [k, r] : r1) {
    const double gap = r.first - r.second;
    pass = pass && r.first >= r.second && gap >= prev_gap;
    prev_gap = gap;
    detail += Fmt("K=%g query %.3f mean %.3f; ", k, r.first, r.second);
  }
  detail += library_agrees ? "library matches brute force" : "library DIFFERS from brute force";
  return {pass, detail};
}

Outcome MetricsOracle() {
  std::mt19937_64 rng(606);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> n_dist(1, 60);
    const int n = n_dist(rng);
    std::uniform_int_distribution<int> rank_dist(1, 80);
    std::vector<int> ranks(static_cast<size_t>(n));
    for (int& r : ranks) r = rank_dist(rng);

    for (int k : {1, 5, 10, 50}) {
      int hits = 0;
      for (int r : ranks) hits += r <= k ? 1 : 0;
      worst = std::max(worst, std::abs(RecallAtK(ranks, k) - static_cast<double>(hits) / n));
    }
    // Median: the value with as many ranks at or below it as above it,
    // averaged over the two middle order statistics for even n.
    std::vector<int> sorted = ranks;
    for (size_t i = 0; i < sorted.size(); ++i)
      for (size_t j = i + 1; j < sorted.size(); ++j)
        if (sorted[j] < sorted[i]) std::swap(sorted[i], sorted[j]);
    const double median = n % 2 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
    long total = 0;
    for (int r : ranks) total += r;
    const RankStats stats = ComputeRankStats(ranks);
    worst = std::max(worst, std::abs(stats.median_rank - median));
    worst = std::max(worst, std::abs(stats.mean_rank - static_cast<double>(total) / n));

    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::bernoulli_distribution coin(0.3);
    std::vector<double> scores(static_cast<size_t>(n));
    std::vector<std::string> ids;
    std::vector<bool> pos;
    std::vector<uint8_t> pos_bytes;
    for (int i = 0; i < n; ++i) {
      // Coarse grid so ties, and the id tie-break, actually occur.
      scores[i] = std::round(u(rng) * 8.0) / 8.0;
      ids.push_back("id" + std::to_string(i));
      pos.push_back(coin(rng));
      pos_bytes.push_back(pos.back() ? 1 : 0);
    }
    worst = std::max(worst, std::abs(AveragePrecision(scores, ids, pos_bytes) -
                                     test::OracleAveragePrecision(scores, ids, pos)));
  }
  const double g = GeometricMeanRecall(47.7, 74.1, 82.9);
  Outcome o;
  o.pass = worst <= 1e-9 && std::abs(g - 66.4) <= 0.1;
  o.detail = Fmt("max deviation %.2e over 100 instances; geo mean %.4f", worst, g);
  return o;
}

FrameMatrix Permuted(const FrameMatrix& f, const std::vector<int>& perm) {
  std::vector<float> data;
  for (int p : perm) data.insert(data.end(), f.row(p).begin(), f.row(p).end());
  return FrameMatrix::FromNormalized(f.id(), f.rows(), f.dim(), std::move(data));
}

Outcome AttentionProperties() {
  std::mt19937_64 rng(707);
  const ScorerWeights scorer = RandomScorerWeights(32, 8, 2, false, 0, 707);
  double equivariance = 0.0, oracle = 0.0;
  bool self_invariant = true;
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<int> pick_k(2, 24);
    const int k = pick_k(rng);
    const FrameMatrix f = test::RandomFrames(rng, "v", k, 32);
    std::vector<int> perm(static_cast<size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const FrameMatrix g = Permuted(f, perm);
    const TextVector t1 = test::RandomText(rng, "a", 32);
    const TextVector t2 = test::RandomText(rng, "b", 32);

    const ScoreVector self_f = SelfAttentionScores(f, scorer);
    const ScoreVector self_g = SelfAttentionScores(g, scorer);
    const ScoreVector joint_f = JointAttentionScores(f, t1, scorer);
    const ScoreVector joint_g = JointAttentionScores(g, t1, scorer);
    for (int i = 0; i < k; ++i) {
      equivariance = std::max(equivariance, std::abs(self_g[i] - self_f[perm[i]]));
      equivariance = std::max(equivariance, std::abs(joint_g[i] - joint_f[perm[i]]));
    }

    // Self-attention frame weights must not move when the query does.
    JointAttentionScores(f, t2, scorer);
    const ScoreVector again = SelfAttentionScores(f, scorer);
    const AggregationConfig c = Cfg(Method::kSelfAttention);
    const auto w1 = AggregationWeights(f, t1, c, std::span<const double>(self_f));
    const auto w2 = AggregationWeights(f, t2, c, std::span<const double>(again));
    self_invariant = self_invariant && again.size() == self_f.size() &&
                     std::memcmp(again.data(), self_f.data(), again.size() * sizeof(double)) == 0 &&
                     w1.weights.size() == w2.weights.size() &&
                     std::memcmp(w1.weights.data(), w2.weights.data(),
                                 w1.weights.size() * sizeof(double)) == 0;

    const FrameMatrix one = test::RandomFrames(rng, "o", 1, 32);
    oracle = std::max(oracle, std::abs(SelfAttentionScores(one, scorer)[0] -
                                       test::SingleTokenOracle(one.row(0), scorer)));
  }
  Outcome o;
  o.pass = equivariance < 1e-6 && self_invariant && oracle <= 1e-5;
  o.detail = Fmt("equivariance %.2e, K=1 oracle %.2e, self weights query-invariant: ",
                 equivariance, oracle) +
             (self_invariant ? "yes" : "NO");
  return o;
}

Outcome ScalingBench() {
  BenchConfig c;
  c.videos = {2000};
  c.frames = {16, 32};
  c.dim = 512;
  c.methods = {Cfg(Method::kMean), Cfg(Method::kQueryScoring)};
  c.queries_per_cell = 41;
  c.warmup = 3;
  c.seed = 808;
  const auto rows = RunScalingBench(c);
  auto find = [&](Method m, int k) {
    for (const auto& r : rows)
      if (r.method == m && r.frames == k) return r;
    return BenchRow{};
  };
  const BenchRow m16 = find(Method::kMean, 16), m32 = find(Method::kMean, 32);
  const BenchRow q16 = find(Method::kQueryScoring, 16), q32 = find(Method::kQueryScoring, 32);
  const bool mean_bytes = m16.index_bytes == m32.index_bytes &&
                          m16.index_bytes == MethodIndexBytes(Method::kMean, 2000, 16, 512);
  const bool query_bytes = q32.index_bytes == 2 * q16.index_bytes &&
                           q16.index_bytes == MethodIndexBytes(Method::kQueryScoring, 2000, 16, 512);
  const double q_ratio = q32.latency_us_median / q16.latency_us_median;
  const double m_ratio = m32.latency_us_median / m16.latency_us_median;
  Outcome o;
  o.pass = mean_bytes && query_bytes && q_ratio >= 1.5 && q_ratio <= 3.0 && m_ratio >= 0.7 &&
           m_ratio <= 1.4;
  o.detail = Fmt("query latency ratio %.3f, mean latency ratio %.3f, bytes query x%.1f mean x%.1f",
                 q_ratio, m_ratio, static_cast<double>(q32.index_bytes) / q16.index_bytes,
                 static_cast<double>(m32.index_bytes) / m16.index_bytes);
  return o;
}

EmbeddingStore RandomStore(std::mt19937_64& rng, Dtype dtype) {
  std::uniform_int_distribution<int> count(1, 6), rows(1, 9), dim(1, 24);
  EmbeddingStore s;
  s.dtype = dtype;
  s.dim = dim(rng);
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    const int k = rows(rng);
    std::vector<float> data = test::RandomRaw(rng, k * s.dim);
    s.entries.push_back({"video_" + std::to_string(i), k, std::move(data)});
  }
  return s;
}

Outcome StoreFormat() {
  std::mt19937_64 rng(909);
  int roundtrip_failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const EmbeddingStore s = RandomStore(rng, Dtype::kF32);
    EmbeddingStore r;
    if (trial % 10 == 0) {
      const auto path = test::TempPath("acceptance_roundtrip.vemb");
      WriteStore(s, path);
      r = ReadStore(path);
      std::filesystem::remove(path);
    } else {
      r = DecodeStore(EncodeStore(s));
    }
    bool same = r.dim == s.dim && r.entries.size() == s.entries.size();
    for (size_t i = 0; same && i < s.entries.size(); ++i) {
      same = r.entries[i].id == s.entries[i].id && r.entries[i].rows == s.entries[i].rows &&
             r.entries[i].data.size() == s.entries[i].data.size() &&
             std::memcmp(r.entries[i].data.data(), s.entries[i].data.data(),
                         s.entries[i].data.size() * sizeof(float)) == 0;
    }
    if (!same) ++roundtrip_failures;
  }

  int clean_errors = 0, still_valid = 0, bad = 0;
  for (int iter = 0; iter < 1000; ++iter) {
    const EmbeddingStore s = RandomStore(rng, iter % 2 ? Dtype::kF16 : Dtype::kF32);
    std::vector<uint8_t> bytes = EncodeStore(s);
    std::uniform_int_distribution<size_t> pos(0, bytes.size() - 1);
    switch (iter % 4) {
      case 0:
        bytes[pos(rng)] ^= static_cast<uint8_t>(1u << (rng() % 8));
        break;
      case 1:
        for (int f = 0; f < 8; ++f) bytes[pos(rng)] = static_cast<uint8_t>(rng());
        break;
      case 2:
        bytes.resize(pos(rng));
        break;
      default:
        bytes.insert(bytes.begin() + static_cast<long>(pos(rng)), static_cast<uint8_t>(rng()));
        break;
    }
    try {
      const EmbeddingStore decoded = DecodeStore(bytes);
      // A corruption that still parses must be a fully valid store.
      decoded.Validate();
      if (EncodeStore(decoded) != bytes) ++bad;
      ++still_valid;
    } catch (const Error&) {
      ++clean_errors;
    } catch (...) {
      ++bad;
    }
  }
  Outcome o;
  o.pass = roundtrip_failures == 0 && bad == 0;
  o.detail = Fmt("%g/100 round trips differ; fuzz: %g clean errors, %g still valid, %g unclean",
                 roundtrip_failures, clean_errors, still_valid, bad);
  return o;
}

}  // namespace
}  // namespace vidagg

// With --only NAME runs a single criterion; --list prints the names.
int main(int argc, char** argv) {
  using vidagg::Outcome;
  std::string only;
  bool list = false;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = argv[++i];
    } else if (arg == "--list") {
      list = true;
    } else {
      std::fprintf(stderr, "usage: %s [--list] [--only NAME]\n", argv[0]);
      return 2;
    }
  }
  const std::vector<std::pair<const char*, std::function<Outcome()>>> checks{
      {"temperature_limits", vidagg::TemperatureLimits},
      {"collapse_suite", vidagg::CollapseSuite},
      {"oracle_equivalence", vidagg::OracleEquivalence},
      {"two_stage_identity", vidagg::TwoStageIdentity},
      {"planted_long_video", vidagg::PlantedExperiment},
      {"metrics_oracle", vidagg::MetricsOracle},
      {"attention_properties", vidagg::AttentionProperties},
      {"scaling_bench", vidagg::ScalingBench},
      {"store_format", vidagg::StoreFormat},
  };
  // Wall-clock budgets in seconds.
  const std::map<std::string, double> budget{{"temperature_limits", 1.0},
                                             {"planted_long_video", 30.0},
                                             {"scaling_bench", 120.0}};
  int failures = 0, ran = 0;
  for (const auto& [name, run] : checks) {
    if (list) {
      std::printf("%s\n", name);
      continue;
    }
    if (!only.empty() && only != name) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    auto it = budget.find(name);
    if (it != budget.end() && secs > it->second) {
      o.pass = false;
      o.detail += " (over time budget)";
    }
    std::printf("%s %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  if (!list && ran == 0) {
    std::fprintf(stderr, "no criterion named '%s'\n", only.c_str());
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
