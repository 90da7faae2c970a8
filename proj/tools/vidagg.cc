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

// vidagg command-line front end.
//
// Exit codes: 0 success, 1 data error (bad or inconsistent files), 2 usage
// error (bad flags).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11/CLI11.hpp"
#include "vidagg/aggregation.h"
#include "vidagg/attention.h"
#include "vidagg/bench.h"
#include "vidagg/error.h"
#include "vidagg/metrics.h"
#include "vidagg/retrieval.h"
#include "vidagg/store.h"

namespace {

using namespace vidagg;

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

// Data error tagged with the file it came from.
class FileError : public std::runtime_error {
 public:
  FileError(const std::string& path, const std::string& cause)
      : std::runtime_error(path + ": " + cause) {}
};

struct Options {
  std::string videos;
  std::string queries;
  std::string gt;
  std::string method = "query";
  std::string source = "feature";
  double tau = kDefaultTau;
  int topk = kDefaultTopK;
  int frames = kDefaultFramesPerVideo;
  int rerank = 0;
  std::string scorer;
  std::string output;

  // search
  std::string query_id;
  int top = 10;
  // eval
  std::string ranks_path;
  // weights
  std::string video_id;
  // bench
  std::vector<int> bench_videos{500, 2000};
  std::vector<int> bench_frames{16, 32};
  int bench_dim = 512;
  std::vector<std::string> bench_methods{"mean", "query"};
  int bench_reps = 9;
  int bench_warmup = 3;
  uint64_t seed = 0;
  std::string csv;
};

const CLI::Validator kPositiveTau(
    [](std::string& s) -> std::string {
      double v = 0.0;
      try {
        size_t used = 0;
        v = std::stod(s, &used);
        if (used != s.size()) return "tau must be a number";
      } catch (const std::exception&) {
        return "tau must be a number";
      }
      if (!(v > 0.0) || !std::isfinite(v)) return "invalid --tau " + s + ": requires tau > 0";
      return {};
    },
    "tau > 0", "tau");

template <typename F>
auto WithFile(const std::string& path, F&& load) -> decltype(load()) {
  try {
    return load();
  } catch (const std::exception& e) {
    throw FileError(path, e.what());
  }
}

EmbeddingStore LoadStore(const std::string& path) {
  return WithFile(path, [&] { return ReadStore(path); });
}

std::vector<TextVector> LoadQueries(const std::string& path) {
  return WithFile(path, [&] { return ToTextVectors(ReadStore(path)); });
}

GroundTruth LoadTruth(const std::string& path) {
  return WithFile(path, [&] { return LoadGroundTruth(path); });
}

AggregationConfig MakeConfig(const Options& o) {
  AggregationConfig c;
  c.method = ParseMethod(o.method);
  c.source = ParseSource(o.source);
  c.tau = o.tau;
  c.topk_k = o.topk;
  c.Validate();
  return c;
}

std::optional<ScorerWeights> LoadScorer(const Options& o, const AggregationConfig& c,
                                        int dim) {
  if (!IsAttentionMethod(c.method)) return std::nullopt;
  if (o.scorer.empty()) {
    throw Error(ErrorCode::kMissingScorer,
                "--method " + o.method + " requires --scorer PATH");
  }
  ScorerWeights w = WithFile(o.scorer, [&] { return LoadScorerWeights(o.scorer); });
  if (w.d != dim) {
    throw FileError(o.scorer, "scorer dim " + std::to_string(w.d) +
                                  " does not match embedding dim " + std::to_string(dim));
  }
  return w;
}

RetrievalIndex LoadIndex(const Options& o) {
  const EmbeddingStore store = LoadStore(o.videos);
  return WithFile(o.videos, [&] { return RetrievalIndex::Build(store, o.frames); });
}

void RequireDim(const RetrievalIndex& index, const std::vector<TextVector>& queries,
                const std::string& path) {
  if (!queries.empty() && queries.front().dim() != index.dim()) {
    throw FileError(path, "query dim " + std::to_string(queries.front().dim()) +
                              " does not match video dim " + std::to_string(index.dim()));
  }
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError(path, "cannot open for writing");
  out << text;
  if (!out) throw FileError(path, "write failed");
}

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

unsigned Workers() { return std::max(1u, std::thread::hardware_concurrency()); }

int RunEval(const Options& o) {
  const AggregationConfig cfg = MakeConfig(o);
  const RetrievalIndex index = LoadIndex(o);
  const auto queries = LoadQueries(o.queries);
  RequireDim(index, queries, o.queries);
  const GroundTruth gt = LoadTruth(o.gt);
  if (gt.pairs.empty()) {
    throw FileError(o.gt, "no retrieval pairs (label records are evaluated by classify)");
  }
  std::vector<std::string> query_ids;
  for (const auto& q : queries) query_ids.push_back(q.id());
  WithFile(o.gt, [&] {
    CheckGroundTruthResolvable(gt, index.video_ids(), query_ids);
    return 0;
  });
  const auto scorer = LoadScorer(o, cfg, index.dim());
  const std::vector<int> ranks =
      GroundTruthRanks(index, queries, gt.pairs, cfg, scorer ? &*scorer : nullptr,
                       o.rerank, Workers());
  const EvalReport report = MakeEvalReport(ranks);
  std::cout << FormatReport(report);
  if (!o.output.empty()) WriteText(o.output, ReportToJson(report));
  if (!o.ranks_path.empty()) {
    std::string dump = "query_id,video_id,rank\n";
    for (size_t i = 0; i < gt.pairs.size(); ++i) {
      dump += gt.pairs[i].query_id + "," + gt.pairs[i].video_id + "," +
              std::to_string(ranks[i]) + "\n";
    }
    WriteText(o.ranks_path, dump);
  }
  return 0;
}

int RunSearch(const Options& o) {
  const AggregationConfig cfg = MakeConfig(o);
  const RetrievalIndex index = LoadIndex(o);
  const auto queries = LoadQueries(o.queries);
  RequireDim(index, queries, o.queries);
  const auto scorer = LoadScorer(o, cfg, index.dim());
  bool found = o.query_id.empty();
  std::string out = "query_id,rank,video_id,similarity\n";
  for (const TextVector& q : queries) {
    if (!o.query_id.empty() && q.id() != o.query_id) continue;
    found = true;
    const ScorerWeights* w = scorer ? &*scorer : nullptr;
    const RankedList ranked = o.rerank > 0 ? TwoStageRank(index, q, cfg, o.rerank, w)
                                           : RankT2V(index, q, cfg, w);
    const size_t n = std::min<size_t>(ranked.items.size(), static_cast<size_t>(o.top));
    for (size_t r = 0; r < n; ++r) {
      out += q.id() + "," + std::to_string(r + 1) + "," + ranked.items[r].video_id + "," +
             FormatDouble(ranked.items[r].similarity) + "\n";
    }
  }
  if (!found) throw FileError(o.queries, "no query with id '" + o.query_id + "'");
  if (o.output.empty()) {
    std::cout << out;
  } else {
    WriteText(o.output, out);
  }
  return 0;
}

int RunClassify(const Options& o) {
  const AggregationConfig cfg = MakeConfig(o);
  const RetrievalIndex index = LoadIndex(o);
  const auto prompts = LoadQueries(o.queries);
  RequireDim(index, prompts, o.queries);
  const auto scorer = LoadScorer(o, cfg, index.dim());
  const ScoreMatrix scores = Classify(index, prompts, cfg, scorer ? &*scorer : nullptr);

  std::string table = "video_id,class,class_id,score\n";
  for (int i = 0; i < scores.rows; ++i) {
    int best = 0;
    for (int c = 1; c < scores.cols; ++c) {
      if (scores.at(i, c) > scores.at(i, best)) best = c;
    }
    table += index.video_id(i) + "," + std::to_string(best) + "," + prompts[best].id() + "," +
             FormatDouble(scores.at(i, best)) + "\n";
  }
  std::cout << "videos " << scores.rows << "\nclasses " << scores.cols << "\n";
  if (!o.gt.empty()) {
    const GroundTruth gt = LoadTruth(o.gt);
    if (gt.labels.empty()) throw FileError(o.gt, "no label records");
    const auto ids = index.video_ids();
    const double map = WithFile(o.gt, [&] { return MultilabelMap(scores, ids, gt.labels); });
    std::cout << "map " << FormatDouble(map) << "\n";
  }
  if (!o.output.empty()) WriteText(o.output, table);
  return 0;
}

const StoreEntry& FindEntry(const EmbeddingStore& store, const std::string& id,
                            const std::string& path) {
  for (const auto& e : store.entries) {
    if (e.id == id) return e;
  }
  throw FileError(path, "no entry with id '" + id + "'");
}

int RunWeights(const Options& o) {
  const AggregationConfig cfg = MakeConfig(o);
  const EmbeddingStore videos = LoadStore(o.videos);
  const EmbeddingStore queries = LoadStore(o.queries);
  const StoreEntry& v = FindEntry(videos, o.video_id, o.videos);
  const StoreEntry& q = FindEntry(queries, o.query_id, o.queries);
  const FrameMatrix frames = WithFile(o.videos, [&] {
    return UniformSubsample(FrameMatrix::FromRaw(v.id, v.rows, videos.dim, v.data), o.frames);
  });
  const TextVector text = WithFile(o.queries, [&] { return TextVector::FromRaw(q.id, q.data); });
  if (text.dim() != frames.dim()) {
    throw FileError(o.queries, "query dim does not match video dim");
  }
  const auto scorer = LoadScorer(o, cfg, frames.dim());
  // Score column: attention logits for attention methods, query cosines
  // otherwise.
  ScoreVector scores;
  if (cfg.method == Method::kSelfAttention) {
    scores = SelfAttentionScores(frames, *scorer);
  } else if (cfg.method == Method::kJointAttention) {
    scores = JointAttentionScores(frames, text, *scorer);
  } else {
    scores = FrameScores(frames, text);
  }
  const WeightVector w =
      IsAttentionMethod(cfg.method)
          ? AggregationWeights(frames, text, cfg, std::span<const double>(scores))
          : AggregationWeights(frames, text, cfg);
  std::string csv = "frame_idx,score,weight\n";
  char buf[128];
  for (size_t k = 0; k < scores.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%zu,%.9f,%.9f\n", k, scores[k], w.weights[k]);
    csv += buf;
  }
  if (o.output.empty()) {
    std::cout << csv;
  } else {
    WriteText(o.output, csv);
  }
  return 0;
}

int RunBench(const Options& o) {
  BenchConfig c;
  c.videos = o.bench_videos;
  c.frames = o.bench_frames;
  c.dim = o.bench_dim;
  c.queries_per_cell = o.bench_reps;
  c.warmup = o.bench_warmup;
  c.seed = o.seed;
  for (const auto& name : o.bench_methods) {
    Options per = o;
    per.method = name;
    c.methods.push_back(MakeConfig(per));
  }
  c.Validate();
  const std::string csv = BenchCsv(RunScalingBench(c));
  if (o.csv.empty()) {
    std::cout << csv;
  } else {
    WriteText(o.csv, csv);
  }
  return 0;
}

// Counts problems instead of stopping at the first one.
int RunValidate(const Options& o) {
  int errors = 0;
  auto report = [&](const std::string& path, const std::string& what) {
    std::cout << "error " << path << ": " << what << "\n";
    ++errors;
  };
  std::optional<EmbeddingStore> videos, queries;
  std::optional<GroundTruth> gt;
  auto check_store = [&](const std::string& path, std::optional<EmbeddingStore>& slot) {
    if (path.empty()) return;
    try {
      slot = ReadStore(path);
      uint64_t frames = 0;
      for (const auto& e : slot->entries) frames += static_cast<uint64_t>(e.rows);
      std::cout << "ok " << path << ": " << slot->entries.size() << " entries, " << frames
                << " rows, d=" << slot->dim << ", "
                << (slot->dtype == Dtype::kF16 ? "f16" : "f32") << "\n";
      for (const auto& e : slot->entries) {
        for (int k = 0; k < e.rows; ++k) {
          try {
            L2Normalize(std::span(e.data).subspan(static_cast<size_t>(k) * slot->dim,
                                                  static_cast<size_t>(slot->dim)));
          } catch (const Error& err) {
            report(path, "entry '" + e.id + "' row " + std::to_string(k) + ": " + err.what());
          }
        }
      }
    } catch (const std::exception& e) {
      report(path, e.what());
    }
  };
  check_store(o.videos, videos);
  check_store(o.queries, queries);
  if (queries) {
    for (const auto& e : queries->entries) {
      if (e.rows != 1) {
        report(o.queries, "query '" + e.id + "' has " + std::to_string(e.rows) + " rows");
      }
    }
  }
  if (videos && queries && videos->dim != queries->dim) {
    report(o.queries, "dim " + std::to_string(queries->dim) + " does not match videos dim " +
                          std::to_string(videos->dim));
  }
  if (!o.gt.empty()) {
    try {
      gt = LoadGroundTruth(o.gt);
      std::cout << "ok " << o.gt << ": " << gt->pairs.size() << " pairs, " << gt->labels.size()
                << " label records\n";
    } catch (const std::exception& e) {
      report(o.gt, e.what());
    }
  }
  if (gt && videos) {
    std::vector<std::string> vids, qids;
    for (const auto& e : videos->entries) vids.push_back(e.id);
    if (queries) {
      for (const auto& e : queries->entries) qids.push_back(e.id);
    }
    GroundTruth check = *gt;
    if (!queries) check.pairs.clear();
    try {
      CheckGroundTruthResolvable(check, vids, qids);
    } catch (const std::exception& e) {
      report(o.gt, e.what());
    }
  }
  if (o.videos.empty() && o.queries.empty() && o.gt.empty()) {
    throw CLI::ValidationError("validate", "give at least one of --videos, --queries, --gt");
  }
  std::cout << "errors " << errors << "\n";
  return errors == 0 ? 0 : kExitData;
}

void AddAggregationFlags(CLI::App* cmd, Options& o) {
  cmd->add_option("--method", o.method, "Aggregation method")
      ->check(CLI::IsMember({"mean", "query", "topk", "self-attn", "joint-attn"}))
      ->capture_default_str();
  cmd->add_option("--source", o.source, "Aggregation source")
      ->check(CLI::IsMember({"feature", "score"}))
      ->capture_default_str();
  cmd->add_option("--tau", o.tau, "Softmax temperature, tau > 0")
      ->check(kPositiveTau)
      ->capture_default_str();
  cmd->add_option("--topk", o.topk, "Frames kept by --method topk")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--scorer", o.scorer, "Scorer weights file (attention methods)");
}

void AddCorpusFlags(CLI::App* cmd, Options& o) {
  cmd->add_option("--videos", o.videos, "Video embedding store (.vemb)")->required();
  cmd->add_option("--queries", o.queries, "Text embedding store (.vemb), one row per entry")
      ->required();
  cmd->add_option("--frames", o.frames, "Frames kept per video by uniform subsampling")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Long-video text retrieval over per-frame embeddings"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "vidagg 0.1.0");

  auto* eval = app.add_subcommand("eval", "Text-to-video retrieval metrics");
  AddCorpusFlags(eval, o);
  AddAggregationFlags(eval, o);
  eval->add_option("--gt", o.gt, "Ground-truth JSONL with query_id/video_id pairs")->required();
  eval->add_option("--rerank", o.rerank, "Rerank depth R after mean coarse ranking, 0 = full")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  eval->add_option("--output", o.output, "Write the report as JSON");
  eval->add_option("--ranks", o.ranks_path, "Write per-query ranks as CSV");

  auto* search = app.add_subcommand("search", "Rank videos for queries");
  AddCorpusFlags(search, o);
  AddAggregationFlags(search, o);
  search->add_option("--query", o.query_id, "Only this query id (default all)");
  search->add_option("--top", o.top, "Results printed per query")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  search->add_option("--rerank", o.rerank, "Rerank depth R after mean coarse ranking, 0 = full")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  search->add_option("--output", o.output, "Write results CSV here instead of stdout");

  auto* classify = app.add_subcommand("classify", "Classification as retrieval over prompts");
  AddCorpusFlags(classify, o);
  AddAggregationFlags(classify, o);
  classify->add_option("--gt", o.gt, "Ground-truth JSONL with video_id/labels records");
  classify->add_option("--output", o.output, "Write per-video predictions as CSV");

  auto* weights = app.add_subcommand("weights", "Per-frame score and weight trace as CSV");
  AddCorpusFlags(weights, o);
  AddAggregationFlags(weights, o);
  weights->add_option("--video", o.video_id, "Video id")->required();
  weights->add_option("--query", o.query_id, "Query id")->required();
  weights->add_option("--output", o.output, "Write CSV here instead of stdout");

  auto* bench = app.add_subcommand("bench", "Latency and index size scaling on synthetic data");
  bench->add_option("--v", o.bench_videos, "Corpus sizes")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--k", o.bench_frames, "Frames per video")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--dim", o.bench_dim, "Embedding dim")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--methods", o.bench_methods, "Methods to time")
      ->check(CLI::IsMember({"mean", "query", "topk", "self-attn", "joint-attn"}))
      ->capture_default_str();
  bench->add_option("--source", o.source, "Aggregation source")
      ->check(CLI::IsMember({"feature", "score"}))
      ->capture_default_str();
  bench->add_option("--tau", o.tau, "Softmax temperature, tau > 0")
      ->check(kPositiveTau)
      ->capture_default_str();
  bench->add_option("--topk", o.topk, "Frames kept by topk")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--reps", o.bench_reps, "Timed queries per cell")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--warmup", o.bench_warmup, "Untimed queries per cell")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  bench->add_option("--seed", o.seed, "Corpus seed")->capture_default_str();
  bench->add_option("--csv", o.csv, "Write CSV here instead of stdout");

  auto* validate = app.add_subcommand("validate", "Check stores and ground truth");
  validate->add_option("--videos", o.videos, "Video embedding store");
  validate->add_option("--queries", o.queries, "Text embedding store");
  validate->add_option("--gt", o.gt, "Ground-truth JSONL");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*eval) return RunEval(o);
    if (*search) return RunSearch(o);
    if (*classify) return RunClassify(o);
    if (*weights) return RunWeights(o);
    if (*bench) return RunBench(o);
    if (*validate) return RunValidate(o);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const vidagg::Error& e) {
    const bool usage = e.code() == vidagg::ErrorCode::kMissingScorer ||
                       e.code() == vidagg::ErrorCode::kInvalidTau ||
                       e.code() == vidagg::ErrorCode::kInvalidArgument;
    std::cerr << (usage ? "usage error: " : "error: ") << e.what() << "\n";
    return usage ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
