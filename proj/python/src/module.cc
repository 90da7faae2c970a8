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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vidagg/aggregation.h"
#include "vidagg/attention.h"
#include "vidagg/embedding.h"
#include "vidagg/error.h"
#include "vidagg/metrics.h"
#include "vidagg/retrieval.h"
#include "vidagg/store.h"

namespace py = pybind11;
using namespace vidagg;

namespace {

using F32Array = py::array_t<float, py::array::c_style | py::array::forcecast>;
using F64Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<float> Vector1d(const F32Array& a, const char* what) {
  if (a.ndim() != 1) throw py::value_error(std::string(what) + " must be 1-d");
  return {a.data(), a.data() + a.size()};
}

FrameMatrix Frames(const F32Array& a, const std::string& id = "video") {
  if (a.ndim() != 2) throw py::value_error("frames must be 2-d (K, d)");
  return FrameMatrix::FromRaw(id, static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)),
                              std::vector<float>(a.data(), a.data() + a.size()));
}

TextVector Text(const F32Array& a, const std::string& id = "query") {
  return TextVector::FromRaw(id, Vector1d(a, "query"));
}

template <typename T>
py::array_t<T> ToArray(const std::vector<T>& v) {
  py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::array_t<double> ToArray(const ScoreMatrix& m) {
  py::array_t<double> out({m.rows, m.cols});
  std::copy(m.values.begin(), m.values.end(), out.mutable_data());
  return out;
}

AggregationConfig Config(const std::string& method, const std::string& source, double tau,
                         int topk, bool renormalize) {
  AggregationConfig c;
  c.method = ParseMethod(method);
  c.source = ParseSource(source);
  c.tau = tau;
  c.topk_k = topk;
  c.renormalize_feature = renormalize;
  c.Validate();
  return c;
}

std::vector<TextVector> Texts(const F32Array& queries) {
  if (queries.ndim() != 2) throw py::value_error("queries must be 2-d (n, d)");
  std::vector<TextVector> out;
  const auto d = queries.shape(1);
  for (py::ssize_t j = 0; j < queries.shape(0); ++j) {
    out.push_back(TextVector::FromRaw(
        "q" + std::to_string(j),
        std::vector<float>(queries.data() + j * d, queries.data() + (j + 1) * d)));
  }
  return out;
}

py::list Ranked(const RankedList& r) {
  py::list out;
  for (const auto& item : r.items) out.append(py::make_tuple(item.video_id, item.similarity));
  return out;
}

py::dict StoreToDict(const EmbeddingStore& s) {
  py::dict entries;
  for (const auto& e : s.entries) {
    py::array_t<float> a({e.rows, s.dim});
    std::copy(e.data.begin(), e.data.end(), a.mutable_data());
    entries[py::str(e.id)] = a;
  }
  return entries;
}

#define AGG_KWARGS                                                           \
  py::arg("method") = "query", py::arg("source") = "feature",               \
  py::arg("tau") = kDefaultTau, py::arg("topk") = kDefaultTopK,             \
  py::arg("renormalize") = true

}  // namespace

PYBIND11_MODULE(_vidagg, m) {
  m.doc() = "Long-video text retrieval over per-frame embeddings";

  static py::exception<Error> error(m, "VidaggError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.attr("DEFAULT_TAU") = kDefaultTau;
  m.attr("DEFAULT_FRAMES") = kDefaultFramesPerVideo;

  m.def("l2_normalize", [](const F32Array& v) { return ToArray(L2Normalize(Vector1d(v, "v"))); },
        py::arg("v"));
  m.def("frame_scores",
        [](const F32Array& frames, const F32Array& query) {
          return ToArray(FrameScores(Frames(frames), Text(query)));
        },
        py::arg("frames"), py::arg("query"), "Cosine of each frame with the query.");
  m.def("softmax_weights",
        [](const F64Array& scores, double tau) {
          std::vector<double> s(scores.data(), scores.data() + scores.size());
          return ToArray(SoftmaxWeights(s, tau).weights);
        },
        py::arg("scores"), py::arg("tau") = kDefaultTau);
  m.def("topk_select",
        [](const F64Array& scores, int k) {
          return TopKSelect(std::span(scores.data(), static_cast<size_t>(scores.size())), k);
        },
        py::arg("scores"), py::arg("k"));
  m.def("uniform_subsample",
        [](const F32Array& frames, int n) {
          const FrameMatrix f = UniformSubsample(Frames(frames), n);
          py::array_t<float> out({f.rows(), f.dim()});
          std::copy(f.data().begin(), f.data().end(), out.mutable_data());
          return out;
        },
        py::arg("frames"), py::arg("n"), "Rows are L2-normalized on the way in.");

  m.def("similarity",
        [](const F32Array& frames, const F32Array& query, const std::string& method,
           const std::string& source, double tau, int topk, bool renormalize,
           std::optional<F64Array> scores) {
          const AggregationConfig c = Config(method, source, tau, topk, renormalize);
          std::optional<std::span<const double>> override;
          if (scores) override = std::span(scores->data(), static_cast<size_t>(scores->size()));
          return Similarity(Frames(frames), Text(query), c, override);
        },
        py::arg("frames"), py::arg("query"), AGG_KWARGS, py::arg("scores") = py::none(),
        "Query-video similarity. Attention methods take precomputed frame scores.");
  m.def("aggregation_weights",
        [](const F32Array& frames, const F32Array& query, const std::string& method,
           const std::string& source, double tau, int topk, bool renormalize,
           std::optional<F64Array> scores) {
          const AggregationConfig c = Config(method, source, tau, topk, renormalize);
          std::optional<std::span<const double>> override;
          if (scores) override = std::span(scores->data(), static_cast<size_t>(scores->size()));
          return ToArray(AggregationWeights(Frames(frames), Text(query), c, override).weights);
        },
        py::arg("frames"), py::arg("query"), AGG_KWARGS, py::arg("scores") = py::none());

  py::class_<ScorerWeights>(m, "ScorerWeights")
      .def_readonly("d", &ScorerWeights::d)
      .def_readonly("heads", &ScorerWeights::heads)
      .def_readonly("use_positional", &ScorerWeights::use_positional)
      .def_property_readonly("n_layers", &ScorerWeights::n_layers)
      .def("save", [](const ScorerWeights& w, const std::filesystem::path& p) {
        SaveScorerWeights(p, w);
      });
  m.def("load_scorer", &LoadScorerWeights, py::arg("path"));
  m.def("random_scorer", &RandomScorerWeights, py::arg("d"), py::arg("heads") = kDefaultHeads,
        py::arg("n_layers") = 1, py::arg("use_positional") = false, py::arg("max_len") = 0,
        py::arg("seed") = 0);
  m.def("self_attention_scores",
        [](const F32Array& frames, const ScorerWeights& w) {
          return ToArray(SelfAttentionScores(Frames(frames), w));
        },
        py::arg("frames"), py::arg("scorer"));
  m.def("joint_attention_scores",
        [](const F32Array& frames, const F32Array& query, const ScorerWeights& w) {
          return ToArray(JointAttentionScores(Frames(frames), Text(query), w));
        },
        py::arg("frames"), py::arg("query"), py::arg("scorer"));

  py::class_<RetrievalIndex>(m, "Index")
      .def(py::init([](const std::vector<std::string>& ids, const std::vector<F32Array>& frames,
                       int frames_per_video) {
             if (ids.size() != frames.size()) throw py::value_error("ids and frames differ in length");
             std::vector<FrameMatrix> videos;
             for (size_t i = 0; i < ids.size(); ++i) videos.push_back(Frames(frames[i], ids[i]));
             return RetrievalIndex::Build(std::move(videos), frames_per_video);
           }),
           py::arg("ids"), py::arg("frames"), py::arg("frames_per_video") = kDefaultFramesPerVideo)
      .def_static("from_store",
                  [](const std::filesystem::path& p, int frames_per_video) {
                    return RetrievalIndex::Build(ReadStore(p), frames_per_video);
                  },
                  py::arg("path"), py::arg("frames_per_video") = kDefaultFramesPerVideo)
      .def("__len__", &RetrievalIndex::size)
      .def_property_readonly("dim", &RetrievalIndex::dim)
      .def_property_readonly("video_ids", &RetrievalIndex::video_ids)
      .def_property_readonly("frame_access_count", &RetrievalIndex::frame_access_count)
      .def("rank",
           [](const RetrievalIndex& index, const F32Array& query, const std::string& method,
              const std::string& source, double tau, int topk, bool renormalize,
              const ScorerWeights* scorer, int rerank) {
             const AggregationConfig c = Config(method, source, tau, topk, renormalize);
             const TextVector t = Text(query);
             return Ranked(rerank > 0 ? TwoStageRank(index, t, c, rerank, scorer)
                                      : RankT2V(index, t, c, scorer));
           },
           py::arg("query"), AGG_KWARGS, py::arg("scorer") = nullptr, py::arg("rerank") = 0,
           "List of (video_id, similarity), best first. rerank > 0 ranks two-stage.")
      .def("similarity_matrix",
           [](const RetrievalIndex& index, const F32Array& queries, const std::string& method,
              const std::string& source, double tau, int topk, bool renormalize,
              const ScorerWeights* scorer, int workers) {
             const AggregationConfig c = Config(method, source, tau, topk, renormalize);
             const auto texts = Texts(queries);
             ScoreMatrix s;
             {
               py::gil_scoped_release release;
               s = SimilarityMatrix(index, texts, c, scorer, workers);
             }
             return ToArray(s);
           },
           py::arg("queries"), AGG_KWARGS, py::arg("scorer") = nullptr, py::arg("workers") = 1,
           "(videos, queries) similarity array.");

  m.def("recall_at_k", [](const std::vector<int>& r, int k) { return RecallAtK(r, k); },
        py::arg("ranks"), py::arg("k"));
  m.def("rank_stats",
        [](const std::vector<int>& r) {
          const RankStats s = ComputeRankStats(r);
          return py::make_tuple(s.median_rank, s.mean_rank);
        },
        py::arg("ranks"), "(median rank, mean rank)");
  m.def("geometric_mean_recall", &GeometricMeanRecall, py::arg("r1"), py::arg("r5"),
        py::arg("r10"));
  m.def("multilabel_map",
        [](const F64Array& scores, const std::vector<std::string>& ids,
           const std::map<std::string, std::vector<int>>& labels) {
          if (scores.ndim() != 2) throw py::value_error("scores must be 2-d (videos, classes)");
          ScoreMatrix s(static_cast<int>(scores.shape(0)), static_cast<int>(scores.shape(1)));
          std::copy(scores.data(), scores.data() + scores.size(), s.values.begin());
          std::vector<LabelRecord> records;
          for (const auto& [id, l] : labels) {
            LabelRecord r{id, l};
            std::sort(r.labels.begin(), r.labels.end());
            r.labels.erase(std::unique(r.labels.begin(), r.labels.end()), r.labels.end());
            records.push_back(std::move(r));
          }
          return MultilabelMap(s, ids, records);
        },
        py::arg("scores"), py::arg("video_ids"), py::arg("labels"));
  m.def("eval_report",
        [](std::vector<int> ranks) { return FormatReport(MakeEvalReport(std::move(ranks))); },
        py::arg("ranks"), "Key-value text report for ground-truth ranks.");

  m.def("read_store",
        [](const std::filesystem::path& p) {
          const EmbeddingStore s = ReadStore(p);
          return py::make_tuple(s.dtype == Dtype::kF16 ? "f16" : "f32", StoreToDict(s));
        },
        py::arg("path"), "(dtype, {id: (K, d) float32 array}) in file order.");
  m.def("write_store",
        [](const std::filesystem::path& p, const py::dict& entries, const std::string& dtype) {
          EmbeddingStore s;
          if (dtype == "f32") {
            s.dtype = Dtype::kF32;
          } else if (dtype == "f16") {
            s.dtype = Dtype::kF16;
          } else {
            throw py::value_error("dtype must be 'f32' or 'f16'");
          }
          for (const auto& [key, value] : entries) {
            const F32Array a = py::cast<F32Array>(value);
            if (a.ndim() != 2) throw py::value_error("store entries must be 2-d (K, d)");
            s.dim = static_cast<int>(a.shape(1));
            s.entries.push_back({py::cast<std::string>(key), static_cast<int>(a.shape(0)),
                                 std::vector<float>(a.data(), a.data() + a.size())});
          }
          WriteStore(s, p);
        },
        py::arg("path"), py::arg("entries"), py::arg("dtype") = "f32");
}
