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

#include <cmath>
#include <cstdio>
#include <string>

#include "vidagg/error.h"

namespace vidagg {
namespace {

std::string NumberedId(char prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%c%05d", prefix, i);
  return buf;
}

}  // namespace

std::vector<float> RandomUnitVector(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(static_cast<size_t>(dim));
  double sq = 0.0;
  do {
    sq = 0.0;
    for (double& x : v) {
      x = normal(rng);
      sq += x * x;
    }
  } while (sq < 1e-24);
  const double norm = std::sqrt(sq);
  std::vector<float> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = static_cast<float>(v[i] / norm);
  return out;
}

std::vector<FrameMatrix> RandomVideos(int videos, int frames, int dim,
                                      uint64_t seed) {
  if (videos < 1 || frames < 1 || dim < 1) {
    throw Error(ErrorCode::kInvalidArgument, "corpus sizes must be positive");
  }
  std::mt19937_64 rng(seed);
  std::vector<FrameMatrix> out;
  out.reserve(static_cast<size_t>(videos));
  for (int i = 0; i < videos; ++i) {
    std::vector<float> data;
    data.reserve(static_cast<size_t>(frames) * dim);
    for (int k = 0; k < frames; ++k) {
      const auto row = RandomUnitVector(rng, dim);
      data.insert(data.end(), row.begin(), row.end());
    }
    out.push_back(FrameMatrix::FromRaw(NumberedId('v', i), frames, dim, std::move(data)));
  }
  return out;
}

PlantedCorpus MakePlantedCorpus(const PlantedConfig& config) {
  if (config.videos < 1 || config.dim < 1 || config.frames < 1 ||
      config.pool_directions < 1) {
    throw Error(ErrorCode::kInvalidArgument, "planted corpus sizes must be positive");
  }
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> distractor_noise(0.0, config.distractor_noise);
  std::normal_distribution<double> query_noise(0.0, config.query_noise);

  std::vector<std::vector<float>> pool;
  for (int p = 0; p < config.pool_directions; ++p) {
    pool.push_back(RandomUnitVector(rng, config.dim));
  }
  std::uniform_int_distribution<int> pick_pool(0, config.pool_directions - 1);
  std::uniform_int_distribution<int> pick_slot(0, config.frames - 1);

  PlantedCorpus corpus;
  corpus.videos.dtype = Dtype::kF32;
  corpus.videos.dim = config.dim;
  corpus.queries.dtype = Dtype::kF32;
  corpus.queries.dim = config.dim;
  for (int i = 0; i < config.videos; ++i) {
    const std::vector<float> relevant = RandomUnitVector(rng, config.dim);
    const int slot = pick_slot(rng);
    StoreEntry video{NumberedId('v', i), config.frames, {}};
    video.data.reserve(static_cast<size_t>(config.frames) * config.dim);
    for (int k = 0; k < config.frames; ++k) {
      if (k == slot) {
        video.data.insert(video.data.end(), relevant.begin(), relevant.end());
        continue;
      }
      const auto& base = pool[pick_pool(rng)];
      for (int j = 0; j < config.dim; ++j) {
        video.data.push_back(static_cast<float>(base[j] + distractor_noise(rng)));
      }
    }
    StoreEntry query{NumberedId('q', i), 1, {}};
    for (int j = 0; j < config.dim; ++j) {
      query.data.push_back(static_cast<float>(relevant[j] + query_noise(rng)));
    }
    query.data = L2Normalize(query.data);
    corpus.truth.pairs.push_back({query.id, video.id});
    corpus.videos.entries.push_back(std::move(video));
    corpus.queries.entries.push_back(std::move(query));
  }
  return corpus;
}

}  // namespace vidagg
