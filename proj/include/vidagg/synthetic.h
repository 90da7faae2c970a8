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

#ifndef VIDAGG_SYNTHETIC_H_
#define VIDAGG_SYNTHETIC_H_

// Seeded synthetic corpora for benchmarks, tests and the planted long-video
// experiment. All generators are deterministic in their seed.

#include <cstdint>
#include <random>
#include <vector>

#include "vidagg/embedding.h"
#include "vidagg/store.h"

namespace vidagg {

std::vector<float> RandomUnitVector(std::mt19937_64& rng, int dim);

// `videos` videos of exactly `frames` random unit-vector rows each, ids
// "v00000", "v00001", ...
std::vector<FrameMatrix> RandomVideos(int videos, int frames, int dim,
                                      uint64_t seed);

struct PlantedConfig {
  int videos = 500;
  int dim = 64;
  int frames = 16;
  int pool_directions = 32;
  double distractor_noise = 0.1;  // per-coordinate stddev
  double query_noise = 0.05;      // per-coordinate stddev
  uint64_t seed = 0;
};

// Each video holds one relevant frame (a random unit direction, placed at a
// random position) and frames-1 distractors drawn from a shared pool of
// directions plus Gaussian noise. Query j is video j's relevant direction
// plus Gaussian noise, and its ground truth is video j.
struct PlantedCorpus {
  EmbeddingStore videos;
  EmbeddingStore queries;
  GroundTruth truth;
};

PlantedCorpus MakePlantedCorpus(const PlantedConfig& config);

}  // namespace vidagg

#endif  // VIDAGG_SYNTHETIC_H_
