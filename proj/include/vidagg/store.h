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

#ifndef VIDAGG_STORE_H_
#define VIDAGG_STORE_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "vidagg/embedding.h"

namespace vidagg {

enum class Dtype : uint8_t { kF32 = 0, kF16 = 1 };

struct StoreEntry {
  std::string id;
  int rows = 0;             // K
  std::vector<float> data;  // K x d, row-major, raw (not normalized)
};

// Contents of a .vemb file. Values are raw extractor output; normalization
// happens when entries are turned into FrameMatrix/TextVector.
struct EmbeddingStore {
  Dtype dtype = Dtype::kF32;
  int dim = 0;
  std::vector<StoreEntry> entries;

  // Throws DimMismatch, DuplicateId, ZeroFrames, NonFinite.
  void Validate() const;
};

// .vemb layout, little-endian:
//   "VEMB" | u32 version=1 | u8 dtype | u32 d | u64 entry count
//   per entry: u32 id length | id bytes | u32 K | K*d values (f32 or f16)
std::vector<uint8_t> EncodeStore(const EmbeddingStore& store);
EmbeddingStore DecodeStore(std::span<const uint8_t> bytes);
void WriteStore(const EmbeddingStore& store, const std::filesystem::path& path);
EmbeddingStore ReadStore(const std::filesystem::path& path);

// Exact encoded size of `store` in bytes.
uint64_t EncodedStoreSize(const EmbeddingStore& store);

// Rounds through IEEE binary16 (round to nearest even).
float RoundToHalf(float x);

std::vector<FrameMatrix> ToFrameMatrices(const EmbeddingStore& store);
// Every entry must hold exactly one row.
std::vector<TextVector> ToTextVectors(const EmbeddingStore& store);

struct RetrievalPair {
  std::string query_id;
  std::string video_id;
};

struct LabelRecord {
  std::string video_id;
  std::vector<int> labels;  // class ids, sorted, unique
};

struct GroundTruth {
  std::vector<RetrievalPair> pairs;
  std::vector<LabelRecord> labels;

  size_t size() const { return pairs.size() + labels.size(); }
};

// One object per line: {"query_id", "video_id"} or {"video_id", "labels"}.
// Blank lines are skipped and unknown fields ignored. Throws ParseError with
// the 1-based line number.
GroundTruth ParseGroundTruth(std::istream& in);
GroundTruth LoadGroundTruth(const std::filesystem::path& path);

// Throws UnknownId when a record names a query or video absent from the
// given id lists.
void CheckGroundTruthResolvable(const GroundTruth& gt,
                                std::span<const std::string> video_ids,
                                std::span<const std::string> query_ids);

}  // namespace vidagg

#endif  // VIDAGG_STORE_H_
