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

#include "vidagg/store.h"

#include <Eigen/Core>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <unordered_set>

#include "binary_io.h"
#include "vidagg/error.h"

namespace vidagg {
namespace {

constexpr char kStoreMagic[] = "VEMB";
constexpr uint32_t kStoreVersion = 1;
constexpr uint64_t kHeaderBytes = 4 + 4 + 1 + 4 + 8;

size_t DtypeSize(Dtype dtype) { return dtype == Dtype::kF16 ? 2 : 4; }

uint16_t ToHalfBits(float x) {
  return Eigen::numext::bit_cast<uint16_t>(Eigen::half(x));
}

float FromHalfBits(uint16_t bits) {
  return static_cast<float>(Eigen::numext::bit_cast<Eigen::half>(bits));
}

}  // namespace

float RoundToHalf(float x) { return FromHalfBits(ToHalfBits(x)); }

void EmbeddingStore::Validate() const {
  if (dim < 1) {
    throw Error(ErrorCode::kDimMismatch, "store dimension must be >= 1");
  }
  std::unordered_set<std::string> seen;
  for (const StoreEntry& e : entries) {
    if (!seen.insert(e.id).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate id '" + e.id + "'");
    }
    if (e.rows < 1) {
      throw Error(ErrorCode::kZeroFrames, "entry '" + e.id + "' has no rows");
    }
    if (e.data.size() != static_cast<size_t>(e.rows) * static_cast<size_t>(dim)) {
      throw Error(ErrorCode::kDimMismatch,
                  "entry '" + e.id + "' data does not match K x d");
    }
    for (float x : e.data) {
      if (!std::isfinite(x)) {
        throw Error(ErrorCode::kNonFinite, "entry '" + e.id + "' has NaN or Inf");
      }
    }
  }
}

uint64_t EncodedStoreSize(const EmbeddingStore& store) {
  uint64_t size = kHeaderBytes;
  for (const StoreEntry& e : store.entries) {
    size += 4 + e.id.size() + 4 +
            static_cast<uint64_t>(e.rows) * store.dim * DtypeSize(store.dtype);
  }
  return size;
}

std::vector<uint8_t> EncodeStore(const EmbeddingStore& store) {
  store.Validate();
  internal::ByteWriter out;
  out.buffer().reserve(EncodedStoreSize(store));
  out.Bytes(std::string_view(kStoreMagic, 4));
  out.U32(kStoreVersion);
  out.U8(static_cast<uint8_t>(store.dtype));
  out.U32(static_cast<uint32_t>(store.dim));
  out.U64(store.entries.size());
  for (const StoreEntry& e : store.entries) {
    out.U32(static_cast<uint32_t>(e.id.size()));
    out.Bytes(e.id);
    out.U32(static_cast<uint32_t>(e.rows));
    if (store.dtype == Dtype::kF32) {
      for (float x : e.data) out.F32(x);
    } else {
      for (float x : e.data) {
        const uint16_t bits = ToHalfBits(x);
        if (!std::isfinite(FromHalfBits(bits))) {
          throw Error(ErrorCode::kNonFinite,
                      "entry '" + e.id + "' overflows half precision");
        }
        out.U16(bits);
      }
    }
  }
  return std::move(out.buffer());
}

EmbeddingStore DecodeStore(std::span<const uint8_t> bytes) {
  internal::ByteReader in(bytes, ErrorCode::kBadMagic);
  if (in.remaining() < 4 || in.Bytes(4) != std::string_view(kStoreMagic, 4)) {
    throw Error(ErrorCode::kBadMagic, "missing VEMB magic");
  }
  if (const uint32_t version = in.U32(); version != kStoreVersion) {
    throw Error(ErrorCode::kBadMagic,
                "unsupported VEMB version " + std::to_string(version));
  }
  EmbeddingStore store;
  const uint8_t dtype = in.U8();
  if (dtype > 1) {
    throw Error(ErrorCode::kBadMagic, "unknown dtype " + std::to_string(dtype));
  }
  store.dtype = static_cast<Dtype>(dtype);
  const uint32_t dim = in.U32();
  if (dim < 1 || dim > INT32_MAX) {
    throw Error(ErrorCode::kDimMismatch, "store dimension must be >= 1");
  }
  store.dim = static_cast<int>(dim);
  const uint64_t count = in.U64();
  // Each entry needs at least 8 header bytes.
  if (count > in.remaining() / 8) {
    throw Error(ErrorCode::kBadMagic, "entry count exceeds file size");
  }
  const size_t value_size = DtypeSize(store.dtype);
  std::unordered_set<std::string> seen;
  store.entries.reserve(static_cast<size_t>(count));
  for (uint64_t i = 0; i < count; ++i) {
    StoreEntry e;
    const uint32_t id_len = in.U32();
    e.id = in.Bytes(id_len);
    if (!seen.insert(e.id).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate id '" + e.id + "'");
    }
    const uint32_t rows = in.U32();
    if (rows == 0) {
      throw Error(ErrorCode::kZeroFrames, "entry '" + e.id + "' has no rows");
    }
    if (rows > in.remaining() / value_size / dim) {
      throw Error(ErrorCode::kBadMagic, "entry '" + e.id + "' truncated");
    }
    e.rows = static_cast<int>(rows);
    e.data.resize(static_cast<size_t>(rows) * dim);
    for (float& x : e.data) {
      x = store.dtype == Dtype::kF32 ? in.F32() : FromHalfBits(in.U16());
      if (!std::isfinite(x)) {
        throw Error(ErrorCode::kNonFinite, "entry '" + e.id + "' has NaN or Inf");
      }
    }
    store.entries.push_back(std::move(e));
  }
  if (in.remaining() != 0) {
    throw Error(ErrorCode::kBadMagic, "trailing bytes after last entry");
  }
  return store;
}

void WriteStore(const EmbeddingStore& store, const std::filesystem::path& path) {
  internal::WriteFileBytes(path, EncodeStore(store));
}

EmbeddingStore ReadStore(const std::filesystem::path& path) {
  return DecodeStore(internal::ReadFileBytes(path));
}

std::vector<FrameMatrix> ToFrameMatrices(const EmbeddingStore& store) {
  std::vector<FrameMatrix> out;
  out.reserve(store.entries.size());
  for (const StoreEntry& e : store.entries) {
    out.push_back(FrameMatrix::FromRaw(e.id, e.rows, store.dim, e.data));
  }
  return out;
}

std::vector<TextVector> ToTextVectors(const EmbeddingStore& store) {
  std::vector<TextVector> out;
  out.reserve(store.entries.size());
  for (const StoreEntry& e : store.entries) {
    if (e.rows != 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "query entry '" + e.id + "' must have exactly one row");
    }
    out.push_back(TextVector::FromRaw(e.id, e.data));
  }
  return out;
}

GroundTruth ParseGroundTruth(std::istream& in) {
  GroundTruth gt;
  std::unordered_set<std::string> seen_queries;
  std::unordered_set<std::string> seen_videos;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(),
                    [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line_no, e.what());
    }
    if (!record.is_object()) throw ParseError(line_no, "record is not an object");
    auto string_field = [&](const char* key) -> const std::string* {
      auto it = record.find(key);
      if (it == record.end()) return nullptr;
      if (!it->is_string()) {
        throw ParseError(line_no, std::string(key) + " must be a string");
      }
      return it->get_ptr<const std::string*>();
    };
    const std::string* video_id = string_field("video_id");
    if (video_id == nullptr) throw ParseError(line_no, "missing video_id");
    if (const std::string* query_id = string_field("query_id")) {
      if (!seen_queries.insert(*query_id).second) {
        throw ParseError(line_no, "duplicate query_id '" + *query_id + "'");
      }
      gt.pairs.push_back({*query_id, *video_id});
      continue;
    }
    auto labels = record.find("labels");
    if (labels == record.end() || !labels->is_array()) {
      throw ParseError(line_no, "record needs query_id or a labels array");
    }
    LabelRecord rec{*video_id, {}};
    for (const auto& c : *labels) {
      if (!c.is_number_integer() || c.get<int64_t>() < 0 ||
          c.get<int64_t>() > INT32_MAX) {
        throw ParseError(line_no, "labels must be non-negative integers");
      }
      rec.labels.push_back(c.get<int>());
    }
    std::sort(rec.labels.begin(), rec.labels.end());
    rec.labels.erase(std::unique(rec.labels.begin(), rec.labels.end()),
                     rec.labels.end());
    if (!seen_videos.insert(rec.video_id).second) {
      throw ParseError(line_no, "duplicate labels for '" + rec.video_id + "'");
    }
    gt.labels.push_back(std::move(rec));
  }
  if (gt.size() == 0) throw ParseError(line_no, "no records");
  return gt;
}

GroundTruth LoadGroundTruth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  return ParseGroundTruth(in);
}

void CheckGroundTruthResolvable(const GroundTruth& gt,
                                std::span<const std::string> video_ids,
                                std::span<const std::string> query_ids) {
  const std::unordered_set<std::string> videos(video_ids.begin(), video_ids.end());
  const std::unordered_set<std::string> queries(query_ids.begin(), query_ids.end());
  for (const RetrievalPair& p : gt.pairs) {
    if (!queries.contains(p.query_id)) {
      throw Error(ErrorCode::kUnknownId, "unknown query '" + p.query_id + "'");
    }
    if (!videos.contains(p.video_id)) {
      throw Error(ErrorCode::kUnknownId, "unknown video '" + p.video_id + "'");
    }
  }
  for (const LabelRecord& r : gt.labels) {
    if (!videos.contains(r.video_id)) {
      throw Error(ErrorCode::kUnknownId, "unknown video '" + r.video_id + "'");
    }
  }
}

}  // namespace vidagg
