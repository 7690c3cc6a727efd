// Copyright 2026 The NashApr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nashapr/dataset_io.h"

#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "nashapr/binary_io.h"
#include "nashapr/errors.h"

namespace nashapr {
namespace {

void WriteIndices(ByteWriter& w, const std::vector<std::uint64_t>& indices) {
  w.U64(indices.size());
  for (std::uint64_t k : indices) w.U64(k);
}

std::vector<std::uint64_t> ReadIndices(ByteReader& r, std::uint64_t games) {
  const std::uint64_t count = r.U64();
  r.NeedItems(count, 8);
  std::vector<std::uint64_t> out(count);
  for (auto& k : out) {
    const std::size_t pos = r.offset();
    k = r.U64();
    if (k >= games) throw FormatError("split index out of range", pos);
  }
  return out;
}

}  // namespace

std::string ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void WriteFileBytes(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string EncodeDataset(const Dataset& ds) {
  ByteWriter w;
  w.Bytes(kDatasetMagic);
  w.U16(kDatasetVersion);
  w.String(GameClassName(ds.spec.game_class));
  w.U64(ds.spec.seed);
  const GameShape& shape = ds.spec.shape;
  w.U16(static_cast<std::uint16_t>(shape.num_players()));
  for (int k : shape.action_counts()) w.U32(static_cast<std::uint32_t>(k));
  w.U32(static_cast<std::uint32_t>(ds.spec.class_params.size()));
  for (const auto& [name, value] : ds.spec.class_params) {
    w.String(name);
    w.F64(value);
  }
  w.U64(ds.games.size());
  for (const Game& g : ds.games) {
    if (!(g.shape() == shape)) {
      throw DimensionError("dataset game does not match spec shape");
    }
    for (double u : g.flat()) w.F64(u);
  }
  WriteIndices(w, ds.split.train);
  WriteIndices(w, ds.split.validation);
  WriteIndices(w, ds.split.test);
  return w.data();
}

Dataset DecodeDataset(std::string_view bytes) {
  ByteReader r(bytes);
  if (r.Bytes(kDatasetMagic.size()) != kDatasetMagic) {
    throw FormatError("bad dataset magic", 0);
  }
  std::size_t at = r.offset();
  if (r.U16() != kDatasetVersion) {
    throw FormatError("unsupported dataset version", at);
  }
  Dataset ds;
  at = r.offset();
  const std::string class_name = r.String();
  try {
    ds.spec.game_class = ParseGameClass(class_name);
  } catch (const SpecError& e) {
    throw FormatError(e.what(), at);
  }
  ds.spec.seed = r.U64();
  at = r.offset();
  const std::uint16_t n = r.U16();
  r.NeedItems(n, 4);
  std::vector<int> counts(n);
  for (int& k : counts) {
    const std::uint32_t v = r.U32();
    if (v == 0 || v > (1u << 30)) throw FormatError("bad action count", at);
    k = static_cast<int>(v);
  }
  try {
    ds.spec.shape = GameShape(counts);
  } catch (const std::exception& e) {
    throw FormatError(e.what(), at);
  }
  const std::uint32_t params = r.U32();
  r.NeedItems(params, 12);
  for (std::uint32_t p = 0; p < params; ++p) {
    std::string name = r.String();
    ds.spec.class_params.emplace_back(std::move(name), r.F64());
  }
  const std::uint64_t count = r.U64();
  // A header ending at a zero game count is an empty dataset.
  if (count == 0 && r.remaining() == 0) return ds;
  const std::size_t per_game = ds.spec.shape.num_utilities();
  r.NeedItems(count, per_game * 8);
  ds.games.reserve(count);
  for (std::uint64_t g = 0; g < count; ++g) {
    at = r.offset();
    std::vector<double> utilities(per_game);
    for (double& u : utilities) u = r.F64();
    try {
      ds.games.emplace_back(ds.spec.shape, std::move(utilities));
    } catch (const DataError& e) {
      throw FormatError(e.what(), at);
    }
  }
  ds.split.train = ReadIndices(r, count);
  ds.split.validation = ReadIndices(r, count);
  ds.split.test = ReadIndices(r, count);
  if (r.remaining() != 0) {
    throw FormatError("trailing bytes after dataset", r.offset());
  }
  return ds;
}

void SaveDataset(const Dataset& ds, const std::string& path) {
  WriteFileBytes(path, EncodeDataset(ds));
}

Dataset LoadDataset(const std::string& path) {
  return DecodeDataset(ReadFileBytes(path));
}

std::string DatasetToJson(const Dataset& ds) {
  nlohmann::json j;
  j["magic"] = kDatasetMagic;
  j["version"] = kDatasetVersion;
  j["class_name"] = GameClassName(ds.spec.game_class);
  j["seed"] = ds.spec.seed;
  j["action_counts"] = ds.spec.shape.action_counts();
  j["class_params"] = nlohmann::json::array();
  for (const auto& [name, value] : ds.spec.class_params) {
    j["class_params"].push_back({name, value});
  }
  j["games"] = nlohmann::json::array();
  for (const Game& g : ds.games) {
    j["games"].push_back(std::vector<double>(g.flat().begin(), g.flat().end()));
  }
  j["split"] = {{"train", ds.split.train},
                {"validation", ds.split.validation},
                {"test", ds.split.test}};
  return j.dump();
}

Dataset DatasetFromJson(std::string_view json) {
  const nlohmann::json j = nlohmann::json::parse(json);
  if (j.at("magic").get<std::string>() != kDatasetMagic ||
      j.at("version").get<int>() != kDatasetVersion) {
    throw FormatError("bad dataset JSON header", 0);
  }
  Dataset ds;
  ds.spec.game_class = ParseGameClass(j.at("class_name").get<std::string>());
  ds.spec.seed = j.at("seed").get<std::uint64_t>();
  ds.spec.shape = GameShape(j.at("action_counts").get<std::vector<int>>());
  for (const auto& p : j.at("class_params")) {
    ds.spec.class_params.emplace_back(p.at(0).get<std::string>(),
                                      p.at(1).get<double>());
  }
  for (const auto& g : j.at("games")) {
    ds.games.emplace_back(ds.spec.shape, g.get<std::vector<double>>());
  }
  const auto& split = j.at("split");
  ds.split.train = split.at("train").get<std::vector<std::uint64_t>>();
  ds.split.validation = split.at("validation").get<std::vector<std::uint64_t>>();
  ds.split.test = split.at("test").get<std::vector<std::uint64_t>>();
  return ds;
}

}  // namespace nashapr
