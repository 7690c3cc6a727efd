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

#include <cstdio>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "nashapr/binary_io.h"
#include "nashapr/errors.h"

namespace nashapr {
namespace {

Dataset SmallDataset() {
  const auto spec = MakeGeneratorSpec(GameClass::kGrabTheDollar, {4, 4}, 42);
  return Generate(spec, 30, MakeSplit(30, 5, 5));
}

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

TEST_CASE("binary round trip is bit-exact") {
  const Dataset ds = SmallDataset();
  const std::string path = TempPath("nashapr_roundtrip.nfg");
  SaveDataset(ds, path);
  const Dataset back = LoadDataset(path);
  CHECK(back == ds);
  CHECK(EncodeDataset(back) == EncodeDataset(ds));
  std::remove(path.c_str());
}

TEST_CASE("header layout") {
  const std::string bytes = EncodeDataset(SmallDataset());
  CHECK(bytes.substr(0, 4) == "NFG1");
  ByteReader r(bytes);
  r.Bytes(4);
  CHECK(r.U16() == 1);
  CHECK(r.String() == "grab_the_dollar");
  CHECK(r.U64() == 42);
  CHECK(r.U16() == 2);
  CHECK(r.U32() == 4);
  CHECK(r.U32() == 4);
  CHECK(r.U32() == 1);
  CHECK(r.String() == "decay");
  CHECK(r.F64() == 1.0);
  CHECK(r.U64() == 30);
  // Game 0, player 0, joint action (0, 0).
  CHECK(r.F64() == SmallDataset().games[0].flat()[0]);
}

TEST_CASE("corrupt files raise format errors with offsets") {
  const std::string bytes = EncodeDataset(SmallDataset());
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(DecodeDataset(bad_magic), FormatError);
  std::string bad_version = bytes;
  bad_version[4] = 9;
  try {
    DecodeDataset(bad_version);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.offset() == 4);
  }
  for (std::size_t cut : {std::size_t{3}, std::size_t{20}, bytes.size() / 2,
                          bytes.size() - 1}) {
    CHECK_THROWS_AS(DecodeDataset(bytes.substr(0, cut)), FormatError);
  }
  CHECK_THROWS_AS(DecodeDataset(bytes + "x"), FormatError);
}

TEST_CASE("header-only file with zero games is an empty dataset") {
  Dataset empty;
  empty.spec = MakeGeneratorSpec(GameClass::kMajorityVoting, {3, 3}, 1);
  const std::string full = EncodeDataset(empty);
  // Drop the three empty split lists.
  const std::string header_only = full.substr(0, full.size() - 24);
  const Dataset a = DecodeDataset(header_only);
  const Dataset b = DecodeDataset(full);
  CHECK(a.games.empty());
  CHECK(a == empty);
  CHECK(b == empty);
}

TEST_CASE("JSON export is lossless") {
  const Dataset ds = SmallDataset();
  const Dataset back = DatasetFromJson(DatasetToJson(ds));
  CHECK(back == ds);
}

}  // namespace
}  // namespace nashapr
