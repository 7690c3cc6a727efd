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

#include "nashapr/model_io.h"

#include <cmath>

#include "nashapr/binary_io.h"
#include "nashapr/errors.h"

namespace nashapr {
namespace {

// Generous sanity caps so a corrupt header cannot ask for absurd shapes.
constexpr std::uint32_t kMaxActions = 1u << 20;
constexpr std::uint32_t kMaxLayers = 1024;
constexpr std::uint32_t kMaxWidth = 1u << 20;

void WriteTensors(ByteWriter& w, const Weights& weights) {
  for (const auto& t : weights.Tensors()) {
    for (double x : t) w.F64(x);
  }
}

void ReadTensors(ByteReader& r, Weights& weights) {
  for (auto t : weights.Tensors()) {
    r.NeedItems(t.size(), 8);
    for (double& x : t) {
      const std::size_t at = r.offset();
      x = r.F64();
      if (!std::isfinite(x)) throw FormatError("non-finite parameter", at);
    }
  }
}

ApproximatorArch ReadArch(ByteReader& r) {
  ApproximatorArch arch;
  const std::size_t at = r.offset();
  const std::uint16_t n = r.U16();
  if (n < 2) throw FormatError("fewer than two players", at);
  r.NeedItems(n, 4);
  std::vector<int> counts;
  for (int i = 0; i < n; ++i) {
    const std::size_t pos = r.offset();
    const std::uint32_t k = r.U32();
    if (k < 1 || k > kMaxActions) throw FormatError("bad action count", pos);
    counts.push_back(static_cast<int>(k));
  }
  try {
    arch.shape = GameShape(counts);
  } catch (const std::exception& e) {
    throw FormatError(e.what(), at);
  }
  const std::size_t lpos = r.offset();
  const std::uint32_t layers = r.U32();
  if (layers < 1 || layers > kMaxLayers) {
    throw FormatError("bad hidden layer count", lpos);
  }
  r.NeedItems(layers, 4);
  arch.hidden_layers.clear();
  for (std::uint32_t l = 0; l < layers; ++l) {
    const std::size_t pos = r.offset();
    const std::uint32_t width = r.U32();
    if (width < 1 || width > kMaxWidth) throw FormatError("bad width", pos);
    arch.hidden_layers.push_back(static_cast<int>(width));
  }
  const std::size_t hpos = r.offset();
  arch.batchnorm_epsilon = r.F64();
  arch.bn_momentum = r.F64();
  arch.clip_lower = r.F64();
  arch.clip_upper = r.F64();
  try {
    arch.Validate();
  } catch (const ConfigError& e) {
    throw FormatError(e.what(), hpos);
  }
  return arch;
}

// Parameter count implied by `arch`, in floating point so absurd headers
// cannot overflow.
double ImpliedScalars(const ApproximatorArch& arch) {
  double total = 0;
  double fan_in = static_cast<double>(arch.shape.num_players()) *
                  static_cast<double>(arch.shape.num_joint_actions());
  for (int width : arch.hidden_layers) {
    total += (fan_in + 3) * width;  // weight, bias, running mean and var
    fan_in = width;
  }
  total += (fan_in + 1) * static_cast<double>(arch.shape.num_strategy_entries());
  return total;
}

}  // namespace

std::string EncodeModel(const ApproximatorArch& arch,
                        const ApproximatorParams& params,
                        const AdamState* adam) {
  ByteWriter w;
  w.Bytes(kModelMagic);
  w.U16(kModelVersion);
  w.U16(static_cast<std::uint16_t>(arch.shape.num_players()));
  for (int k : arch.shape.action_counts()) w.U32(static_cast<std::uint32_t>(k));
  w.U32(static_cast<std::uint32_t>(arch.hidden_layers.size()));
  for (int width : arch.hidden_layers) w.U32(static_cast<std::uint32_t>(width));
  w.F64(arch.batchnorm_epsilon);
  w.F64(arch.bn_momentum);
  w.F64(arch.clip_lower);
  w.F64(arch.clip_upper);
  WriteTensors(w, params.weights);
  for (std::size_t l = 0; l < params.running_mean.size(); ++l) {
    for (double x : params.running_mean[l]) w.F64(x);
    for (double x : params.running_var[l]) w.F64(x);
  }
  if (adam == nullptr) {
    w.Bytes(std::string_view("\0", 1));
  } else {
    w.Bytes(std::string_view("\1", 1));
    w.U64(adam->step);
    w.F64(adam->beta1);
    w.F64(adam->beta2);
    w.F64(adam->epsilon);
    w.F64(adam->learning_rate);
    WriteTensors(w, adam->first_moment);
    WriteTensors(w, adam->second_moment);
  }
  return w.data();
}

ModelFile DecodeModel(std::string_view bytes) {
  ByteReader r(bytes);
  if (r.Bytes(4) != kModelMagic) throw FormatError("bad model magic", 0);
  const std::uint16_t version = r.U16();
  if (version != kModelVersion) {
    throw FormatError("unsupported model version " + std::to_string(version),
                      4);
  }
  ModelFile out;
  out.arch = ReadArch(r);
  if (ImpliedScalars(out.arch) * 8 > static_cast<double>(r.remaining())) {
    throw FormatError("declared architecture exceeds file size", r.offset());
  }
  // Allocate the layout from the architecture, then fill it in.
  out.params = InitParams(out.arch, 0);
  ReadTensors(r, out.params.weights);
  for (std::size_t l = 0; l < out.arch.hidden_layers.size(); ++l) {
    for (Eigen::VectorXd* v :
         {&out.params.running_mean[l], &out.params.running_var[l]}) {
      r.NeedItems(v->size(), 8);
      for (double& x : *v) {
        const std::size_t at = r.offset();
        x = r.F64();
        if (!std::isfinite(x)) throw FormatError("non-finite statistic", at);
      }
    }
    if (out.params.running_var[l].size() > 0 &&
        out.params.running_var[l].minCoeff() < 0) {
      throw FormatError("negative running variance", r.offset());
    }
  }
  const std::size_t flag_at = r.offset();
  const unsigned char flag = static_cast<unsigned char>(r.Bytes(1)[0]);
  if (flag == 1) {
    AdamState adam = InitAdam(out.params.weights, 1.0);
    adam.step = r.U64();
    adam.beta1 = r.F64();
    adam.beta2 = r.F64();
    adam.epsilon = r.F64();
    adam.learning_rate = r.F64();
    ReadTensors(r, adam.first_moment);
    ReadTensors(r, adam.second_moment);
    for (const auto& t : adam.second_moment.Tensors()) {
      for (double x : t) {
        if (x < 0) throw FormatError("negative second moment", r.offset());
      }
    }
    out.adam = std::move(adam);
  } else if (flag != 0) {
    throw FormatError("bad optimizer flag", flag_at);
  }
  if (r.remaining() != 0) throw FormatError("trailing bytes", r.offset());
  return out;
}

ModelFile DecodeModel(std::string_view bytes,
                      const ApproximatorArch& expected) {
  ModelFile out = DecodeModel(bytes);
  if (!(out.arch == expected)) {
    throw FormatError("model architecture does not match", 6);
  }
  return out;
}

void SaveModel(const std::string& path, const ApproximatorArch& arch,
               const ApproximatorParams& params, const AdamState* adam) {
  WriteFileBytes(path, EncodeModel(arch, params, adam));
}

ModelFile LoadModel(const std::string& path) {
  return DecodeModel(ReadFileBytes(path));
}

ModelFile LoadModel(const std::string& path, const ApproximatorArch& expected) {
  return DecodeModel(ReadFileBytes(path), expected);
}

}  // namespace nashapr
