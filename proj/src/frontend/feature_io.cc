// Copyright 2026 The fusebeam Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fusebeam/frontend/feature_io.h"

#include <bit>
#include <type_traits>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>

#include "fusebeam/error.h"

namespace fusebeam {
namespace {

constexpr char kMagic[] = {'F', 'E', 'A', 'T', '1'};

template <typename T>
void PutLe(std::ostream& os, T value) {
  unsigned char bytes[sizeof(T)];
  std::uint64_t bits = 0;
  if constexpr (std::is_floating_point_v<T>) {
    bits = std::bit_cast<std::uint64_t>(static_cast<double>(value));
  } else {
    bits = static_cast<std::uint64_t>(value);
  }
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T GetLe(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw FormatError("FEAT1: truncated input");
  }
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  if constexpr (std::is_floating_point_v<T>) {
    return std::bit_cast<double>(bits);
  } else {
    return static_cast<T>(bits);
  }
}

}  // namespace

void WriteFeat1(std::ostream& os, const FeatureMatrix& f) {
  os.write(kMagic, sizeof kMagic);
  PutLe<std::uint8_t>(os, static_cast<std::uint8_t>(f.frontend));
  PutLe<std::uint32_t>(os, static_cast<std::uint32_t>(f.sample_rate));
  PutLe<double>(os, f.frame_config.frame_length_ms);
  PutLe<double>(os, f.frame_config.hop_length_ms);
  PutLe<std::uint64_t>(os, static_cast<std::uint64_t>(f.data.rows()));
  PutLe<std::uint64_t>(os, static_cast<std::uint64_t>(f.data.cols()));
  for (Eigen::Index t = 0; t < f.data.rows(); ++t) {
    for (Eigen::Index d = 0; d < f.data.cols(); ++d) PutLe<double>(os, f.data(t, d));
  }
  if (!os) throw FormatError("FEAT1: write failed");
}

FeatureMatrix ReadFeat1(std::istream& is) {
  char magic[sizeof kMagic];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw FormatError("FEAT1: bad magic");
  }
  FeatureMatrix f;
  const auto tag = GetLe<std::uint8_t>(is);
  if (tag > static_cast<std::uint8_t>(Frontend::kSymlet)) {
    throw FormatError("FEAT1: unknown frontend tag " + std::to_string(tag));
  }
  f.frontend = static_cast<Frontend>(tag);
  f.sample_rate = static_cast<int>(GetLe<std::uint32_t>(is));
  f.frame_config.frame_length_ms = GetLe<double>(is);
  f.frame_config.hop_length_ms = GetLe<double>(is);
  const auto rows = GetLe<std::uint64_t>(is);
  const auto cols = GetLe<std::uint64_t>(is);
  if (rows > (1ull << 32) || cols > (1ull << 24)) throw FormatError("FEAT1: implausible shape");
  f.data.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::uint64_t t = 0; t < rows; ++t) {
    for (std::uint64_t d = 0; d < cols; ++d) f.data(t, d) = GetLe<double>(is);
  }
  return f;
}

void SaveFeat1(const std::string& path, const FeatureMatrix& f) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw FormatError("cannot write " + tmp);
    WriteFeat1(os, f);
  }
  std::filesystem::rename(tmp, path);
}

FeatureMatrix LoadFeat1(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path);
  return ReadFeat1(is);
}

}  // namespace fusebeam
