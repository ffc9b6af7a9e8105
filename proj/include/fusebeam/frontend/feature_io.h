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

#ifndef FUSEBEAM_FRONTEND_FEATURE_IO_H_
#define FUSEBEAM_FRONTEND_FEATURE_IO_H_

#include <iosfwd>
#include <string>

#include "fusebeam/frontend/feature_matrix.h"

namespace fusebeam {

// FEAT1 layout, little-endian:
//   "FEAT1" | frontend u8 | sample_rate u32 | frame_length_ms f64 |
//   hop_length_ms f64 | T u64 | D u64 | T*D f64, row-major.
// The window type is not stored; readers report hann.
void WriteFeat1(std::ostream& os, const FeatureMatrix& f);
FeatureMatrix ReadFeat1(std::istream& is);

// File variants. The writer goes through a temporary file and a rename.
void SaveFeat1(const std::string& path, const FeatureMatrix& f);
FeatureMatrix LoadFeat1(const std::string& path);

}  // namespace fusebeam

#endif  // FUSEBEAM_FRONTEND_FEATURE_IO_H_
