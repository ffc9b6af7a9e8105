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

#ifndef FUSEBEAM_FRONTEND_AUDIO_H_
#define FUSEBEAM_FRONTEND_AUDIO_H_

#include <string>
#include <vector>

namespace fusebeam {

// Mono waveform with amplitudes nominally in [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 16000;

  // Throws std::invalid_argument if empty, non-finite or sample_rate <= 0.
  void Validate() const;
};

// Reads a mono RIFF/WAVE file holding 16-bit PCM or 32-bit IEEE float
// samples. Multi-channel files are rejected.
AudioBuffer ReadWav(const std::string& path);

// Writes 16-bit PCM. Samples are clipped to [-1, 1].
void WriteWav(const std::string& path, const AudioBuffer& audio);

}  // namespace fusebeam

#endif  // FUSEBEAM_FRONTEND_AUDIO_H_
