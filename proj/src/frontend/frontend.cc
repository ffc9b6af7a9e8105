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

#include "fusebeam/frontend/frontend.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "fusebeam/error.h"
#include "fusebeam/frontend/spectral_features.h"

namespace fusebeam {

std::string FrontendName(Frontend frontend) {
  switch (frontend) {
    case Frontend::kMel: return "MEL";
    case Frontend::kMfcc: return "MFCC";
    case Frontend::kGamma: return "GAMMA";
    case Frontend::kCqt: return "CQT";
    case Frontend::kModgd: return "MODGD";
    case Frontend::kSymlet: return "SYMLET";
  }
  return "MEL";
}

Frontend ParseFrontend(const std::string& name) {
  std::string upper = name;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  for (int i = 0; i <= static_cast<int>(Frontend::kSymlet); ++i) {
    const auto f = static_cast<Frontend>(i);
    if (FrontendName(f) == upper) return f;
  }
  throw ConfigError("unknown frontend: " + name);
}

void FeatureMatrix::Validate() const {
  if (data.rows() < 1 || data.cols() < 1) throw std::invalid_argument("empty feature matrix");
  if (!data.allFinite()) throw std::invalid_argument("feature matrix has non-finite entries");
}

FrontendConfig FrontendConfig::Defaults(Frontend kind) {
  FrontendConfig cfg;
  cfg.kind = kind;
  switch (kind) {
    case Frontend::kGamma:
      cfg.filterbank = FilterbankSpec::Gammatone();
      break;
    case Frontend::kCqt:
      cfg.filterbank = FilterbankSpec::Cqt();
      break;
    default:
      cfg.filterbank = FilterbankSpec::Mel();
      break;
  }
  return cfg;
}

int FrontendConfig::Dim(int sample_rate) const {
  switch (kind) {
    case Frontend::kMel:
    case Frontend::kGamma:
    case Frontend::kCqt:
      return filterbank.num_filters;
    case Frontend::kMfcc:
      return num_ceps;
    case Frontend::kModgd:
      return modgd.num_coeffs > 0
                 ? modgd.num_coeffs
                 : FftSizeFor(frame.FrameLength(sample_rate)) / 2 + 1;
    case Frontend::kSymlet:
      return 1 << symlet.depth;
  }
  return 0;
}

FeatureMatrix ExtractFeatures(const AudioBuffer& audio,
                              const FrontendConfig& cfg) {
  audio.Validate();
  switch (cfg.kind) {
    case Frontend::kMel: return MelSpectrogram(audio, cfg.frame, cfg.filterbank);
    case Frontend::kMfcc: return Mfcc(audio, cfg.frame, cfg.filterbank, cfg.num_ceps);
    case Frontend::kGamma: return GammatoneFeatures(audio, cfg.frame, cfg.filterbank);
    case Frontend::kCqt: return CqtFeatures(audio, cfg.frame, cfg.filterbank);
    case Frontend::kModgd: return ModgdFeatures(audio, cfg.frame, cfg.modgd);
    case Frontend::kSymlet: return SymletFeatures(audio, cfg.frame, cfg.symlet);
  }
  throw std::invalid_argument("unknown frontend");
}

nlohmann::json FrontendConfigToJson(const FrontendConfig& cfg) {
  nlohmann::json j;
  j["frontend"] = FrontendName(cfg.kind);
  j["frame_length_ms"] = cfg.frame.frame_length_ms;
  j["hop_length_ms"] = cfg.frame.hop_length_ms;
  j["window"] = WindowTypeName(cfg.frame.window);
  switch (cfg.kind) {
    case Frontend::kMel:
    case Frontend::kMfcc:
    case Frontend::kGamma:
      j["num_filters"] = cfg.filterbank.num_filters;
      j["f_min"] = cfg.filterbank.f_min;
      j["f_max"] = cfg.filterbank.f_max;
      if (cfg.kind == Frontend::kMfcc) j["num_ceps"] = cfg.num_ceps;
      if (cfg.kind == Frontend::kGamma) j["gammatone_order"] = cfg.filterbank.gammatone_order;
      break;
    case Frontend::kCqt:
      j["num_filters"] = cfg.filterbank.num_filters;
      j["f_min"] = cfg.filterbank.f_min;
      j["bins_per_octave"] = cfg.filterbank.bins_per_octave;
      break;
    case Frontend::kModgd:
      j["gamma"] = cfg.modgd.gamma;
      j["alpha"] = cfg.modgd.alpha;
      j["lifter_len"] = cfg.modgd.lifter_len;
      j["num_coeffs"] = cfg.modgd.num_coeffs;
      break;
    case Frontend::kSymlet:
      j["wavelet_order"] = cfg.symlet.wavelet_order;
      j["depth"] = cfg.symlet.depth;
      break;
  }
  return j;
}

FrontendConfig FrontendConfigFromJson(const nlohmann::json& j) {
  try {
    FrontendConfig cfg = FrontendConfig::Defaults(
        ParseFrontend(j.value("frontend", std::string("MEL"))));
    cfg.frame.frame_length_ms = j.value("frame_length_ms", cfg.frame.frame_length_ms);
    cfg.frame.hop_length_ms = j.value("hop_length_ms", cfg.frame.hop_length_ms);
    if (j.contains("window")) cfg.frame.window = ParseWindowType(j.at("window").get<std::string>());
    cfg.filterbank.num_filters = j.value("num_filters", cfg.filterbank.num_filters);
    cfg.filterbank.f_min = j.value("f_min", cfg.filterbank.f_min);
    cfg.filterbank.f_max = j.value("f_max", cfg.filterbank.f_max);
    cfg.filterbank.bins_per_octave = j.value("bins_per_octave", cfg.filterbank.bins_per_octave);
    cfg.filterbank.gammatone_order = j.value("gammatone_order", cfg.filterbank.gammatone_order);
    cfg.num_ceps = j.value("num_ceps", cfg.num_ceps);
    cfg.modgd.gamma = j.value("gamma", cfg.modgd.gamma);
    cfg.modgd.alpha = j.value("alpha", cfg.modgd.alpha);
    cfg.modgd.lifter_len = j.value("lifter_len", cfg.modgd.lifter_len);
    cfg.modgd.num_coeffs = j.value("num_coeffs", cfg.modgd.num_coeffs);
    cfg.symlet.wavelet_order = j.value("wavelet_order", cfg.symlet.wavelet_order);
    cfg.symlet.depth = j.value("depth", cfg.symlet.depth);
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("frontend config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("frontend config: ") + e.what());
  }
}

}  // namespace fusebeam
