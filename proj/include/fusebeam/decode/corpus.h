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

#ifndef FUSEBEAM_DECODE_CORPUS_H_
#define FUSEBEAM_DECODE_CORPUS_H_

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fusebeam/decode/beam_search.h"
#include "fusebeam/frontend/frontend.h"
#include "fusebeam/frontend/normalization.h"
#include "fusebeam/metrics/error_rate.h"
#include "fusebeam/scoring/toy_model.h"

#include "json.hpp"

namespace fusebeam {

struct ManifestEntry {
  std::string id;
  std::string audio_path;
  std::optional<std::string> transcript;
};

// UTF-8 TSV with columns id, audio_path and an optional transcript. Empty
// lines and lines starting with '#' are skipped; relative audio paths are
// resolved against `base_dir`. Throws FormatError on malformed lines and
// duplicate ids.
std::vector<ManifestEntry> ParseManifest(std::istream& is,
                                         const std::filesystem::path& base_dir);
std::vector<ManifestEntry> ReadManifest(const std::string& path);

struct LoadedModel {
  std::string name;
  ToyModel model;
  FrontendConfig frontend;
  std::optional<NormalizationStats> stats;
  std::optional<double> dev_error;
};

// Throws ConfigError unless every model uses the same vocabulary.
const Vocabulary& SharedVocabulary(std::span<const LoadedModel> models);

// Waveform -> frontend -> optional normalization -> encoder.
ModelInputs PrepareModelInputs(const AudioBuffer& audio, const LoadedModel& model,
                               int subsample_factor);

struct PreparedUtterance {
  std::string id;
  std::optional<std::string> reference;
  std::vector<ModelInputs> models;
  std::string error;  // set when the audio could not be turned into inputs

  bool ok() const { return error.empty(); }
};

std::vector<PreparedUtterance> PrepareCorpus(std::span<const ManifestEntry> manifest,
                                             std::span<const LoadedModel> models,
                                             int subsample_factor, int jobs);

struct UtteranceResult {
  std::string id;
  std::optional<std::string> reference;
  std::string error;
  DecodeResult result;
  std::string hypothesis;

  bool ok() const { return error.empty(); }
};

struct CorpusReport {
  std::vector<UtteranceResult> utterances;  // manifest order
  int failures = 0;
  // Pooled over successful utterances that carry a reference.
  std::optional<ErrorReport> wer;
  std::optional<ErrorReport> cer;
};

// Decodes every utterance with its first `num_models` members (all when 0).
// Failures are recorded per utterance and the run continues.
CorpusReport DecodePrepared(std::span<const PreparedUtterance> corpus,
                            const Vocabulary& vocab, const NGramLm* lm,
                            const FusionWeights& weights, const DecodeConfig& cfg,
                            int jobs, int num_models = 0);

CorpusReport DecodeCorpus(std::span<const ManifestEntry> manifest,
                          std::span<const LoadedModel> models, const NGramLm* lm,
                          const FusionWeights& weights, const DecodeConfig& cfg,
                          int jobs);

// One JSON-lines record per utterance.
nlohmann::ordered_json UtteranceRecord(const UtteranceResult& utt, const Vocabulary& vocab,
                               std::span<const std::string> model_names);
void WriteResultsJsonl(std::ostream& os, const CorpusReport& report,
                       const Vocabulary& vocab, std::span<const std::string> model_names);

struct AblationRow {
  int num_models = 0;
  FusionWeights weights;
  CorpusReport report;
};

// Row k decodes with the first k models under uniform weights. The LM weight
// follows EnsembleLmWeight(k) unless `fixed_lm_weight` is given. Throws
// ConfigError with fewer than two models.
std::vector<AblationRow> RunAblation(std::span<const PreparedUtterance> corpus,
                                     const Vocabulary& vocab, const NGramLm* lm,
                                     std::optional<double> fixed_lm_weight,
                                     const DecodeConfig& cfg, int jobs,
                                     double ctc_weight = 0.3);

}  // namespace fusebeam

#endif  // FUSEBEAM_DECODE_CORPUS_H_
