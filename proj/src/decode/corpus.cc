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

#include "fusebeam/decode/corpus.h"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "fusebeam/error.h"
#include "fusebeam/parallel.h"

namespace fusebeam {

std::vector<ManifestEntry> ParseManifest(std::istream& is,
                                         const std::filesystem::path& base_dir) {
  std::vector<ManifestEntry> entries;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (std::size_t tab; (tab = line.find('\t', start)) != std::string::npos;
         start = tab + 1) {
      cols.push_back(line.substr(start, tab - start));
    }
    cols.push_back(line.substr(start));
    if (cols.size() < 2 || cols.size() > 3 || cols[0].empty() || cols[1].empty()) {
      throw FormatError("manifest line " + std::to_string(line_no) +
                        ": expected id<TAB>audio_path[<TAB>transcript]");
    }
    if (!seen.insert(cols[0]).second) {
      throw FormatError("manifest line " + std::to_string(line_no) +
                        ": duplicate id " + cols[0]);
    }
    ManifestEntry e;
    e.id = cols[0];
    std::filesystem::path audio(cols[1]);
    e.audio_path = (audio.is_relative() ? base_dir / audio : audio).string();
    if (cols.size() == 3) e.transcript = cols[2];
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<ManifestEntry> ReadManifest(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open manifest " + path);
  return ParseManifest(is, std::filesystem::path(path).parent_path());
}

const Vocabulary& SharedVocabulary(std::span<const LoadedModel> models) {
  if (models.empty()) throw ConfigError("models: at least one model is required");
  for (const LoadedModel& m : models) {
    if (!(m.model.vocab == models[0].model.vocab)) {
      throw ConfigError("models: " + m.name + " uses a different vocabulary than " +
                        models[0].name);
    }
  }
  return models[0].model.vocab;
}

ModelInputs PrepareModelInputs(const AudioBuffer& audio, const LoadedModel& model,
                               int subsample_factor) {
  FeatureMatrix features = ExtractFeatures(audio, model.frontend);
  if (model.stats) features = ApplyNormalization(features, *model.stats);
  EncoderOutput enc = ToyEncode(features, model.model, subsample_factor);
  ModelInputs in;
  in.attention = std::make_shared<ToyAttentionScorer>(model.model, enc.encoded);
  in.ctc = std::move(enc.grid);
  in.speech_frames = features.num_frames();
  return in;
}

std::vector<PreparedUtterance> PrepareCorpus(std::span<const ManifestEntry> manifest,
                                             std::span<const LoadedModel> models,
                                             int subsample_factor, int jobs) {
  std::vector<PreparedUtterance> out(manifest.size());
  ParallelFor(manifest.size(), jobs, [&](std::size_t u) {
    PreparedUtterance& p = out[u];
    p.id = manifest[u].id;
    p.reference = manifest[u].transcript;
    try {
      const AudioBuffer audio = ReadWav(manifest[u].audio_path);
      for (const LoadedModel& m : models) {
        p.models.push_back(PrepareModelInputs(audio, m, subsample_factor));
      }
    } catch (const std::exception& e) {
      p.models.clear();
      p.error = e.what();
    }
  });
  return out;
}

namespace {

std::optional<ErrorReport> PooledRate(const std::vector<UtteranceResult>& utts,
                                      ErrorUnit unit) {
  std::vector<std::string> refs, hyps;
  for (const UtteranceResult& u : utts) {
    if (!u.ok() || !u.reference) continue;
    refs.push_back(*u.reference);
    hyps.push_back(u.hypothesis);
  }
  if (refs.empty()) return std::nullopt;
  try {
    return ComputeErrorRate(refs, hyps, unit);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

}  // namespace

CorpusReport DecodePrepared(std::span<const PreparedUtterance> corpus,
                            const Vocabulary& vocab, const NGramLm* lm,
                            const FusionWeights& weights, const DecodeConfig& cfg,
                            int jobs, int num_models) {
  weights.Validate();
  cfg.Validate();
  CorpusReport report;
  report.utterances.resize(corpus.size());
  ParallelFor(corpus.size(), jobs, [&](std::size_t u) {
    const PreparedUtterance& p = corpus[u];
    UtteranceResult& r = report.utterances[u];
    r.id = p.id;
    r.reference = p.reference;
    if (!p.ok()) {
      r.error = p.error;
      return;
    }
    try {
      const std::size_t m = num_models > 0 ? static_cast<std::size_t>(num_models)
                                           : p.models.size();
      if (m > p.models.size()) throw std::invalid_argument("too few prepared models");
      std::vector<ModelInputs> inputs(p.models.begin(), p.models.begin() + m);
      r.result = EnsembleBeamSearch(std::move(inputs), vocab, lm, weights, cfg);
      if (r.result.n_best.empty()) throw std::runtime_error("no finished hypothesis");
      r.hypothesis = vocab.Decode(r.result.best().labels);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      r.error = e.what();
      r.result = {};
    }
  });
  for (const UtteranceResult& r : report.utterances) report.failures += r.ok() ? 0 : 1;
  report.wer = PooledRate(report.utterances, ErrorUnit::kWord);
  report.cer = PooledRate(report.utterances, ErrorUnit::kChar);
  return report;
}

CorpusReport DecodeCorpus(std::span<const ManifestEntry> manifest,
                          std::span<const LoadedModel> models, const NGramLm* lm,
                          const FusionWeights& weights, const DecodeConfig& cfg,
                          int jobs) {
  const Vocabulary& vocab = SharedVocabulary(models);
  const std::vector<PreparedUtterance> corpus =
      PrepareCorpus(manifest, models, cfg.subsample_factor, jobs);
  return DecodePrepared(corpus, vocab, lm, weights, cfg, jobs);
}

nlohmann::ordered_json UtteranceRecord(const UtteranceResult& utt, const Vocabulary& vocab,
                               std::span<const std::string> model_names) {
  nlohmann::ordered_json rec;
  rec["id"] = utt.id;
  if (!utt.ok()) {
    rec["error"] = utt.error;
    if (utt.reference) rec["ref"] = *utt.reference;
    return rec;
  }
  const NBestEntry& best = utt.result.best();
  rec["hyp"] = utt.hypothesis;
  if (utt.reference) rec["ref"] = *utt.reference;
  rec["combined_score"] = best.score;
  nlohmann::ordered_json per_scorer = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < best.breakdown.models.size(); ++i) {
    nlohmann::ordered_json m;
    m["model"] = i < model_names.size() ? model_names[i] : std::to_string(i);
    m["attention"] = best.breakdown.models[i][kAttention];
    m["ctc"] = best.breakdown.models[i][kCtc];
    per_scorer.push_back(std::move(m));
  }
  rec["per_scorer_scores"] = {{"models", per_scorer}, {"lm", best.breakdown.lm}};
  nlohmann::ordered_json n_best = nlohmann::ordered_json::array();
  for (const NBestEntry& e : utt.result.n_best) {
    n_best.push_back({{"hyp", vocab.Decode(e.labels)}, {"tokens", e.labels},
                      {"score", e.score}});
  }
  rec["n_best"] = std::move(n_best);
  return rec;
}

void WriteResultsJsonl(std::ostream& os, const CorpusReport& report,
                       const Vocabulary& vocab, std::span<const std::string> model_names) {
  for (const UtteranceResult& u : report.utterances) {
    os << UtteranceRecord(u, vocab, model_names).dump() << '\n';
  }
}

std::vector<AblationRow> RunAblation(std::span<const PreparedUtterance> corpus,
                                     const Vocabulary& vocab, const NGramLm* lm,
                                     std::optional<double> fixed_lm_weight,
                                     const DecodeConfig& cfg, int jobs,
                                     double ctc_weight) {
  std::size_t num_models = 0;
  for (const PreparedUtterance& p : corpus) {
    if (p.ok()) num_models = std::max(num_models, p.models.size());
  }
  if (!corpus.empty() && num_models < 2) {
    throw ConfigError("ablation needs at least two models");
  }
  std::vector<AblationRow> rows;
  for (std::size_t k = 1; k <= num_models; ++k) {
    AblationRow row;
    row.num_models = static_cast<int>(k);
    row.weights = FusionWeights::Uniform(row.num_models, ctc_weight);
    row.weights.lm_weight = fixed_lm_weight ? *fixed_lm_weight
                                            : EnsembleLmWeight(row.num_models);
    row.report = DecodePrepared(corpus, vocab, lm, row.weights, cfg, jobs, row.num_models);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace fusebeam
