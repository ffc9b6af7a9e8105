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

#include "commands.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#include "fusebeam/decode/corpus.h"
#include "fusebeam/diversity/outcomes.h"
#include "fusebeam/error.h"
#include "fusebeam/frontend/feature_io.h"
#include "fusebeam/parallel.h"

namespace fusebeam::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

int DefaultJobs() {
  const char* env = std::getenv("FUSEBEAM_JOBS");
  if (env == nullptr) return 1;
  try {
    const int jobs = std::stoi(env);
    return jobs > 0 ? jobs : 1;
  } catch (const std::logic_error&) {
    return 1;
  }
}

int RunGuarded(const std::function<int()>& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const FormatError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitItemFailure;
  }
}

void WriteFileAtomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw FormatError("cannot write " + tmp.string());
    os << content;
    if (!os) throw FormatError("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

namespace {

void RequireOutDir(const std::string& dir) {
  if (dir.empty()) throw ConfigError("config field 'out_dir': required");
  fs::create_directories(dir);
}

std::vector<ManifestEntry> LoadManifest(const std::string& path) {
  if (path.empty()) throw ConfigError("config field 'manifest': required");
  try {
    return ReadManifest(path);
  } catch (const FormatError& e) {
    throw ConfigError(std::string("config field 'manifest': ") + e.what());
  }
}

std::unique_ptr<NGramLm> LoadLm(const RunConfig& cfg, const Vocabulary& vocab) {
  if (cfg.lm_path.empty()) return nullptr;
  try {
    return std::make_unique<NGramLm>(NGramLm::LoadArpa(cfg.lm_path, vocab));
  } catch (const FormatError& e) {
    throw ConfigError(std::string("config field 'lm': ") + e.what());
  }
}

std::vector<std::string> ModelNames(const std::vector<LoadedModel>& models) {
  std::vector<std::string> names;
  for (const LoadedModel& m : models) names.push_back(m.name);
  return names;
}

void PrintHeader(std::ostream& out, const std::string& command, const RunConfig& cfg,
                 const FusionWeights& w, bool has_lm, std::size_t utterances, int jobs) {
  out << "fusebeam " << command << ": " << w.num_models() << " model(s), " << utterances
      << " utterance(s), jobs " << jobs << '\n';
  out << "alpha: " << FormatAlpha(w.alpha) << '\n';
  out << "lm_weight: " << FormatNumber(w.lm_weight) << (cfg.lm_weight ? " (fixed)" : " (auto)")
      << (has_lm ? "" : " [no lm loaded]") << '\n';
  out << "beam_size: " << cfg.decode.beam_size << " pre_beam_size: " << cfg.decode.PreBeamSize()
      << " maxlen_ratio: " << FormatNumber(cfg.decode.maxlen_ratio)
      << " subsample_factor: " << cfg.decode.subsample_factor
      << " minlen: " << cfg.decode.minlen << '\n';
}

void ReportFailures(const CorpusReport& report, std::ostream& err) {
  for (const UtteranceResult& u : report.utterances) {
    if (!u.ok()) err << "utterance " << u.id << ": " << u.error << '\n';
  }
}

// Reads "id<TAB>text" lines. A third column (manifest layout) supplies the
// text; decode results are read from JSON lines.
std::vector<std::pair<std::string, std::string>> ReadTextTable(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path);
  std::vector<std::pair<std::string, std::string>> rows;
  std::string line;
  const bool jsonl = fs::path(path).extension() == ".jsonl";
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (jsonl) {
      try {
        const json rec = json::parse(line);
        rows.emplace_back(rec.at("id").get<std::string>(), rec.value("hyp", std::string()));
      } catch (const json::exception& e) {
        throw FormatError(path + ": " + e.what());
      }
      continue;
    }
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, '\t');) cols.push_back(c);
    if (cols.empty()) continue;
    std::string text = cols.size() == 1 ? "" : cols.back();
    if (cols.size() == 2 && line.back() == '\t') text.clear();
    rows.emplace_back(cols[0], text);
  }
  return rows;
}

}  // namespace

ordered_json ScoreReportJson(const std::optional<ErrorReport>& wer,
                             const std::optional<ErrorReport>& cer, ErrorUnit primary) {
  ordered_json j;
  j["wer"] = wer ? json(wer->Percent()) : json(nullptr);
  j["cer"] = cer ? json(cer->Percent()) : json(nullptr);
  const std::optional<ErrorReport>& p = primary == ErrorUnit::kWord ? wer : cer;
  j["unit"] = ErrorUnitName(primary);
  j["S"] = p ? json(p->ops.substitutions) : json(nullptr);
  j["D"] = p ? json(p->ops.deletions) : json(nullptr);
  j["I"] = p ? json(p->ops.insertions) : json(nullptr);
  j["N"] = p ? json(p->reference_tokens) : json(nullptr);
  return j;
}

std::string ScoreReportText(const std::optional<ErrorReport>& wer,
                            const std::optional<ErrorReport>& cer) {
  std::ostringstream os;
  for (const auto* r : {&wer, &cer}) {
    if (!*r) continue;
    char pct[32];
    std::snprintf(pct, sizeof(pct), "%.2f", (*r)->Percent());
    os << ((*r)->unit == ErrorUnit::kWord ? "WER " : "CER ") << pct << "% [S=" << (*r)->ops.substitutions
       << " D=" << (*r)->ops.deletions << " I=" << (*r)->ops.insertions
       << " N=" << (*r)->reference_tokens << "]\n";
  }
  return os.str();
}

int CmdFeatures(const FeaturesOptions& opts, std::ostream& out, std::ostream& err) {
  const FrontendConfig fe = FrontendConfigFromJson(opts.frontend);
  if (opts.out_dir.empty()) throw ConfigError("--out-dir: required");
  const std::vector<ManifestEntry> manifest = LoadManifest(opts.manifest);
  std::optional<NormalizationStats> stats_in;
  if (!opts.stats_in.empty()) {
    try {
      stats_in = NormalizationStats::Load(opts.stats_in);
    } catch (const FormatError& e) {
      throw ConfigError(std::string("--stats-in: ") + e.what());
    }
  }
  fs::create_directories(opts.out_dir);

  std::vector<std::optional<FeatureMatrix>> raw(manifest.size());
  std::vector<std::string> errors(manifest.size());
  ParallelFor(manifest.size(), opts.jobs, [&](std::size_t u) {
    try {
      const ManifestEntry& e = manifest[u];
      if (e.id.find('/') != std::string::npos || e.id == "." || e.id == "..") {
        throw std::invalid_argument("id cannot be used as a file name");
      }
      FeatureMatrix f = ExtractFeatures(ReadWav(e.audio_path), fe);
      FeatureMatrix stored = stats_in ? ApplyNormalization(f, *stats_in) : f;
      if (opts.time_masks.count > 0 || opts.freq_masks.count > 0) {
        stored = SpecMask(stored, opts.seed + u, opts.time_masks, opts.freq_masks);
      }
      SaveFeat1((fs::path(opts.out_dir) / (e.id + ".feat")).string(), stored);
      raw[u] = std::move(f);
    } catch (const std::exception& ex) {
      errors[u] = ex.what();
    }
  });

  int failures = 0;
  std::vector<FeatureMatrix> ok;
  for (std::size_t u = 0; u < manifest.size(); ++u) {
    if (!errors[u].empty()) {
      err << "utterance " << manifest[u].id << ": " << errors[u] << '\n';
      ++failures;
    } else {
      ok.push_back(std::move(*raw[u]));
    }
  }
  if (!opts.stats_out.empty() && !ok.empty()) {
    WriteFileAtomic(opts.stats_out, FitGlobalNormalization(ok).ToJson());
  }
  ordered_json echo;
  echo["manifest"] = opts.manifest;
  echo["frontend"] = FrontendConfigToJson(fe);
  echo["stats_in"] = opts.stats_in;
  echo["stats_out"] = opts.stats_out;
  echo["time_masks"] = {{"count", opts.time_masks.count}, {"width", opts.time_masks.width}};
  echo["freq_masks"] = {{"count", opts.freq_masks.count}, {"width", opts.freq_masks.width}};
  echo["seed"] = opts.seed;
  WriteFileAtomic((fs::path(opts.out_dir) / "features_config.json").string(),
                  echo.dump(2) + "\n");
  out << "fusebeam features: " << FrontendName(fe.kind) << ", " << manifest.size()
      << " utterance(s), " << failures << " failure(s)\n";
  return failures > 0 ? kExitItemFailure : kExitOk;
}

int CmdDecode(const RunConfig& cfg, int jobs, std::ostream& out, std::ostream& err) {
  RequireOutDir(cfg.out_dir);
  const std::vector<LoadedModel> models = LoadModels(cfg);
  const FusionWeights weights = ResolveWeights(cfg, static_cast<int>(models.size()));
  const Vocabulary& vocab = SharedVocabulary(models);
  const std::unique_ptr<NGramLm> lm = LoadLm(cfg, vocab);
  const std::vector<ManifestEntry> manifest = LoadManifest(cfg.manifest);

  PrintHeader(out, "decode", cfg, weights, lm != nullptr, manifest.size(), jobs);
  WriteFileAtomic((fs::path(cfg.out_dir) / "config.json").string(),
                  ResolvedConfigJson(cfg, weights).dump(2) + "\n");

  const CorpusReport report = DecodeCorpus(manifest, models, lm.get(), weights, cfg.decode, jobs);
  const std::vector<std::string> names = ModelNames(models);
  std::ostringstream jsonl;
  WriteResultsJsonl(jsonl, report, vocab, names);
  WriteFileAtomic((fs::path(cfg.out_dir) / "results.jsonl").string(), jsonl.str());
  ReportFailures(report, err);

  if (report.wer || report.cer) {
    WriteFileAtomic((fs::path(cfg.out_dir) / "report.json").string(),
                    ScoreReportJson(report.wer, report.cer, ErrorUnit::kWord).dump(2) + "\n");
    const std::string text = ScoreReportText(report.wer, report.cer);
    WriteFileAtomic((fs::path(cfg.out_dir) / "report.txt").string(), text);
    out << text;
  }
  out << report.utterances.size() - report.failures << " decoded, " << report.failures
      << " failed\n";
  return report.failures > 0 ? kExitItemFailure : kExitOk;
}

int CmdAblation(const RunConfig& cfg, int jobs, std::ostream& out, std::ostream& err) {
  RequireOutDir(cfg.out_dir);
  const std::vector<LoadedModel> models = LoadModels(cfg);
  if (models.size() < 2) throw ConfigError("config field 'models': ablation needs at least two");
  const Vocabulary& vocab = SharedVocabulary(models);
  const std::unique_ptr<NGramLm> lm = LoadLm(cfg, vocab);
  const std::vector<ManifestEntry> manifest = LoadManifest(cfg.manifest);
  for (const ManifestEntry& e : manifest) {
    if (!e.transcript) throw ConfigError("ablation: utterance " + e.id + " has no reference");
  }

  RunConfig uniform = cfg;
  uniform.alpha_mode = AlphaMode::kUniform;
  const FusionWeights full = ResolveWeights(uniform, static_cast<int>(models.size()));
  PrintHeader(out, "ablation", cfg, full, lm != nullptr, manifest.size(), jobs);
  WriteFileAtomic((fs::path(cfg.out_dir) / "config.json").string(),
                  ResolvedConfigJson(uniform, full).dump(2) + "\n");

  const std::vector<PreparedUtterance> corpus =
      PrepareCorpus(manifest, models, cfg.decode.subsample_factor, jobs);
  const std::vector<AblationRow> rows =
      RunAblation(corpus, vocab, lm.get(), cfg.lm_weight, cfg.decode, jobs, cfg.ctc_weight);

  std::ostringstream csv;
  csv << "num_models,models,wer,cer,S,D,I,N,failures\n";
  ordered_json doc = ordered_json::array();
  int failures = 0;
  for (const AblationRow& row : rows) {
    std::string names;
    for (int k = 0; k < row.num_models; ++k) names += (k ? "+" : "") + models[k].name;
    const auto& r = row.report;
    char wer[32] = "nan", cer[32] = "nan";
    if (r.wer) std::snprintf(wer, sizeof(wer), "%.4f", r.wer->Percent());
    if (r.cer) std::snprintf(cer, sizeof(cer), "%.4f", r.cer->Percent());
    csv << row.num_models << ',' << names << ',' << wer << ',' << cer;
    if (r.wer) {
      csv << ',' << r.wer->ops.substitutions << ',' << r.wer->ops.deletions << ','
          << r.wer->ops.insertions << ',' << r.wer->reference_tokens;
    } else {
      csv << ",,,,";
    }
    csv << ',' << r.failures << '\n';
    out << names << ": WER " << wer << "% CER " << cer << "%\n";
    ordered_json j;
    j["num_models"] = row.num_models;
    j["models"] = names;
    j["alpha"] = row.weights.alpha;
    j["lm_weight"] = row.weights.lm_weight;
    j["report"] = ScoreReportJson(r.wer, r.cer, ErrorUnit::kWord);
    j["failures"] = r.failures;
    doc.push_back(std::move(j));
    failures = std::max(failures, r.failures);
    if (row.num_models == 1) ReportFailures(r, err);
  }
  WriteFileAtomic((fs::path(cfg.out_dir) / "ablation.csv").string(), csv.str());
  WriteFileAtomic((fs::path(cfg.out_dir) / "ablation.json").string(), doc.dump(2) + "\n");
  return failures > 0 ? kExitItemFailure : kExitOk;
}

int CmdDiversity(const RunConfig& cfg, int jobs, std::ostream& out, std::ostream& err) {
  RequireOutDir(cfg.out_dir);
  const std::vector<LoadedModel> models = LoadModels(cfg);
  const Vocabulary& vocab = SharedVocabulary(models);
  const std::vector<ManifestEntry> manifest = LoadManifest(cfg.manifest);
  for (const ManifestEntry& e : manifest) {
    if (!e.transcript) throw ConfigError("diversity: utterance " + e.id + " has no reference");
  }
  std::vector<int> order = cfg.order;
  if (order.empty()) {
    order.resize(models.size());
    std::iota(order.begin(), order.end(), 0);
  }
  const FusionWeights weights = FusionWeights::Uniform(static_cast<int>(models.size()), cfg.ctc_weight);
  WriteFileAtomic((fs::path(cfg.out_dir) / "config.json").string(),
                  ResolvedConfigJson(cfg, weights).dump(2) + "\n");

  const std::vector<PreparedUtterance> corpus =
      PrepareCorpus(manifest, models, cfg.decode.subsample_factor, jobs);
  const OutcomeBuild build = BuildOutcomeMatrix(corpus, ModelNames(models), vocab, cfg.mix, jobs);
  for (const auto& [id, error] : build.failures) err << "utterance " << id << ": " << error << '\n';
  const TokenOutcomeMatrix& m = build.matrix;

  std::ostringstream outcomes;
  m.WriteCsv(outcomes);
  WriteFileAtomic((fs::path(cfg.out_dir) / "outcomes.csv").string(), outcomes.str());
  out << "fusebeam diversity: " << m.num_models() << " model(s), " << m.num_rows()
      << " token(s)\n";
  if (m.num_rows() == 0) {
    err << "no reference tokens to analyse\n";
    return kExitItemFailure;
  }
  std::vector<double> gains;
  try {
    gains = IncrementalGain(m, order);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config field 'order': ") + e.what());
  }
  const DifficultyHistogram hist = DifficultyMeasure(m);
  const double floor = OracleErrorFloor(m);

  std::ostringstream difficulty, gain_csv;
  WriteDifficultyCsv(difficulty, hist);
  WriteGainCsv(gain_csv, m, order, gains);
  WriteFileAtomic((fs::path(cfg.out_dir) / "difficulty.csv").string(), difficulty.str());
  WriteFileAtomic((fs::path(cfg.out_dir) / "gains.csv").string(), gain_csv.str());
  ordered_json summary;
  summary["num_tokens"] = m.num_rows();
  summary["difficulty"] = hist.buckets;
  ordered_json g = ordered_json::array();
  for (std::size_t k = 0; k < gains.size(); ++k) {
    g.push_back({{"model", m.model_names()[order[k]]}, {"gain", gains[k]}});
  }
  summary["gains"] = std::move(g);
  summary["oracle_error_floor"] = floor;
  WriteFileAtomic((fs::path(cfg.out_dir) / "summary.json").string(), summary.dump(2) + "\n");
  out << difficulty.str() << gain_csv.str() << "oracle_error_floor," << FormatNumber(100.0 * floor)
      << "%\n";
  return build.failures.empty() ? kExitOk : kExitItemFailure;
}

int CmdScore(const ScoreOptions& opts, std::ostream& out, std::ostream& /*err*/) {
  const auto refs = ReadTextTable(opts.refs);
  const auto hyps = ReadTextTable(opts.hyps);
  std::map<std::string, std::string> hyp_by_id;
  for (const auto& [id, text] : hyps) {
    if (!hyp_by_id.emplace(id, text).second) throw FormatError("duplicate hypothesis id " + id);
  }
  if (hyp_by_id.size() != refs.size()) {
    throw FormatError("reference and hypothesis ids differ: " + std::to_string(refs.size()) +
                      " references, " + std::to_string(hyp_by_id.size()) + " hypotheses");
  }
  std::vector<std::string> ref_text, hyp_text;
  for (const auto& [id, text] : refs) {
    const auto it = hyp_by_id.find(id);
    if (it == hyp_by_id.end()) throw FormatError("no hypothesis for id " + id);
    ref_text.push_back(text);
    hyp_text.push_back(it->second);
  }
  TextNormalization norm;
  norm.drop_whitespace_for_chars = !opts.keep_whitespace;
  std::optional<ErrorReport> wer, cer;
  try {
    wer = ComputeErrorRate(ref_text, hyp_text, ErrorUnit::kWord, norm);
  } catch (const std::invalid_argument&) {
  }
  try {
    cer = ComputeErrorRate(ref_text, hyp_text, ErrorUnit::kChar, norm);
  } catch (const std::invalid_argument&) {
  }
  if (!(opts.unit == ErrorUnit::kWord ? wer : cer)) {
    throw FormatError("references contain no tokens");
  }
  const ordered_json report = ScoreReportJson(wer, cer, opts.unit);
  if (!opts.report_json.empty()) WriteFileAtomic(opts.report_json, report.dump(2) + "\n");
  out << ScoreReportText(opts.unit == ErrorUnit::kWord ? wer : std::nullopt,
                         opts.unit == ErrorUnit::kChar ? cer : std::nullopt);
  out << report.dump() << '\n';
  return kExitOk;
}

}  // namespace fusebeam::cli
