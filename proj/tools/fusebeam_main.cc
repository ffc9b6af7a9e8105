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

// fusebeam: feature extraction, ensemble decoding, ablation, diversity and
// scoring from the command line.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.h"
#include "fusebeam/error.h"

namespace {

namespace fs = std::filesystem;
using fusebeam::cli::RunConfig;
using nlohmann::json;

std::string Absolute(const std::string& p) {
  return p.empty() ? p : fs::absolute(p).lexically_normal().string();
}

struct RunFlags {
  std::string config;
  std::string manifest;
  std::vector<std::string> models;
  std::string alpha;
  std::optional<double> ctc_weight;
  std::string lm;
  std::string lm_weight;
  std::optional<int> beam_size, pre_beam_size, subsample_factor, minlen;
  std::optional<double> maxlen_ratio;
  std::optional<double> mix_attention, mix_ctc;
  std::vector<std::string> order;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

void AddRunFlags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config, "JSON run config; flags override its fields");
  cmd->add_option("--manifest", f.manifest, "TSV manifest: id, audio path, transcript");
  cmd->add_option("--model", f.models, "name:frontend:path[:stats], repeatable");
  cmd->add_option("--alpha", f.alpha, "uniform, validation_weighted or a JSON M x 2 matrix");
  cmd->add_option("--ctc-weight", f.ctc_weight, "CTC share of the fusion weights");
  cmd->add_option("--lm", f.lm, "ARPA language model");
  cmd->add_option("--lm-weight", f.lm_weight, "auto or a number");
  cmd->add_option("--beam-size", f.beam_size);
  cmd->add_option("--pre-beam-size", f.pre_beam_size);
  cmd->add_option("--maxlen-ratio", f.maxlen_ratio);
  cmd->add_option("--subsample-factor", f.subsample_factor);
  cmd->add_option("--minlen", f.minlen);
  cmd->add_option("--mix-attention", f.mix_attention, "teacher-forcing attention weight");
  cmd->add_option("--mix-ctc", f.mix_ctc, "teacher-forcing CTC weight");
  cmd->add_option("--order", f.order, "model names in diversity order")->delimiter(',');
  cmd->add_option("--out-dir", f.out_dir);
  cmd->add_option("--seed", f.seed);
  cmd->add_option("--jobs", f.jobs, "worker threads (default: $FUSEBEAM_JOBS or 1)");
}

RunConfig BuildRunConfig(const RunFlags& f) {
  json j = fusebeam::cli::LoadJsonFile(f.config);
  if (!j.is_object()) throw fusebeam::ConfigError("config: expected a JSON object");
  if (!f.manifest.empty()) j["manifest"] = Absolute(f.manifest);
  if (!f.models.empty()) {
    j["models"] = json::array();
    for (const std::string& m : f.models) {
      json entry = fusebeam::cli::ModelFlagToJson(m);
      entry["path"] = Absolute(entry["path"].get<std::string>());
      if (entry.contains("stats")) entry["stats"] = Absolute(entry["stats"].get<std::string>());
      j["models"].push_back(entry);
    }
  }
  if (!f.alpha.empty()) j["alpha"] = fusebeam::cli::AlphaFlagToJson(f.alpha);
  if (f.ctc_weight) j["ctc_weight"] = *f.ctc_weight;
  if (!f.lm.empty()) j["lm"] = Absolute(f.lm);
  if (!f.lm_weight.empty()) j["lm_weight"] = fusebeam::cli::LmWeightFlagToJson(f.lm_weight);
  if (f.beam_size) j["beam_size"] = *f.beam_size;
  if (f.pre_beam_size) j["pre_beam_size"] = *f.pre_beam_size;
  if (f.maxlen_ratio) j["maxlen_ratio"] = *f.maxlen_ratio;
  if (f.subsample_factor) j["subsample_factor"] = *f.subsample_factor;
  if (f.minlen) j["minlen"] = *f.minlen;
  if (f.mix_attention) j["mix"]["attention"] = *f.mix_attention;
  if (f.mix_ctc) j["mix"]["ctc"] = *f.mix_ctc;
  if (!f.order.empty()) j["order"] = f.order;
  if (!f.out_dir.empty()) j["out_dir"] = Absolute(f.out_dir);
  if (f.seed) j["seed"] = *f.seed;
  const fs::path base = f.config.empty() ? fs::current_path()
                                         : fs::absolute(f.config).parent_path();
  return fusebeam::cli::RunConfigFromJson(j, base);
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = fusebeam::cli;
  CLI::App app{"Late-fusion ensemble decoding over diverse audio representations"};
  app.require_subcommand(1);

  cli::FeaturesOptions feat;
  feat.jobs = cli::DefaultJobs();
  std::string feat_config, frontend_name;
  auto* features = app.add_subcommand("features", "Extract FEAT1 feature files");
  features->add_option("--manifest", feat.manifest)->required();
  features->add_option("--frontend", frontend_name, "MEL, MFCC, GAMMA, CQT, MODGD or SYMLET");
  features->add_option("--config", feat_config, "JSON frontend parameters");
  features->add_option("--out-dir", feat.out_dir)->required();
  features->add_option("--stats-out", feat.stats_out, "fit and write global normalization");
  features->add_option("--stats-in", feat.stats_in, "apply existing normalization");
  features->add_option("--time-masks", feat.time_masks.count);
  features->add_option("--time-mask-width", feat.time_masks.width);
  features->add_option("--freq-masks", feat.freq_masks.count);
  features->add_option("--freq-mask-width", feat.freq_masks.width);
  features->add_option("--seed", feat.seed);
  features->add_option("--jobs", feat.jobs);

  RunFlags decode_flags, ablation_flags, diversity_flags;
  decode_flags.jobs = ablation_flags.jobs = diversity_flags.jobs = cli::DefaultJobs();
  auto* decode = app.add_subcommand("decode", "Ensemble beam search over a manifest");
  AddRunFlags(decode, decode_flags);
  auto* ablation = app.add_subcommand("ablation", "Error rates of growing prefix ensembles");
  AddRunFlags(ablation, ablation_flags);
  auto* diversity = app.add_subcommand("diversity", "Teacher-forced outcome analysis");
  AddRunFlags(diversity, diversity_flags);

  cli::ScoreOptions score;
  std::string unit = "word";
  auto* score_cmd = app.add_subcommand("score", "Pooled WER or CER of aligned files");
  score_cmd->add_option("--refs", score.refs)->required();
  score_cmd->add_option("--hyps", score.hyps)->required();
  score_cmd->add_option("--unit", unit, "word or char");
  score_cmd->add_flag("--keep-whitespace", score.keep_whitespace);
  score_cmd->add_option("--report", score.report_json, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfigError;
  }

  return cli::RunGuarded(
      [&]() -> int {
        if (*features) {
          feat.frontend = cli::LoadJsonFile(feat_config);
          if (!frontend_name.empty()) feat.frontend["frontend"] = frontend_name;
          return cli::CmdFeatures(feat, std::cout, std::cerr);
        }
        if (*decode) {
          return cli::CmdDecode(BuildRunConfig(decode_flags), decode_flags.jobs, std::cout,
                                std::cerr);
        }
        if (*ablation) {
          return cli::CmdAblation(BuildRunConfig(ablation_flags), ablation_flags.jobs,
                                  std::cout, std::cerr);
        }
        if (*diversity) {
          return cli::CmdDiversity(BuildRunConfig(diversity_flags), diversity_flags.jobs,
                                   std::cout, std::cerr);
        }
        score.unit = fusebeam::ParseErrorUnit(unit);
        return cli::CmdScore(score, std::cout, std::cerr);
      },
      std::cerr);
}
